#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "ksat/error.hpp"
#include "ksat/gen.hpp"
#include "ksat/rng.hpp"
#include "ksat/saddle.hpp"

using namespace ksat;

namespace {

std::vector<DegreePair> sampled_pairs(std::uint32_t n, std::uint64_t m, std::uint64_t seed)
{
    return degree_pairs(sample_degree_sequence(n, m, 3, seed));
}

double relative_error(const Asymptotic& a, const BigInt& exact)
{
    return std::fabs(std::expm1(a.log_value - log_big(exact)));
}

}  // namespace

TEST_CASE("exact coefficient examples")
{
    CHECK(exact_coefficient({{1, 1}, {1, 1}}, 2) == 4);
    CHECK(exact_coefficient({{2, 1}, {2, 1}}, 3) == 2);
    CHECK(exact_coefficient({{2, 1}, {2, 1}}, 4) == 1);
    CHECK(exact_coefficient({{2, 1}, {2, 1}}, 5) == 0);
    const std::vector<DegreePair> ones(40, {1, 1});
    BigInt two_n = 1;
    two_n <<= 40;
    CHECK(exact_coefficient(ones, 40) == two_n);
}

TEST_CASE("exact coefficient invariants")
{
    Rng rng(3);
    std::uniform_int_distribution<std::int64_t> deg(0, 6);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<DegreePair> pairs(12);
        for (auto& p : pairs) p = {deg(rng), deg(rng)};
        const std::int64_t M = total_degree(pairs);
        BigInt total = 0;
        for (std::int64_t t = 0; t <= M; ++t) total += exact_coefficient(pairs, t);
        CHECK(total == BigInt(1) << 12);
        std::vector<DegreePair> swapped = pairs;
        swapped[rep % 12] = {pairs[rep % 12].second, pairs[rep % 12].first};
        for (std::int64_t t = 0; t <= M; t += 3) CHECK(exact_coefficient(pairs, t) == exact_coefficient(swapped, t));
    }
}

TEST_CASE("simple central asymptotic")
{
    SUBCASE("all tied is exact")
    {
        const std::vector<DegreePair> tied{{2, 2}, {3, 3}, {0, 0}, {5, 5}};
        const Asymptotic a = coeff_simple_asymptotic(tied);
        CHECK(a.exact);
        CHECK(a.value() == doctest::Approx(16.0).epsilon(1e-12));
    }
    SUBCASE("200 pairs of (3, 2)")
    {
        const std::vector<DegreePair> pairs(200, {3, 2});
        const BigInt exact = exact_coefficient(pairs, total_degree(pairs) / 2);
        CHECK(relative_error(coeff_simple_asymptotic(pairs), exact) < 0.05);
    }
    SUBCASE("even differences double the central mass")
    {
        const std::vector<DegreePair> pairs(200, {3, 1});
        const BigInt exact = exact_coefficient(pairs, total_degree(pairs) / 2);
        CHECK(relative_error(coeff_simple_asymptotic(pairs), exact) < 0.05);
    }
    SUBCASE("sampled pairs: error shrinks with N")
    {
        double prev = 1.0;
        for (std::uint32_t n : {100u, 200u, 400u}) {
            const auto pairs = sampled_pairs(n, 3 * n, 1);
            const BigInt exact = exact_coefficient(pairs, total_degree(pairs) / 2);
            const double err = relative_error(coeff_simple_asymptotic(pairs), exact);
            if (n == 200) CHECK(err < 0.05);
            CHECK(err < prev);
            prev = err;
        }
    }
    CHECK_THROWS(coeff_simple_asymptotic(std::vector<DegreePair>{{2, 1}}));
}

TEST_CASE("rho equation")
{
    const auto pairs = sampled_pairs(200, 600, 4);
    CHECK(solve_rho(pairs, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    const double eps = 1e-3;
    CHECK(std::fabs(solve_rho(pairs, eps) - rho_expansion(pairs, eps)) < 50 * eps * eps);
    double prev = solve_rho(pairs, -0.2);
    for (double e = -0.15; e < 0.2; e += 0.05) {
        const double rho = solve_rho(pairs, e);
        CHECK(rho < prev);
        prev = rho;
        const std::int64_t M = total_degree(pairs);
        double rhs = 0;
        for (auto [a, b] : pairs) {
            const double g = static_cast<double>(a + b);
            rhs += g / (2.0 + 2.0 * std::pow(rho, g));
        }
        CHECK(std::fabs(rhs - (0.25 + e) * M) <= 1e-9 * M);
    }
    CHECK_THROWS_AS(solve_rho(pairs, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(solve_rho(pairs, -0.3), std::invalid_argument);
}

TEST_CASE("triple growth and quadratic form")
{
    const auto pairs = sampled_pairs(60, 200, 1);
    CHECK(log_growth_triple(pairs, 0.0, 1.0) == doctest::Approx(60 * std::log(4.0)).epsilon(1e-12));
    for (double rho : {0.9, 1.0, 1.1}) {
        const TripleQuadraticForm q = triple_quadratic_form(pairs, rho);
        CHECK(4 * q.s_tt * q.s_tt - q.s_tphi * q.s_tphi >= 0);
        CHECK(2 * q.s_psipsi * q.s_tt - q.s_tpsi * q.s_tpsi - q.s_psipsi * q.s_tphi >= 0);
    }
}

TEST_CASE("triple coefficient against the exact oracle")
{
    SUBCASE("all tied at N = 60")
    {
        const std::vector<DegreePair> tied(60, {5, 5});
        const BigInt exact = exact_triple_coefficient(tied, 0.0);
        CHECK(relative_error(coeff_triple_asymptotic(tied, 0.0), exact) < 0.10);
    }
    SUBCASE("sampled at N = 60")
    {
        const auto pairs = sampled_pairs(60, 200, 1);
        for (double eps : {0.0, 0.02}) {
            CAPTURE(eps);
            const BigInt exact = exact_triple_coefficient(pairs, eps);
            CHECK(relative_error(coeff_triple_asymptotic(pairs, eps), exact) < 0.10);
        }
    }
    SUBCASE("marginalization identity")
    {
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto pairs = sampled_pairs(16, 40 + 2 * seed, seed);
            const std::int64_t M = total_degree(pairs);
            if (M % 2) continue;
            BigInt total = 0;
            for (const BigInt& c : exact_triple_u_profile(pairs)) total += c;
            const BigInt central = exact_coefficient(pairs, M / 2);
            CHECK(total == central * central);
        }
    }
    SUBCASE("non-integral targets")
    {
        const auto pairs = sampled_pairs(20, 60, 2);  // M = 180
        CHECK_THROWS_AS(exact_triple_coefficient(pairs, 0.02), InfeasibleError);
        CHECK_THROWS_AS(coeff_triple_asymptotic(pairs, 0.02), InfeasibleError);
        CHECK_THROWS_AS(exact_triple_coefficient(sampled_pairs(20, 61, 2), 0.0), InfeasibleError);
    }
}

TEST_CASE("local limit theorem")
{
    SUBCASE("fair coin")
    {
        const LocalLimit ll = local_limit(Pgf::bernoulli(0.5), 0.5, 100);
        CHECK(ll.zeta == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(ll.probability == doctest::Approx(0.0798).epsilon(1e-3));
        const double exact = std::exp(std::lgamma(101.0) - 2 * std::lgamma(51.0) - 100 * std::numbers::ln2);
        CHECK(exact == doctest::Approx(0.0796).epsilon(1e-3));
        CHECK(std::fabs(ll.probability / exact - 1) < 0.01);
    }
    SUBCASE("Poisson at the mean")
    {
        const double lambda = 3, n = 100, t = n * lambda;
        const LocalLimit ll = local_limit(Pgf::poisson(lambda), lambda, 100);
        CHECK(ll.zeta == doctest::Approx(1.0).epsilon(1e-10));
        const double exact = std::exp(-t + t * std::log(t) - std::lgamma(t + 1));
        CHECK(std::fabs(ll.probability / exact - 1) < 0.01);
    }
    SUBCASE("off the mean")
    {
        // Binomial(200, 0.3) at 80 against the exact mass.
        const LocalLimit ll = local_limit(Pgf::bernoulli(0.3), 0.4, 200);
        CHECK(ll.zeta > 1);
        const double exact =
            std::exp(std::lgamma(201.0) - std::lgamma(81.0) - std::lgamma(121.0) + 80 * std::log(0.3) + 120 * std::log(0.7));
        CHECK(std::fabs(ll.probability / exact - 1) < 0.01);
    }
    SUBCASE("finite support")
    {
        const Pgf die = Pgf::finite({0, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6, 1.0 / 6});
        CHECK(die.mean == doctest::Approx(3.5));
        CHECK(local_limit(die, 3.5, 50).zeta == doctest::Approx(1.0).epsilon(1e-10));
        CHECK_THROWS(local_limit(die, 6.0, 50));
        CHECK_THROWS(local_limit(die, 0.5, 50));
    }
}
