#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "helpers.hpp"
#include "ksat/census.hpp"
#include "ksat/error.hpp"
#include "ksat/gen.hpp"
#include "ksat/marginals.hpp"
#include "ksat/rng.hpp"

using namespace ksat;
using ksat::testing::make_formula;

namespace {

Assignment random_assignment(std::size_t n, Rng& rng)
{
    Assignment a(n);
    std::bernoulli_distribution coin(0.5);
    for (std::size_t x = 0; x < n; ++x) a.set(x, coin(rng));
    return a;
}

std::uint64_t binom(unsigned n, unsigned k)
{
    std::uint64_t c = 1;
    for (unsigned i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

// Every variable appears three times positively; with k = 3 and r = 1 no signature is good.
Formula all_positive_half()
{
    return make_formula(4, 3, {{1, 2, 3}, {4, 1, 2}, {3, 4, 1}, {2, 3, 4}});
}

}  // namespace

TEST_CASE("enumeration")
{
    SUBCASE("single clause")
    {
        const Enumeration e = enumerate_satisfying(make_formula(3, 3, {{1, 2, 3}}), 100);
        CHECK(e.solutions.size() == 7);
        CHECK_FALSE(e.overflow);
        CHECK(std::find(e.solutions.begin(), e.solutions.end(), 0u) == e.solutions.end());
        // Lexicographic with variable 0 read first: (0,0,1) comes first, (1,1,1) last.
        CHECK(e.solutions.front() == 0b100);
        CHECK(e.solutions.back() == 0b111);
    }
    SUBCASE("unsatisfiable")
    {
        CHECK(enumerate_satisfying(make_formula(1, 3, {{1, 1, 1}, {-1, -1, -1}}), 100).solutions.empty());
    }
    SUBCASE("no clauses")
    {
        CHECK(enumerate_satisfying(Formula(6, 3), 1000).solutions.size() == 64);
    }
    SUBCASE("overflow signal")
    {
        const Enumeration e = enumerate_satisfying(Formula(6, 3), 10);
        CHECK(e.overflow);
        CHECK(e.solutions.size() == 10);
    }
    SUBCASE("cap")
    {
        CensusOptions opt;
        opt.max_vars = 20;
        CHECK_THROWS_AS(count_satisfying(Formula(25, 3), opt), CapExceeded);
        CHECK_THROWS_AS(enumerate_satisfying(Formula(25, 3), 1, opt), CapExceeded);
    }
}

TEST_CASE("Gray-code count agrees with the backtracking oracle")
{
    for (int s = 0; s < 200; ++s) {
        const std::uint32_t n = 8 + s % 13;
        const Formula f = sample_uniform(n, static_cast<std::uint64_t>(4.0 * n), 3, s);
        CHECK(count_satisfying(f) == count_satisfying_backtrack(f));
    }
}

TEST_CASE("incremental counters agree with naive re-evaluation")
{
    for (int s = 0; s < 60; ++s) {
        const std::uint32_t n = 5 + s % 12;
        const std::uint32_t k = 2 + s % 4;
        const Formula f = sample_uniform(n, 3 * n, k, 300 + s);
        CHECK(count_satisfying(f) == count_satisfying_naive(f));
        const CensusSummary c = census(f);
        const Enumeration e = enumerate_satisfying(f, 1u << 20);
        CHECK(c.count == e.solutions.size());
        for (std::uint32_t x = 0; x < n; ++x) {
            std::uint64_t t = 0;
            for (auto m : e.solutions) t += (m >> x) & 1u;
            CHECK(c.true_counts[x] == t);
        }
    }
}

TEST_CASE("census is independent of the thread count")
{
    const Formula f = sample_uniform(20, 60, 3, 4);
    CensusOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const CensusSummary a = census(f, one), b = census(f, many);
    CHECK(a.count == b.count);
    CHECK(a.true_counts == b.true_counts);
}

TEST_CASE("empirical marginals")
{
    const auto mu = empirical_marginals(make_formula(4, 3, {{1, 2, 3}}));
    CHECK(mu[0] == doctest::Approx(4.0 / 7.0));
    CHECK(mu[3] == 0.5);
    CHECK(empirical_marginals(make_formula(2, 3, {{1, 1, 1}}))[0] == 1.0);
    CHECK_THROWS_AS(empirical_marginals(make_formula(1, 3, {{1, 1, 1}, {-1, -1, -1}})), std::invalid_argument);
    for (int s = 0; s < 50; ++s) {
        const Formula f = sample_uniform(12, 30, 3, s);
        if (count_satisfying(f) == 0) continue;
        const auto a = empirical_marginals(f), b = empirical_marginals(f.negated());
        for (std::size_t x = 0; x < a.size(); ++x) {
            CHECK(a[x] >= 0.0);
            CHECK(a[x] <= 1.0);
            CHECK(a[x] + b[x] == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("mean distance to the majority vote")
{
    CHECK(mean_distance_to_majority(make_formula(3, 3, {{1, 2, 3}})) == doctest::Approx(3.0 / 7.0));
    CHECK(mean_distance_to_majority(Formula(7, 3)) == 0.5);
    // Mirror symmetry needs a tie-free degree sequence: ties go to false in both formulas.
    int checked = 0;
    for (int s = 0; checked < 30; ++s) {
        const Formula f = sample_uniform(12, 40, 3, s);
        const auto d = degree_sequence_of(f);
        bool tie = false;
        for (std::size_t x = 0; x < d.n(); ++x) tie = tie || d.pos(x) == d.neg(x);
        if (tie || count_satisfying(f) == 0) continue;
        CHECK(mean_distance_to_majority(f) == doctest::Approx(mean_distance_to_majority(f.negated())));
        ++checked;
    }
}

TEST_CASE("overlap vector")
{
    SUBCASE("all-true pair on an all-positive type-1/2 formula")
    {
        const Formula f = all_positive_half();
        const auto d = degree_sequence_of(f);
        const TypeTable t(d);
        const OverlapVector o = overlap_vector(Assignment(4, true), Assignment(4, true), d, t);
        CHECK(o.at(t.half()).value() == 1.0);
    }
    SUBCASE("independent uniform pairs overlap 1/4 on balanced degrees")
    {
        const SignedDegreeSequence d(3, 10, {1, 2, 3, 2, 1, 3, 2, 1, 0, 0}, {1, 2, 3, 2, 1, 3, 2, 1, 0, 0});
        const TypeTable t(d);
        Rng rng(3);
        const int draws = 10000;
        double sum = 0, sq = 0;
        for (int i = 0; i < draws; ++i) {
            const double v = overlap_vector(random_assignment(10, rng), random_assignment(10, rng), d, t)
                                 .at(t.half())
                                 .value();
            sum += v;
            sq += v * v;
        }
        const double mean = sum / draws, sd = std::sqrt(sq / draws - mean * mean);
        CHECK(std::fabs(mean - 0.25) <= 3 * sd / std::sqrt(draws));
    }
    SUBCASE("self overlap is the true mass fraction")
    {
        Rng rng(8);
        for (int s = 0; s < 20; ++s) {
            const Formula f = sample_uniform(30, 120, 4, s);
            const auto d = degree_sequence_of(f);
            const TypeTable t(d);
            const Assignment a = random_assignment(30, rng);
            std::map<PType, std::int64_t> true_mass;
            for (const Literal& l : f.literals())
                if (a.value(l)) true_mass[t.type_of(l)] += 1;
            for (const auto& [type, e] : overlap_vector(a, a, d, t)) {
                CHECK(e.mass == t.mass(type));
                CHECK(e.both_true == true_mass[type]);
            }
        }
    }
}

TEST_CASE("overlap matrix marginalizes to the overlap vector")
{
    Rng rng(12);
    for (int s = 0; s < 100; ++s) {
        const Formula f = sample_uniform(16, 40 + s % 20, 3 + s % 3, s);
        const auto d = degree_sequence_of(f);
        const TypeTable t(d, s % 2 ? TypeRule::bp_only : TypeRule::good_signature);
        const Assignment a = random_assignment(16, rng), b = random_assignment(16, rng);
        const OverlapMatrix w = overlap_matrix(a, b, f, t);
        for (const auto& [ell, row] : w.both_true)
            for (std::size_t j = 0; j < row.size(); ++j) {
                CHECK(w.omega(ell, j) >= 0.0);
                CHECK(w.omega(ell, j) <= 1.0);
            }
        CHECK(overlap_from_matrix(w, t) == overlap_vector(a, b, d, t));
    }
}

TEST_CASE("clusters")
{
    const Formula f = make_formula(4, 3, {{1, 2, 3}, {-1, 2, 4}});
    const Assignment sigma = Assignment(4, true);
    REQUIRE(f.satisfied_by(sigma));
    const auto c = cluster_of(sigma, f, 0.1);
    CHECK(std::find(c.begin(), c.end(), sigma) != c.end());
    CHECK(cluster_of(sigma, f, 0.5).empty());
    CHECK(cluster_of(Assignment(4, false), Formula(4, 3), 0.1).size() == 10);
    CHECK(default_cluster_delta(10) == doctest::Approx(100.0 / 32.0));
    CHECK(cluster_of(sigma, f, default_cluster_delta(5)).empty());
}

TEST_CASE("pair distance spectrum")
{
    CHECK(pair_distance_spectrum(make_formula(3, 3, {{1, 2, 3}})) == std::vector<std::uint64_t>{7, 18, 18, 6});
    const auto free = pair_distance_spectrum(Formula(10, 3));
    for (unsigned dist = 0; dist <= 10; ++dist) CHECK(free[dist] == binom(10, dist) * 1024);
    for (int s = 0; s < 40; ++s) {
        const std::uint32_t n = 6 + s % 12;
        const Formula f = sample_uniform(n, 3 * n, 3, 900 + s);
        const auto spec = pair_distance_spectrum(f);
        const auto sols = enumerate_satisfying(f, 1u << 20).solutions;
        std::uint64_t total = 0;
        for (auto v : spec) total += v;
        CHECK(total == sols.size() * sols.size());
        CHECK(spec == pair_distance_spectrum_pairwise(sols, n));
    }
}
