#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ksat/rng.hpp"
#include "ksat/stats.hpp"

using namespace ksat;

TEST_CASE("moments and regression")
{
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> y{3, 5, 7, 9, 11};
    CHECK(mean_of(x) == doctest::Approx(3));
    CHECK(variance_of(x) == doctest::Approx(2.5));
    CHECK(pearson(x, y) == doctest::Approx(1));
    CHECK(ols_slope(x, y) == doctest::Approx(2));
    CHECK(pearson(x, {11, 9, 7, 5, 3}) == doctest::Approx(-1));
    CHECK_THROWS_AS(variance_of({1.0}), std::invalid_argument);
}

TEST_CASE("Kolmogorov distribution")
{
    CHECK(kolmogorov_q(0) == doctest::Approx(1));
    CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
    CHECK(kolmogorov_q(10) < 1e-80);
}

TEST_CASE("two-sample tests")
{
    Rng rng(9);
    std::normal_distribution<double> g(0, 1);
    std::vector<double> a(4000), b(4000), c(4000);
    for (auto& v : a) v = g(rng);
    for (auto& v : b) v = g(rng);
    for (auto& v : c) v = g(rng) + 0.2;
    CHECK(ks_two_sample(a, b).p_value > 0.01);
    CHECK(ks_two_sample(a, c).p_value < 1e-6);
    CHECK(ks_two_sample(a, a).statistic == 0);

    const std::vector<std::uint64_t> h1{100, 200, 300, 400}, h2{110, 190, 310, 390}, h3{400, 300, 200, 100};
    const auto same = chi_square_two_sample(h1, h2);
    CHECK(same.dof == 3);
    CHECK(same.p_value > 0.3);
    CHECK(chi_square_two_sample(h1, h3).p_value < 1e-10);
    // Sparse tail bins are pooled until the expected count reaches the minimum.
    const auto pooled = chi_square_two_sample({500, 500, 1, 1, 1}, {500, 500, 1, 0, 2});
    CHECK(pooled.dof < 4);
}
