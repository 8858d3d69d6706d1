#include "ksat/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ksat {

namespace {
double base(std::uint32_t k) { return std::ldexp(std::numbers::ln2, static_cast<int>(k)); }
}  // namespace

ThresholdBounds threshold_bounds(std::uint32_t k)
{
    if (k < 3) throw std::invalid_argument("threshold bounds need k >= 3");
    constexpr double ln2 = std::numbers::ln2;
    const double b = base(k);
    const double rho_upper = (1.0 + ln2) / 2.0;
    const double rho_bal = k * ln2 / 2.0 + (1.0 + ln2 / 2.0);
    const double rho_bp = 1.5 * ln2;
    return {k, b - rho_upper, b - rho_bal, b - rho_bp, rho_upper, rho_bal, rho_bp};
}

double density_from_rho(std::uint32_t k, double rho) { return base(k) - rho; }
double rho_from_density(std::uint32_t k, double r) { return base(k) - r; }

double expected_majority_weight(std::uint32_t k, double r)
{
    if (!(k * r > 0)) throw std::invalid_argument("expected majority weight needs kr > 0");
    return 0.5 + std::sqrt(2.0 / (std::numbers::pi * k * r));
}

double poisson_majority_weight(std::uint32_t k, double r)
{
    if (!(k * r > 0)) throw std::invalid_argument("majority weight needs kr > 0");
    const double lambda = k * r / 2.0;
    const double width = 15.0 * std::sqrt(lambda) + 30.0;
    const auto lo = static_cast<std::int64_t>(std::max(0.0, std::floor(lambda - width)));
    const auto hi = static_cast<std::int64_t>(std::ceil(lambda + width));
    // E|X - Y| = 2 sum_a p(a) sum_{b<a} (a - b) p(b), via running prefix sums.
    double below = 0, below_weighted = 0, acc = 0;
    for (std::int64_t a = lo; a <= hi; ++a) {
        const double p = std::exp(a * std::log(lambda) - lambda - std::lgamma(a + 1.0));
        acc += p * (a * below - below_weighted);
        below += p;
        below_weighted += a * p;
    }
    return 0.5 + 2.0 * acc / (2.0 * k * r);
}

}  // namespace ksat
