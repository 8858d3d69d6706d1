#pragma once

#include <cstdint>

namespace ksat {

// Leading-order closed forms; the o_k(1) and eps_k corrections are not included.
// Each bound is 2^k ln 2 - rho; the rho offsets are kept so differences avoid cancellation at large k.
struct ThresholdBounds {
    std::uint32_t k;
    double r_upper;
    double r_bal;
    double r_bp;
    double rho_upper;
    double rho_bal;
    double rho_bp;

    double gap_upper_bp() const { return rho_bp - rho_upper; }
};

ThresholdBounds threshold_bounds(std::uint32_t k);

// r = 2^k ln 2 - rho.
double density_from_rho(std::uint32_t k, double rho);
double rho_from_density(std::uint32_t k, double r);

// 1/2 + sqrt(2 / (pi k r)), dropping O(1/kr).
double expected_majority_weight(std::uint32_t k, double r);

// 1/2 + E|X - Y| / (2kr) for X, Y i.i.d. Poisson(kr/2): the n -> infinity mean of w_maj, summed exactly.
// Asymptotically 1/2 + 1/sqrt(2 pi k r).
double poisson_majority_weight(std::uint32_t k, double r);

}  // namespace ksat
