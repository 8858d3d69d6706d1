#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ksat/core.hpp"

namespace ksat {

// chi(z) = -z ln z - (1-z) ln(1-z), with chi(0) = chi(1) = 0.
double entropy(double z);
// psi(p, q) = -q ln(q/p) - (1-q) ln((1-q)/(1-p)): exponential rate of P[Bin(n,p) = qn].
double binom_rate(double p, double q);

// ln 2 + h(x) + r ln(1 - 2^(1-k) + 2^-k (1-x)^k).
double offdiag_exponent(double x, std::uint32_t k, double r);

struct OffdiagReport {
    std::uint32_t k = 0;
    double r = 0;
    double xi = 0;                // k 2^(-k/2)
    std::size_t points = 0;       // grid points actually evaluated
    double max_value = 0;         // largest exponent found (-inf when no points)
    double argmax = 0;
    bool ok = true;               // every evaluated value < 0
    double first_failure = -1;    // location of the first non-negative value, if any
};

// Grid over [k 2^-k, 1/2 - xi] and [1/2 + xi, upper], endpoints included.
OffdiagReport verify_offdiag(std::uint32_t k, double r, std::size_t grid_size, double upper = 1.0 - 1e-6);

struct FirstMomentSolution {
    std::vector<double> ell;
    std::vector<double> q;
    double residual = 0;  // max_j |q_j / (1 - prod(1 - q)) - ell_j|
    int iterations = 0;
};

// Newton from q = ell with step halving. Needs sum(ell) > 1 (InfeasibleError otherwise).
FirstMomentSolution solve_first_moment_q(std::span<const double> ell);

// ln(1 - prod(1 - q_j)) - sum_j psi(q_j, ell_j): the per-clause contribution ln P[S] - ln P[B].
double first_moment_clause_term(const FirstMomentSolution& s);

struct FirstMomentExponent {
    double entropy = 0;    // ln|H_p| / n
    double ln_ps = 0;      // ln P[S] / n
    double ln_pb = 0;      // ln P[B] / n
    double exponent = 0;   // entropy + ln_ps - ln_pb
    double reference = 0;  // 2^-k (rho - ln2 / 2), rho = 2^k ln 2 - r
    double max_residual = 0;
    std::size_t types_solved = 0;
    double std_error = 0;  // Monte Carlo error of the clause part (product-form estimator only)
};

// Clause-type weights gamma_l = r m(l) / sum m.
FirstMomentExponent first_moment_exponent(const TypeTable& table, const ClauseTypeCounts& counts, double r);

// gamma_l = prod_j pi(l_j), sampled with a control variate prod_j (1 - l_j) whose mean is exact.
FirstMomentExponent first_moment_exponent_product(const TypeTable& table, double r, std::size_t samples,
                                                  std::uint64_t seed);

struct PairMomentSolution {
    std::vector<double> ell;
    std::vector<double> omega;
    std::vector<double> q;
    std::vector<double> q11;
    double residual = 0;
    int iterations = 0;
};

// Solves the pair fixed point from q = ell, q11 = omega.
PairMomentSolution solve_pair_q(std::span<const double> ell, std::span<const double> omega);

double pair_exponent(const PairMomentSolution& s);
double pair_exponent(std::span<const double> ell, std::span<const double> omega);

std::vector<double> omega_star(std::span<const double> ell);

// Central-difference gradient of P_l at omega*.
std::vector<double> pair_gradient_at_star(std::span<const double> ell, double step = 1e-4);

struct HessianReport {
    std::vector<double> matrix;  // k x k, row-major second differences at omega*
    double max_abs = 0;
    double max_diagonal = 0;
    double max_off_diagonal = 0;
};

HessianReport check_hessian_bound(std::span<const double> ell, double step = 1e-3);

}  // namespace ksat
