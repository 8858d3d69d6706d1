#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ksat/core.hpp"

namespace ksat {

using BigInt = mpz_class;
using DegreePair = std::pair<std::int64_t, std::int64_t>;  // (d_v, d_negv)

std::vector<DegreePair> degree_pairs(const SignedDegreeSequence& d);
std::int64_t total_degree(const std::vector<DegreePair>& pairs);  // M

// Natural log of a positive big integer.
double log_big(const BigInt& x);

// [z^target] prod_v (z^{d_v} + z^{d_negv}).
BigInt exact_coefficient(const std::vector<DegreePair>& pairs, std::int64_t target);

struct Asymptotic {
    double log_value = 0;  // natural log of the approximation
    bool exact = false;    // degenerate case evaluated exactly
    double value() const;
};

// Central coefficient [z^{M/2}]: g 2^N / (2 sqrt(pi S2)), S2 = sum (d_v - d_negv)^2 / 8,
// g the gcd of the differences d_v - d_negv.
Asymptotic coeff_simple_asymptotic(const std::vector<DegreePair>& pairs);

// Root of (1/4 + eps) M = sum g_v / (2 + 2 rho^{g_v}), g_v = d_v + d_negv.
double solve_rho(const std::vector<DegreePair>& pairs, double eps);
// First-order expansion 1 - eps 8 M / sum g_v^2.
double rho_expansion(const std::vector<DegreePair>& pairs, double eps);

// ln E, E = rho^{-(1 - 4 eps) M / 2} prod (2 + 2 rho^{g_v}).
double log_growth_triple(const std::vector<DegreePair>& pairs, double eps, double rho);

// Quadratic form of -ln(H / E) at the saddle.
struct TripleQuadraticForm {
    double s_tt = 0;      // theta^2 and phi^2 coefficient
    double s_psipsi = 0;  // psi^2
    double s_tphi = 0;    // +theta phi
    double s_tpsi = 0;    // (theta + phi) psi
    double s3 = 0;        // sum g_v^3
};
TripleQuadraticForm triple_quadratic_form(const std::vector<DegreePair>& pairs, double rho);

// Covariance of the exponent vectors (a, b, c) of each factor under the saddle weights.
std::array<double, 9> triple_covariance(const std::vector<DegreePair>& pairs, double rho);

// [x^{M/2} y^{M/2} u^{(1/4+eps)M}] F: V E / ((2 pi)^{r/2} sqrt(pdet C)), C the covariance of rank r,
// V the covolume of the lattice of reachable exponent steps.
Asymptotic coeff_triple_asymptotic(const std::vector<DegreePair>& pairs, double eps);

// Exact triple coefficient; needs integral targets and N <= 63.
BigInt exact_triple_coefficient(const std::vector<DegreePair>& pairs, double eps);
BigInt exact_triple_coefficient_at(const std::vector<DegreePair>& pairs, std::int64_t u_power);
// All u-powers at x = y = M/2, index = u-power.
std::vector<BigInt> exact_triple_u_profile(const std::vector<DegreePair>& pairs);

// Probability generating function of a variable on N_0: value and first two derivatives.
struct Pgf {
    std::function<double(double)> p;
    std::function<double(double)> dp;
    std::function<double(double)> d2p;
    double support_min = 0;  // T_0
    double support_max = 0;  // T_infinity (may be +inf)
    double mean = 0;

    static Pgf bernoulli(double prob);
    static Pgf poisson(double lambda);
    static Pgf finite(std::vector<double> probs);
};

struct LocalLimit {
    double zeta = 0;
    double xi = 0;
    double probability = 0;
    double log_probability = 0;
};

// P[X_1 + ... + X_n = alpha n] ~ (P(zeta)/zeta^alpha)^n / (zeta sqrt(2 pi n xi)).
LocalLimit local_limit(const Pgf& pgf, double alpha, std::uint64_t n);

}  // namespace ksat
