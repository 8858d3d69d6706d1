#pragma once

#include <cstdint>

#include "ksat/core.hpp"

namespace ksat {

// |z| <= 10 sqrt(k 2^k ln k) keeps the linear BP marginal; beyond it the marginal is 1/2.
double bp_cutoff(std::uint32_t k);
double bp_cutoff_squared(std::uint32_t k);

// 1/2 + z / 2^(k+1) inside the cutoff, clamped to [0,1]; exact dyadic.
PType p_bp_type(std::int64_t z, std::uint32_t k);
double p_bp(std::int64_t z, std::uint32_t k);

Assignment majority_vote(const SignedDegreeSequence& d);
double majority_weight(const SignedDegreeSequence& d);

// Leading-order conjectured S-marginal, clamped to [0,1]. No cutoff.
double bp_conjectured_marginal(std::int64_t dpos, std::int64_t dneg, std::uint32_t k);

// Per good signature class the number of true variables is within 1 of p(s)|V_s|;
// the type-1/2 occurrences are half true up to one occurrence.
bool has_p_marginals(const Assignment& sigma, const SignedDegreeSequence& d, const TypeTable& table);
bool is_judicious(const Assignment& sigma, const Formula& f, const TypeTable& table);
bool is_balanced(const Assignment& sigma, const Formula& f);

// (1/km) sum_x (1 - 2 p_d(x)) (d_x - d_negx), accumulated exactly.
double sigma_skew(const SignedDegreeSequence& d, const TypeTable& table);

}  // namespace ksat
