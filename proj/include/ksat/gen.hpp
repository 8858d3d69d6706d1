#pragma once

#include <cstdint>
#include <utility>

#include "ksat/core.hpp"

namespace ksat {

// m = floor(r n + 1/2).
std::uint64_t clauses_for_density(double r, std::uint32_t n);

// Every one of the km literal slots i.i.d. uniform over the 2n literals.
Formula sample_uniform(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed);

// 2n i.i.d. Poisson(kr/2) conditioned on summing to km, drawn as a symmetric multinomial.
SignedDegreeSequence sample_degree_sequence(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed);

// Configuration model: d_l clones per literal, shuffled into the km slots.
Formula sample_formula_given_degrees(const SignedDegreeSequence& d, std::uint64_t seed);

// Degrees first, then the formula; equal in law to sample_uniform.
Formula sample_two_step(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed);

// Clause types are fixed by counts; each type-t slot draws from the shuffled pile of type-t clones.
Formula sample_formula_given_degrees_and_types(const SignedDegreeSequence& d, const ClauseTypeCounts& counts,
                                               std::uint64_t seed, TypeRule rule = TypeRule::good_signature);

// sigma uniform, then m clauses uniform among k-tuples not all false under sigma.
std::pair<Formula, Assignment> sample_planted_pair(std::uint32_t n, std::uint64_t m, std::uint32_t k,
                                                   std::uint64_t seed);

// Clauses uniform among k-tuples satisfied by the given sigma.
Formula sample_planted_given(const Assignment& sigma, std::uint64_t m, std::uint32_t k, std::uint64_t seed);

}  // namespace ksat
