#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "ksat/core.hpp"

namespace ksat {

struct CensusOptions {
    std::uint32_t max_vars = 30;  // refuse exhaustive work above this n (hard limit 30)
    unsigned threads = 0;         // 0: hardware concurrency
};

// Assignments are bitmasks, bit x = sigma(x). Lexicographic order reads variable 0 first.
struct Enumeration {
    std::vector<std::uint64_t> solutions;
    bool overflow = false;  // stopped at max_solutions
};

Enumeration enumerate_satisfying(const Formula& f, std::uint64_t max_solutions, const CensusOptions& opt = {});

// Gray-code walk with incremental clause counters.
std::uint64_t count_satisfying(const Formula& f, const CensusOptions& opt = {});
// Independent oracles: chronological backtracking, and per-point re-evaluation.
std::uint64_t count_satisfying_backtrack(const Formula& f, const CensusOptions& opt = {});
std::uint64_t count_satisfying_naive(const Formula& f, const CensusOptions& opt = {});

struct CensusSummary {
    std::uint64_t count = 0;
    std::vector<std::uint64_t> true_counts;  // per variable, number of solutions with sigma(x)=1
};
CensusSummary census(const Formula& f, const CensusOptions& opt = {});

std::vector<double> empirical_marginals(const Formula& f, const CensusOptions& opt = {});
// Average over solutions of dist(sigma, sigma_MAJ) / n.
double mean_distance_to_majority(const Formula& f, const CensusOptions& opt = {});

struct OverlapEntry {
    std::int64_t both_true = 0;  // numerator: sum of d_l over type-t literals true under both
    std::int64_t mass = 0;       // denominator: km pi(t)
    double value() const { return mass ? static_cast<double>(both_true) / static_cast<double>(mass) : 0.0; }
    friend bool operator==(const OverlapEntry&, const OverlapEntry&) = default;
};
using OverlapVector = std::map<PType, OverlapEntry>;

struct OverlapMatrix {
    std::map<ClauseType, std::int64_t> clauses;                     // m(l)
    std::map<ClauseType, std::vector<std::int64_t>> both_true;      // per slot j, clauses with slot j true in both
    double omega(const ClauseType& ell, std::size_t j) const;
};

OverlapVector overlap_vector(const Assignment& sigma, const Assignment& tau, const SignedDegreeSequence& d,
                             const TypeTable& table);
OverlapMatrix overlap_matrix(const Assignment& sigma, const Assignment& tau, const Formula& f,
                             const TypeTable& table);
// O_t = sum over (l, j) with l_j = t of m(l) omega_{l,j} / (km pi(t)), in integers.
OverlapVector overlap_from_matrix(const OverlapMatrix& w, const TypeTable& table);

double default_cluster_delta(std::uint32_t k);
// Solutions tau with dist(sigma, tau)/n outside [1/2 - delta, 1/2 + delta].
std::vector<Assignment> cluster_of(const Assignment& sigma, const Formula& f, double delta,
                                   const CensusOptions& opt = {});

// Ordered pairs of solutions by Hamming distance; index = distance in [0, n].
std::vector<std::uint64_t> pair_distance_spectrum(const Formula& f, const CensusOptions& opt = {});
std::vector<std::uint64_t> pair_distance_spectrum_pairwise(const std::vector<std::uint64_t>& solutions,
                                                           std::uint32_t n);

}  // namespace ksat
