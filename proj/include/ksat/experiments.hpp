#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace ksat {

using Json = nlohmann::ordered_json;

std::string build_id();

struct ExperimentConfig {
    std::uint32_t k = 3;
    std::uint32_t n = 20;
    std::uint64_t m = 70;
    std::uint64_t trials = 200;  // satisfiable trials for the census experiments
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::uint32_t cap = 24;      // enumeration cap on n
    std::uint64_t max_attempts = 0;  // 0: 50 x trials

    Json to_json() const;
};

struct SkewTrial {
    std::uint64_t index;
    std::uint64_t seed;
    std::uint64_t solutions;
    double mean_distance;  // normalized mean distance to sigma_MAJ; NaN when unsatisfiable
};

struct SkewReport {
    ExperimentConfig config;
    std::vector<SkewTrial> trials;  // every attempt, satisfiable or not
    std::uint64_t satisfiable = 0;
    std::uint64_t discarded = 0;
    double fraction_below_half = 0;
    double mean = 0;
    double delta_hat = 0;  // 1/2 - mean

    Json to_json() const;
};

SkewReport run_majority_skew(const ExperimentConfig& cfg);

struct CorrelationTrial {
    std::uint64_t index;
    std::uint64_t seed;
    std::uint64_t solutions;
    double slope;  // per-formula OLS slope; NaN when unsatisfiable or degrees constant
};

struct CorrelationReport {
    ExperimentConfig config;
    std::vector<CorrelationTrial> trials;
    std::uint64_t satisfiable = 0;
    std::uint64_t discarded = 0;
    std::uint64_t points = 0;
    double correlation = 0;
    double slope = 0;
    double conjectured_slope = 0;  // 2^-(k+1)
    std::uint64_t runs_with_positive_slope = 0;
    std::uint64_t runs_with_slope = 0;
    double tied_mean = 0;       // mean mu - 1/2 over variables with d_x = d_negx
    double tied_std_error = 0;
    std::uint64_t tied_count = 0;

    Json to_json() const;
};

CorrelationReport run_marginal_correlation(const ExperimentConfig& cfg);

struct WmajSample {
    std::vector<double> values;
    double mean = 0;
    double variance = 0;
    std::vector<std::uint64_t> histogram;  // 50 bins over [1/2, 1]
};

struct WmajReport {
    ExperimentConfig config;
    double expected = 0;          // 1/2 + sqrt(2 / (pi k r))
    double poisson_expected = 0;  // exact Poisson limit of E[w_maj]
    WmajSample uniform;
    WmajSample planted;
    bool planted_exceeds_uniform = false;

    Json to_json() const;
};

WmajReport run_wmaj_fluctuation(const ExperimentConfig& cfg);

}  // namespace ksat
