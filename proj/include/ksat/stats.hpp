#pragma once

#include <cstdint>
#include <vector>

namespace ksat {

struct KsResult {
    double statistic = 0;  // sup |F_a - F_b|
    double p_value = 0;    // asymptotic Kolmogorov distribution
};

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

// Complementary Kolmogorov distribution Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

// Pearson chi-square goodness of fit; bins with expected count below min_expected are pooled.
struct ChiSquareResult {
    double statistic = 0;
    double dof = 0;
    double p_value = 0;
};
ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                      double min_expected = 5.0);

double mean_of(const std::vector<double>& v);
double variance_of(const std::vector<double>& v);  // unbiased
double pearson(const std::vector<double>& x, const std::vector<double>& y);
double ols_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ksat
