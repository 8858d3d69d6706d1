#include "ksat/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <stdexcept>

namespace ksat {

double kolmogorov_q(double lambda)
{
    if (lambda < 0.2) return 1.0;
    double s = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * lambda * lambda);
        s += (j % 2 ? 1.0 : -1.0) * term;
        if (term < 1e-17) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b)
{
    if (a.empty() || b.empty()) throw std::invalid_argument("KS test needs two non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] == x) ++i;
        while (j < b.size() && b[j] == x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    const double en = std::sqrt(na * nb / (na + nb));
    KsResult r;
    r.statistic = d;
    r.p_value = kolmogorov_q((en + 0.12 + 0.11 / en) * d);
    return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b,
                                      double min_expected)
{
    if (a.size() != b.size()) throw std::invalid_argument("histograms must have equal length");
    double ta = 0, tb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ta += static_cast<double>(a[i]);
        tb += static_cast<double>(b[i]);
    }
    if (ta == 0 || tb == 0) throw std::invalid_argument("empty histogram");
    // Pool adjacent bins until each pooled bin has enough expected mass in both samples.
    std::vector<std::pair<double, double>> bins;
    double ca = 0, cb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ca += static_cast<double>(a[i]);
        cb += static_cast<double>(b[i]);
        const double pooled = (ca + cb) / (ta + tb);
        if (pooled * std::min(ta, tb) >= min_expected) {
            bins.emplace_back(ca, cb);
            ca = cb = 0;
        }
    }
    if (ca + cb > 0) {
        if (bins.empty())
            bins.emplace_back(ca, cb);
        else {
            bins.back().first += ca;
            bins.back().second += cb;
        }
    }
    ChiSquareResult r;
    for (const auto& [x, y] : bins) {
        const double p = (x + y) / (ta + tb);
        const double ea = p * ta, eb = p * tb;
        r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    }
    r.dof = static_cast<double>(bins.size()) - 1.0;
    if (r.dof < 1) {
        r.p_value = 1.0;
        return r;
    }
    r.p_value = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.dof), r.statistic));
    return r;
}

double mean_of(const std::vector<double>& v)
{
    if (v.empty()) throw std::invalid_argument("mean of empty sample");
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double variance_of(const std::vector<double>& v)
{
    if (v.size() < 2) throw std::invalid_argument("variance needs two observations");
    const double mu = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - mu) * (x - mu);
    return s / static_cast<double>(v.size() - 1);
}

double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs paired samples");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0 || syy == 0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

double ols_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("regression needs paired samples");
    const double mx = mean_of(x), my = mean_of(y);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxx == 0 ? 0.0 : sxy / sxx;
}

}  // namespace ksat
