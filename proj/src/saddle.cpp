#include "ksat/saddle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <string>

#include "ksat/error.hpp"

namespace ksat {

std::vector<DegreePair> degree_pairs(const SignedDegreeSequence& d)
{
    std::vector<DegreePair> out(d.n());
    for (std::size_t x = 0; x < d.n(); ++x) out[x] = {d.pos(x), d.neg(x)};
    return out;
}

std::int64_t total_degree(const std::vector<DegreePair>& pairs)
{
    std::int64_t m = 0;
    for (const auto& [a, b] : pairs) {
        if (a < 0 || b < 0) throw std::invalid_argument("negative degree");
        m += a + b;
    }
    return m;
}

double log_big(const BigInt& x)
{
    if (sgn(x) <= 0) throw std::invalid_argument("log of a non-positive integer");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::numbers::ln2;
}

double Asymptotic::value() const { return std::exp(log_value); }

BigInt exact_coefficient(const std::vector<DegreePair>& pairs, std::int64_t target)
{
    if (target < 0) throw std::invalid_argument("target power must be non-negative");
    const std::int64_t m = total_degree(pairs);
    if (target > m) return 0;
    // Dense convolution truncated at the target power.
    std::vector<BigInt> poly(static_cast<std::size_t>(target) + 1);
    poly[0] = 1;
    std::int64_t reach = 0;
    for (const auto& [a, b] : pairs) {
        std::vector<BigInt> next(poly.size());
        const std::int64_t top = std::min(reach, target);
        for (std::int64_t e = 0; e <= top; ++e) {
            const BigInt& c = poly[static_cast<std::size_t>(e)];
            if (sgn(c) == 0) continue;
            if (e + a <= target) next[static_cast<std::size_t>(e + a)] += c;
            if (e + b <= target) next[static_cast<std::size_t>(e + b)] += c;
        }
        reach += std::max(a, b);
        poly.swap(next);
    }
    return poly[static_cast<std::size_t>(target)];
}

Asymptotic coeff_simple_asymptotic(const std::vector<DegreePair>& pairs)
{
    const std::int64_t m = total_degree(pairs);
    if (m % 2 != 0) throw std::invalid_argument("central coefficient needs even M");
    const double n = static_cast<double>(pairs.size());
    double s2 = 0.0;
    for (const auto& [a, b] : pairs) s2 += static_cast<double>((a - b) * (a - b)) / 8.0;
    Asymptotic out;
    if (s2 == 0.0) {
        out.log_value = n * std::numbers::ln2;
        out.exact = true;
        return out;
    }
    // Reachable powers step by the gcd of the differences; the Gaussian density is scaled by that span.
    std::int64_t span = 0;
    for (const auto& [a, b] : pairs) span = std::gcd(span, a - b);
    out.log_value = n * std::numbers::ln2 - std::log(2.0 * std::sqrt(std::numbers::pi * s2)) +
                    std::log(static_cast<double>(std::abs(span)));
    return out;
}

namespace {

double rho_equation(const std::vector<DegreePair>& pairs, double eps, double log_rho, double* deriv)
{
    double lhs = 0.0, d = 0.0, m = 0.0;
    for (const auto& [a, b] : pairs) {
        const double g = static_cast<double>(a + b);
        m += g;
        if (g == 0.0) continue;
        const double t = std::exp(g * log_rho);
        const double den = 2.0 + 2.0 * t;
        lhs += g / den;
        // d/d(log rho) of g / (2 + 2 rho^g).
        d -= g * 2.0 * g * t / (den * den);
    }
    if (deriv) *deriv = d;
    return lhs - (0.25 + eps) * m;
}

}  // namespace

double solve_rho(const std::vector<DegreePair>& pairs, double eps)
{
    if (!(eps > -0.25 && eps < 0.25)) throw std::invalid_argument("eps must lie in (-1/4, 1/4)");
    if (total_degree(pairs) == 0) throw std::invalid_argument("rho equation needs positive total degree");
    double lo = -20.0 * std::numbers::ln2, hi = 20.0 * std::numbers::ln2;
    double flo = rho_equation(pairs, eps, lo, nullptr), fhi = rho_equation(pairs, eps, hi, nullptr);
    if (!(flo > 0.0 && fhi < 0.0)) throw ConvergenceError("rho root outside the bracket [2^-20, 2^20]");
    for (int i = 0; i < 200 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        (rho_equation(pairs, eps, mid, nullptr) > 0.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    const double scale = static_cast<double>(total_degree(pairs));
    for (int i = 0; i < 50; ++i) {
        double d = 0.0;
        const double f = rho_equation(pairs, eps, x, &d);
        if (std::fabs(f) <= 1e-13 * scale || d == 0.0) break;
        const double nx = x - f / d;
        if (!(nx > lo - 1e-6 && nx < hi + 1e-6)) break;
        x = nx;
    }
    return std::exp(x);
}

double rho_expansion(const std::vector<DegreePair>& pairs, double eps)
{
    double m = 0.0, s2 = 0.0;
    for (const auto& [a, b] : pairs) {
        const double g = static_cast<double>(a + b);
        m += g;
        s2 += g * g;
    }
    return 1.0 - eps * 8.0 * m / s2;
}

double log_growth_triple(const std::vector<DegreePair>& pairs, double eps, double rho)
{
    const double m = static_cast<double>(total_degree(pairs));
    const double lr = std::log(rho);
    double v = -(1.0 - 4.0 * eps) * m / 2.0 * lr;
    for (const auto& [a, b] : pairs) {
        const double g = static_cast<double>(a + b);
        v += std::numbers::ln2 + std::log1p(std::exp(g * lr));
    }
    return v;
}

TripleQuadraticForm triple_quadratic_form(const std::vector<DegreePair>& pairs, double rho)
{
    TripleQuadraticForm q;
    for (const auto& [a, b] : pairs) {
        const double g = static_cast<double>(a + b);
        const double dd = static_cast<double>(a - b);
        const double t = std::pow(rho, g);
        const double h = 2.0 + 2.0 * t;
        q.s_tt += dd * dd / 8.0;
        q.s_psipsi += (dd * dd + 2.0 * t * static_cast<double>(a * a + b * b)) / (2.0 * h * h);
        q.s_tphi += dd * dd * (t - 1.0) / (4.0 + 4.0 * t);
        q.s_tpsi += dd * dd / (4.0 + 4.0 * t);
        q.s3 += g * g * g;
    }
    return q;
}

std::array<double, 9> triple_covariance(const std::vector<DegreePair>& pairs, double rho)
{
    std::array<double, 9> c{};
    for (const auto& [a, b] : pairs) {
        const double da = static_cast<double>(a), db = static_cast<double>(b);
        const double t = std::pow(rho, da + db);
        const double w[4] = {1.0, 1.0, t, t};
        const double e[4][3] = {{da, da, da}, {db, db, db}, {da, db, 0.0}, {db, da, 0.0}};
        const double z = 2.0 + 2.0 * t;
        double mean[3] = {0, 0, 0};
        for (int s = 0; s < 4; ++s)
            for (int i = 0; i < 3; ++i) mean[i] += w[s] * e[s][i] / z;
        for (int s = 0; s < 4; ++s)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) c[3 * i + j] += w[s] * (e[s][i] - mean[i]) * (e[s][j] - mean[j]) / z;
    }
    return c;
}

namespace {

// Covolume of the integer lattice spanned by the vectors, inside its own linear span.
double lattice_covolume(std::vector<std::array<std::int64_t, 3>> rows)
{
    std::size_t rank = 0;
    for (int col = 0; col < 3 && rank < rows.size(); ++col) {
        for (;;) {
            std::size_t best = rows.size();
            for (std::size_t i = rank; i < rows.size(); ++i)
                if (rows[i][col] != 0 && (best == rows.size() || std::abs(rows[i][col]) < std::abs(rows[best][col])))
                    best = i;
            if (best == rows.size()) break;
            std::swap(rows[rank], rows[best]);
            bool clean = true;
            for (std::size_t i = rank + 1; i < rows.size(); ++i) {
                const std::int64_t f = rows[i][col] / rows[rank][col];
                for (int j = 0; j < 3; ++j) rows[i][j] -= f * rows[rank][j];
                clean = clean && rows[i][col] == 0;
            }
            if (clean) {
                ++rank;
                break;
            }
        }
    }
    if (rank == 0) return 1.0;
    Eigen::MatrixXd b(static_cast<Eigen::Index>(rank), 3);
    for (std::size_t i = 0; i < rank; ++i)
        for (int j = 0; j < 3; ++j) b(static_cast<Eigen::Index>(i), j) = static_cast<double>(rows[i][j]);
    return std::sqrt((b * b.transpose()).determinant());
}

struct TripleTargets {
    std::int64_t m;
    std::int64_t half;
    std::int64_t u;
};

TripleTargets triple_targets(const std::vector<DegreePair>& pairs, double eps)
{
    const std::int64_t m = total_degree(pairs);
    if (m % 2 != 0) throw InfeasibleError("x, y target M/2 is not integral (M odd)");
    const double u = (0.25 + eps) * static_cast<double>(m);
    const double ur = std::round(u);
    if (std::fabs(u - ur) > 1e-9 * std::max(1.0, u))
        throw InfeasibleError("u target (1/4 + eps) M = " + std::to_string(u) + " is not integral");
    return {m, m / 2, static_cast<std::int64_t>(ur)};
}

}  // namespace

Asymptotic coeff_triple_asymptotic(const std::vector<DegreePair>& pairs, double eps)
{
    triple_targets(pairs, eps);
    const double rho = solve_rho(pairs, eps);
    const auto c = triple_covariance(pairs, rho);
    Eigen::Matrix3d cm;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) cm(i, j) = c[3 * i + j];
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cm);
    const double top = es.eigenvalues().cwiseAbs().maxCoeff();
    double log_pdet = 0.0;
    int rank = 0;
    for (int i = 0; i < 3; ++i) {
        const double ev = es.eigenvalues()[i];
        if (ev > 1e-12 * std::max(top, 1.0)) {
            log_pdet += std::log(ev);
            ++rank;
        }
    }
    // Reachable exponent vectors form a coset of the lattice spanned by per-factor differences.
    std::vector<std::array<std::int64_t, 3>> steps;
    for (const auto& [a, b] : pairs)
        for (const std::array<std::int64_t, 3>& v : {std::array<std::int64_t, 3>{b - a, b - a, b - a},
                                                      std::array<std::int64_t, 3>{0, b - a, -a},
                                                      std::array<std::int64_t, 3>{b - a, 0, -a}})
            if (v != std::array<std::int64_t, 3>{0, 0, 0}) steps.push_back(v);
    Asymptotic out;
    out.log_value = log_growth_triple(pairs, eps, rho) - 0.5 * rank * std::log(2.0 * std::numbers::pi) - 0.5 * log_pdet +
                    std::log(lattice_covolume(std::move(steps)));
    return out;
}

BigInt exact_triple_coefficient_at(const std::vector<DegreePair>& pairs, std::int64_t u_power)
{
    const std::int64_t m = total_degree(pairs);
    if (m % 2 != 0) throw InfeasibleError("x, y target M/2 is not integral (M odd)");
    if (pairs.size() > 63) throw std::invalid_argument("exact triple oracle limited to N <= 63");
    if (u_power < 0 || u_power > m / 2) return 0;
    // State (c, alpha, beta): c = u-power, alpha = x-power - c, beta = y-power - c.
    // Equal pairs (both true or both false) add d to c; unequal ones add (d, d') or (d', d) to (alpha, beta).
    // Every coefficient is at most 4^N < 2^128.
    using U = unsigned __int128;
    const std::int64_t cmax = u_power;
    const std::int64_t amax = m / 2 - u_power;
    const std::size_t sa = static_cast<std::size_t>(amax + 1);
    const std::size_t sc = static_cast<std::size_t>(cmax + 1);
    auto idx = [&](std::int64_t c, std::int64_t a, std::int64_t b) {
        return (static_cast<std::size_t>(c) * sa + static_cast<std::size_t>(a)) * sa + static_cast<std::size_t>(b);
    };
    std::vector<U> cur(sc * sa * sa, 0), next(cur.size(), 0);
    cur[idx(0, 0, 0)] = 1;
    for (const auto& [d, e] : pairs) {
        std::fill(next.begin(), next.end(), U{0});
        for (std::int64_t c = 0; c <= cmax; ++c)
            for (std::int64_t a = 0; a <= amax; ++a)
                for (std::int64_t b = 0; b <= amax; ++b) {
                    const U v = cur[idx(c, a, b)];
                    if (v == 0) continue;
                    if (c + d <= cmax) next[idx(c + d, a, b)] += v;
                    if (c + e <= cmax) next[idx(c + e, a, b)] += v;
                    if (a + d <= amax && b + e <= amax) next[idx(c, a + d, b + e)] += v;
                    if (a + e <= amax && b + d <= amax) next[idx(c, a + e, b + d)] += v;
                }
        cur.swap(next);
    }
    U v = cur[idx(cmax, amax, amax)];
    // Convert via two 64-bit halves.
    BigInt hi = static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64));
    BigInt lo = static_cast<unsigned long>(static_cast<std::uint64_t>(v));
    BigInt out = hi;
    out <<= 64;
    out += lo;
    return out;
}

BigInt exact_triple_coefficient(const std::vector<DegreePair>& pairs, double eps)
{
    const TripleTargets t = triple_targets(pairs, eps);
    return exact_triple_coefficient_at(pairs, t.u);
}

std::vector<BigInt> exact_triple_u_profile(const std::vector<DegreePair>& pairs)
{
    const std::int64_t m = total_degree(pairs);
    if (m % 2 != 0) throw InfeasibleError("x, y target M/2 is not integral (M odd)");
    std::vector<BigInt> out(static_cast<std::size_t>(m / 2) + 1);
    for (std::int64_t c = 0; c <= m / 2; ++c) out[static_cast<std::size_t>(c)] = exact_triple_coefficient_at(pairs, c);
    return out;
}

Pgf Pgf::bernoulli(double prob)
{
    if (!(prob > 0.0 && prob < 1.0)) throw std::invalid_argument("Bernoulli parameter must lie in (0,1)");
    Pgf g;
    g.p = [prob](double z) { return 1.0 - prob + prob * z; };
    g.dp = [prob](double) { return prob; };
    g.d2p = [](double) { return 0.0; };
    g.support_min = 0;
    g.support_max = 1;
    g.mean = prob;
    return g;
}

Pgf Pgf::poisson(double lambda)
{
    if (!(lambda > 0.0)) throw std::invalid_argument("Poisson mean must be positive");
    Pgf g;
    g.p = [lambda](double z) { return std::exp(lambda * (z - 1.0)); };
    g.dp = [lambda](double z) { return lambda * std::exp(lambda * (z - 1.0)); };
    g.d2p = [lambda](double z) { return lambda * lambda * std::exp(lambda * (z - 1.0)); };
    g.support_min = 0;
    g.support_max = std::numeric_limits<double>::infinity();
    g.mean = lambda;
    return g;
}

Pgf Pgf::finite(std::vector<double> probs)
{
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw std::invalid_argument("probabilities must be non-negative");
        total += p;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw std::invalid_argument("probabilities must sum to 1");
    Pgf g;
    auto eval = [probs](double z, int deriv) {
        double s = 0.0;
        for (std::size_t i = probs.size(); i-- > 0;) {
            double c = probs[i];
            for (int t = 0; t < deriv; ++t) c *= static_cast<double>(static_cast<long>(i) - t);
            if (static_cast<long>(i) >= deriv) s += c * std::pow(z, static_cast<double>(static_cast<long>(i) - deriv));
        }
        return s;
    };
    g.p = [eval](double z) { return eval(z, 0); };
    g.dp = [eval](double z) { return eval(z, 1); };
    g.d2p = [eval](double z) { return eval(z, 2); };
    std::size_t lo = 0;
    while (lo < probs.size() && probs[lo] == 0.0) ++lo;
    std::size_t hi = probs.size();
    while (hi > 0 && probs[hi - 1] == 0.0) --hi;
    g.support_min = static_cast<double>(lo);
    g.support_max = hi ? static_cast<double>(hi - 1) : 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) g.mean += static_cast<double>(i) * probs[i];
    return g;
}

LocalLimit local_limit(const Pgf& pgf, double alpha, std::uint64_t n)
{
    if (!(alpha > pgf.support_min && alpha < pgf.support_max))
        throw std::invalid_argument("alpha must lie strictly inside the support range");
    auto slope = [&](double lz) {
        const double z = std::exp(lz);
        return z * pgf.dp(z) / pgf.p(z) - alpha;
    };
    double lo = 0.0, hi = 0.0;
    // z P'/P is increasing in z; widen the log-bracket around z = 1 until it straddles alpha.
    for (int i = 0; i < 200 && slope(lo) > 0.0; ++i) lo -= 1.0;
    for (int i = 0; i < 200 && slope(hi) < 0.0; ++i) hi += 1.0;
    if (!(slope(lo) <= 0.0 && slope(hi) >= 0.0)) throw ConvergenceError("saddle bracket not found");
    for (int i = 0; i < 300 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (slope(mid) < 0.0 ? lo : hi) = mid;
    }
    LocalLimit out;
    out.zeta = std::exp(0.5 * (lo + hi));
    const double z = out.zeta;
    const double p = pgf.p(z), p1 = pgf.dp(z), p2 = pgf.d2p(z);
    out.xi = p2 / p - (p1 / p) * (p1 / p) + alpha / (z * z);
    const double nn = static_cast<double>(n);
    out.log_probability = nn * (std::log(p) - alpha * std::log(z)) - std::log(z) -
                          0.5 * std::log(2.0 * std::numbers::pi * nn * out.xi);
    out.probability = std::exp(out.log_probability);
    return out;
}

}  // namespace ksat
