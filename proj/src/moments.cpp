#include "ksat/moments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>

#include "ksat/error.hpp"
#include "ksat/rng.hpp"

namespace ksat {

namespace {

constexpr int kMaxIter = 200;
constexpr double kTarget = 1e-15;

double xlogy_ratio(double a, double b)
{
    // a ln(a / b) with the 0 ln 0 = 0 convention.
    return a == 0.0 ? 0.0 : a * std::log(a / b);
}

}  // namespace

double entropy(double z)
{
    if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("entropy needs z in [0,1]");
    if (z == 0.0 || z == 1.0) return 0.0;
    return -z * std::log(z) - (1.0 - z) * std::log1p(-z);
}

double binom_rate(double p, double q)
{
    if (!(p > 0.0 && p < 1.0) || !(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("binom_rate needs p in (0,1)");
    // (1-q) ln((1-q)/(1-p)) written with log1p for p, q near 0.
    const double tail = q == 1.0 ? 0.0 : (1.0 - q) * (std::log1p(-q) - std::log1p(-p));
    return -xlogy_ratio(q, p) - tail;
}

double offdiag_exponent(double x, std::uint32_t k, double r)
{
    if (!(x > 0.0 && x < 1.0)) throw std::invalid_argument("offdiag_exponent needs x in (0,1)");
    const double a = std::ldexp(1.0, -static_cast<int>(k));
    const double inner = -2.0 * a + a * std::pow(1.0 - x, static_cast<double>(k));
    return std::numbers::ln2 + entropy(x) + r * std::log1p(inner);
}

OffdiagReport verify_offdiag(std::uint32_t k, double r, std::size_t grid_size, double upper)
{
    OffdiagReport rep;
    rep.k = k;
    rep.r = r;
    rep.xi = k * std::pow(2.0, -0.5 * k);
    rep.max_value = -std::numeric_limits<double>::infinity();
    const double lo1 = k * std::ldexp(1.0, -static_cast<int>(k));
    const double hi1 = 0.5 - rep.xi;
    const double lo2 = 0.5 + rep.xi;
    const double hi2 = upper;
    const double len1 = std::max(0.0, hi1 - lo1);
    const double len2 = std::max(0.0, hi2 - lo2);
    const double total = len1 + len2;
    if (total <= 0.0 || grid_size < 2) return rep;
    auto sweep = [&](double a, double b, std::size_t pts) {
        if (b < a || pts == 0) return;
        if (pts == 1) pts = 2;
        for (std::size_t i = 0; i < pts; ++i) {
            const double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(pts - 1);
            if (!(x > 0.0 && x < 1.0)) continue;
            const double v = offdiag_exponent(x, k, r);
            ++rep.points;
            if (v > rep.max_value) {
                rep.max_value = v;
                rep.argmax = x;
            }
            if (!(v < 0.0) && rep.ok) {
                rep.ok = false;
                rep.first_failure = x;
            }
        }
    };
    const auto pts1 = static_cast<std::size_t>(std::llround(grid_size * (len1 / total)));
    sweep(lo1, hi1, len1 > 0 ? std::max<std::size_t>(pts1, 2) : 0);
    sweep(lo2, hi2, len2 > 0 ? std::max<std::size_t>(grid_size - pts1, 2) : 0);
    return rep;
}

FirstMomentSolution solve_first_moment_q(std::span<const double> ell)
{
    const std::size_t k = ell.size();
    if (k == 0) throw std::invalid_argument("empty clause type");
    for (double l : ell)
        if (!(l > 0.0 && l < 1.0)) throw std::invalid_argument("clause type entries must lie in (0,1)");
    // A satisfied clause has at least one true literal, so the conditional means sum to more than 1.
    if (!(std::accumulate(ell.begin(), ell.end(), 0.0) > 1.0))
        throw InfeasibleError("clause type entries must sum to more than 1");
    using Vec = Eigen::VectorXd;
    Vec q = Eigen::Map<const Vec>(ell.data(), static_cast<Eigen::Index>(k));
    const Vec target = q;
    auto residual = [&](const Vec& x, Vec& f) {
        double prod = 1.0;
        for (std::size_t h = 0; h < k; ++h) prod *= 1.0 - x[h];
        f = x / (1.0 - prod) - target;
        return f.cwiseAbs().maxCoeff();
    };
    Vec f(k);
    double res = residual(q, f);
    int it = 0;
    for (; it < kMaxIter && res > kTarget; ++it) {
        double prod = 1.0;
        for (std::size_t h = 0; h < k; ++h) prod *= 1.0 - q[h];
        const double den = 1.0 - prod;
        Eigen::MatrixXd J(k, k);
        for (std::size_t j = 0; j < k; ++j) {
            const double other_j = prod / (1.0 - q[j]);
            for (std::size_t h = 0; h < k; ++h) {
                if (h == j)
                    J(j, h) = (1.0 - other_j) / (den * den);
                else
                    J(j, h) = -q[j] * (prod / (1.0 - q[h])) / (den * den);
            }
        }
        const Vec step = J.partialPivLu().solve(f);
        double t = 1.0;
        Vec next(k), fn(k);
        double rn = std::numeric_limits<double>::infinity();
        for (int halve = 0; halve < 60; ++halve, t *= 0.5) {
            next = q - t * step;
            if ((next.array() > 0.0).all() && (next.array() < 1.0).all()) {
                rn = residual(next, fn);
                if (rn < res) break;
            }
        }
        if (!(rn < res)) break;
        q = next;
        f = fn;
        res = rn;
    }
    if (!(res <= 1e-12)) throw ConvergenceError("first-moment fixed point did not converge");
    FirstMomentSolution s;
    s.ell.assign(ell.begin(), ell.end());
    s.q.assign(q.data(), q.data() + k);
    s.residual = res;
    s.iterations = it;
    return s;
}

double first_moment_clause_term(const FirstMomentSolution& s)
{
    double prod = 1.0;
    double rates = 0.0;
    for (std::size_t j = 0; j < s.q.size(); ++j) {
        prod *= 1.0 - s.q[j];
        rates += binom_rate(s.q[j], s.ell[j]);
    }
    return std::log1p(-prod) - rates;
}

namespace {

std::vector<double> type_values(const ClauseType& ell, const TypeTable& table)
{
    std::vector<double> v(ell.size());
    for (std::size_t j = 0; j < ell.size(); ++j) v[j] = table.value(ell[j]);
    return v;
}

double entropy_term(const TypeTable& table)
{
    double s = 0.0;
    for (std::size_t x = 0; x < table.n(); ++x) s += entropy(table.value(table.var_type(x)));
    return s / static_cast<double>(table.n());
}

double reference_exponent(std::uint32_t k, double r)
{
    const double rho = std::ldexp(std::numbers::ln2, static_cast<int>(k)) - r;
    return std::ldexp(rho - std::numbers::ln2 / 2.0, -static_cast<int>(k));
}

}  // namespace

FirstMomentExponent first_moment_exponent(const TypeTable& table, const ClauseTypeCounts& counts, double r)
{
    const std::int64_t m = counts.total();
    if (m <= 0) throw std::invalid_argument("first moment needs at least one clause");
    FirstMomentExponent out;
    out.entropy = entropy_term(table);
    for (const auto& [ell, c] : counts.counts) {
        const std::vector<double> lv = type_values(ell, table);
        for (double v : lv)
            if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("clause type with a 0/1 literal type");
        const FirstMomentSolution s = solve_first_moment_q(lv);
        const double gamma = r * static_cast<double>(c) / static_cast<double>(m);
        double prod = 1.0, rates = 0.0;
        for (std::size_t j = 0; j < s.q.size(); ++j) {
            prod *= 1.0 - s.q[j];
            rates += binom_rate(s.q[j], s.ell[j]);
        }
        out.ln_ps += gamma * std::log1p(-prod);
        out.ln_pb += gamma * rates;
        out.max_residual = std::max(out.max_residual, s.residual);
        ++out.types_solved;
    }
    out.exponent = out.entropy + out.ln_ps - out.ln_pb;
    out.reference = reference_exponent(table.k(), r);
    return out;
}

FirstMomentExponent first_moment_exponent_product(const TypeTable& table, double r, std::size_t samples,
                                                  std::uint64_t seed)
{
    if (samples < 2) throw std::invalid_argument("need at least two samples");
    const std::uint32_t k = table.k();
    std::vector<PType> types;
    std::vector<double> weights;
    double mean_false = 0.0;
    for (const auto& [t, w] : table.masses()) {
        if (w == 0) continue;
        types.push_back(t);
        weights.push_back(static_cast<double>(w));
        mean_false += table.pi(t) * (1.0 - table.value(t));
    }
    Rng rng = make_rng(seed, 21);
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    FirstMomentExponent out;
    out.entropy = entropy_term(table);
    double sum = 0.0, sum2 = 0.0, ps = 0.0, pb = 0.0;
    std::vector<double> lv(k);
    for (std::size_t i = 0; i < samples; ++i) {
        double cv = 1.0;
        for (std::uint32_t j = 0; j < k; ++j) {
            lv[j] = table.value(types[pick(rng)]);
            cv *= 1.0 - lv[j];
        }
        const FirstMomentSolution s = solve_first_moment_q(lv);
        double prod = 1.0, rates = 0.0;
        for (std::uint32_t j = 0; j < k; ++j) {
            prod *= 1.0 - s.q[j];
            rates += binom_rate(s.q[j], s.ell[j]);
        }
        const double adj = std::log1p(-prod) - rates + cv;
        sum += adj;
        sum2 += adj * adj;
        ps += std::log1p(-prod) + cv;
        pb += rates;
        out.max_residual = std::max(out.max_residual, s.residual);
    }
    const double ns = static_cast<double>(samples);
    const double cv_mean = std::pow(mean_false, static_cast<double>(k));
    const double mean = sum / ns;
    const double var = std::max(0.0, (sum2 - ns * mean * mean) / (ns - 1.0));
    out.ln_ps = r * (ps / ns - cv_mean);
    out.ln_pb = r * (pb / ns);
    out.exponent = out.entropy + r * (mean - cv_mean);
    out.std_error = r * std::sqrt(var / ns);
    out.types_solved = samples;
    out.reference = reference_exponent(k, r);
    return out;
}

namespace {

struct PairSystem {
    const std::vector<double>& ell;
    const std::vector<double>& omega;
    std::size_t k;

    bool feasible(const Eigen::VectorXd& x) const
    {
        for (std::size_t j = 0; j < k; ++j) {
            const double q = x[j], q11 = x[k + j];
            if (!(q > 0.0 && q < 1.0 && q11 > 0.0 && q11 < q && 1.0 - 2.0 * q + q11 > 0.0)) return false;
        }
        return true;
    }

    double residual(const Eigen::VectorXd& x, Eigen::VectorXd& f) const
    {
        double a = 1.0, b = 1.0;
        for (std::size_t h = 0; h < k; ++h) {
            a *= 1.0 - x[h];
            b *= 1.0 - 2.0 * x[h] + x[k + h];
        }
        const double d = 1.0 - 2.0 * a + b;
        f.resize(2 * k);
        for (std::size_t j = 0; j < k; ++j) {
            const double aj = a / (1.0 - x[j]);
            f[j] = (x[j] - (x[j] - x[k + j]) * aj) / d - ell[j];
            f[k + j] = x[k + j] / d - omega[j];
        }
        return f.cwiseAbs().maxCoeff();
    }

    Eigen::MatrixXd jacobian(const Eigen::VectorXd& x) const
    {
        double a = 1.0, b = 1.0;
        for (std::size_t h = 0; h < k; ++h) {
            a *= 1.0 - x[h];
            b *= 1.0 - 2.0 * x[h] + x[k + h];
        }
        const double d = 1.0 - 2.0 * a + b;
        std::vector<double> dd_q(k), dd_q11(k);
        for (std::size_t h = 0; h < k; ++h) {
            const double c = 1.0 - 2.0 * x[h] + x[k + h];
            dd_q[h] = 2.0 * a / (1.0 - x[h]) - 2.0 * b / c;
            dd_q11[h] = b / c;
        }
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * k, 2 * k);
        const double d2 = d * d;
        for (std::size_t j = 0; j < k; ++j) {
            const double q = x[j], q11 = x[k + j];
            const double aj = a / (1.0 - q);
            const double nj = q - (q - q11) * aj;
            for (std::size_t h = 0; h < k; ++h) {
                const double dn_q = h == j ? 1.0 - aj : (q - q11) * aj / (1.0 - x[h]);
                const double dn_q11 = h == j ? aj : 0.0;
                J(j, h) = (dn_q * d - nj * dd_q[h]) / d2;
                J(j, k + h) = (dn_q11 * d - nj * dd_q11[h]) / d2;
                J(k + j, h) = -q11 * dd_q[h] / d2;
                J(k + j, k + h) = ((h == j ? d : 0.0) - q11 * dd_q11[h]) / d2;
            }
        }
        return J;
    }
};

}  // namespace

PairMomentSolution solve_pair_q(std::span<const double> ell, std::span<const double> omega)
{
    const std::size_t k = ell.size();
    if (k == 0 || omega.size() != k) throw std::invalid_argument("clause type and overlap sizes differ");
    for (std::size_t j = 0; j < k; ++j) {
        const double l = ell[j], w = omega[j];
        if (!(l > 0.0 && l < 1.0 && w > 0.0 && w < l && 1.0 - 2.0 * l + w > 0.0))
            throw std::invalid_argument("infeasible overlap: need 0 < omega < ell and 1 - 2 ell + omega > 0");
    }
    PairMomentSolution s;
    s.ell.assign(ell.begin(), ell.end());
    s.omega.assign(omega.begin(), omega.end());
    const PairSystem sys{s.ell, s.omega, k};
    Eigen::VectorXd x(2 * k);
    for (std::size_t j = 0; j < k; ++j) {
        x[j] = ell[j];
        x[k + j] = omega[j];
    }
    Eigen::VectorXd f;
    double res = sys.residual(x, f);
    int it = 0;
    for (; it < kMaxIter && res > kTarget; ++it) {
        const Eigen::VectorXd step = sys.jacobian(x).partialPivLu().solve(f);
        double t = 1.0, rn = std::numeric_limits<double>::infinity();
        Eigen::VectorXd next, fn;
        for (int halve = 0; halve < 60; ++halve, t *= 0.5) {
            next = x - t * step;
            if (sys.feasible(next)) {
                rn = sys.residual(next, fn);
                if (rn < res) break;
            }
        }
        if (!(rn < res)) break;
        x = next;
        f = fn;
        res = rn;
    }
    if (!(res <= 1e-12)) throw ConvergenceError("pair fixed point did not converge");
    s.q.assign(x.data(), x.data() + k);
    s.q11.assign(x.data() + k, x.data() + 2 * k);
    s.residual = res;
    s.iterations = it;
    return s;
}

double pair_exponent(const PairMomentSolution& s)
{
    const std::size_t k = s.q.size();
    double a = 1.0, b = 1.0;
    for (std::size_t h = 0; h < k; ++h) {
        a *= 1.0 - s.q[h];
        b *= 1.0 - 2.0 * s.q[h] + s.q11[h];
    }
    double v = std::log(1.0 - 2.0 * a + b);
    for (std::size_t j = 0; j < k; ++j) {
        const double q = s.q[j], q11 = s.q11[j], l = s.ell[j], w = s.omega[j];
        v -= binom_rate(q11, w) + (1.0 - w) * binom_rate((1.0 - 2.0 * q + q11) / (1.0 - q11),
                                                         (1.0 - 2.0 * l + w) / (1.0 - w));
    }
    return v;
}

double pair_exponent(std::span<const double> ell, std::span<const double> omega)
{
    return pair_exponent(solve_pair_q(ell, omega));
}

std::vector<double> omega_star(std::span<const double> ell)
{
    std::vector<double> w(ell.size());
    for (std::size_t j = 0; j < ell.size(); ++j) w[j] = ell[j] * ell[j];
    return w;
}

std::vector<double> pair_gradient_at_star(std::span<const double> ell, double step)
{
    const std::vector<double> base = omega_star(ell);
    std::vector<double> g(ell.size());
    for (std::size_t j = 0; j < ell.size(); ++j) {
        std::vector<double> up = base, dn = base;
        up[j] += step;
        dn[j] -= step;
        g[j] = (pair_exponent(ell, up) - pair_exponent(ell, dn)) / (2.0 * step);
    }
    return g;
}

HessianReport check_hessian_bound(std::span<const double> ell, double step)
{
    const std::size_t k = ell.size();
    const std::vector<double> base = omega_star(ell);
    const double p0 = pair_exponent(ell, base);
    auto at = [&](std::size_t i, double si, std::size_t j, double sj) {
        std::vector<double> w = base;
        w[i] += si;
        w[j] += sj;
        return pair_exponent(ell, w);
    };
    HessianReport rep;
    rep.matrix.assign(k * k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) {
            double v;
            if (i == j)
                v = (at(i, step, i, 0.0) - 2.0 * p0 + at(i, -step, i, 0.0)) / (step * step);
            else
                v = (at(i, step, j, step) - at(i, step, j, -step) - at(i, -step, j, step) + at(i, -step, j, -step)) /
                    (4.0 * step * step);
            rep.matrix[i * k + j] = rep.matrix[j * k + i] = v;
            rep.max_abs = std::max(rep.max_abs, std::fabs(v));
            if (i == j)
                rep.max_diagonal = std::max(rep.max_diagonal, std::fabs(v));
            else
                rep.max_off_diagonal = std::max(rep.max_off_diagonal, std::fabs(v));
        }
    return rep;
}

}  // namespace ksat
