#include "ksat/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace ksat {

double bp_cutoff_squared(std::uint32_t k)
{
    return 100.0 * k * std::ldexp(1.0, static_cast<int>(k)) * std::log(static_cast<double>(k));
}

double bp_cutoff(std::uint32_t k) { return std::sqrt(bp_cutoff_squared(k)); }

PType p_bp_type(std::int64_t z, std::uint32_t k)
{
    if (k < 2 || k > 61) throw std::invalid_argument("p_bp needs 2 <= k <= 61");
    const std::int64_t half = std::int64_t{1} << k;
    const double zz = static_cast<double>(z);
    if (zz * zz > bp_cutoff_squared(k)) return {half};
    return {std::clamp<std::int64_t>(half + z, 0, 2 * half)};
}

double p_bp(std::int64_t z, std::uint32_t k)
{
    return std::ldexp(static_cast<double>(p_bp_type(z, k).num), -static_cast<int>(k + 1));
}

Assignment majority_vote(const SignedDegreeSequence& d)
{
    Assignment a(d.n());
    for (std::size_t x = 0; x < d.n(); ++x) a.set(x, d.pos(x) > d.neg(x));
    return a;
}

double majority_weight(const SignedDegreeSequence& d)
{
    if (d.total() == 0) throw std::invalid_argument("majority weight undefined for km = 0");
    std::int64_t s = 0;
    for (std::size_t x = 0; x < d.n(); ++x) s += std::max(d.pos(x), d.neg(x));
    return static_cast<double>(s) / static_cast<double>(d.total());
}

double bp_conjectured_marginal(std::int64_t dpos, std::int64_t dneg, std::uint32_t k)
{
    const double v = 0.5 + std::ldexp(static_cast<double>(dpos - dneg), -static_cast<int>(k + 1));
    return std::clamp(v, 0.0, 1.0);
}

bool has_p_marginals(const Assignment& sigma, const SignedDegreeSequence& d, const TypeTable& table)
{
    if (sigma.size() != d.n() || table.n() != d.n()) throw std::invalid_argument("size mismatch");
    // Signature class of a positive literal: (d+, d-). Counts: variables, true variables.
    std::map<std::pair<std::int64_t, std::int64_t>, std::pair<std::int64_t, std::int64_t>> cls;
    std::int64_t half_mass = 0, half_true = 0;
    const PType h = table.half();
    for (std::size_t x = 0; x < d.n(); ++x) {
        if (table.var_type(x) == h) {
            half_mass += d.pos(x) + d.neg(x);
            half_true += sigma[x] ? d.pos(x) : d.neg(x);
        }
        if (!table.good(x)) continue;
        auto& c = cls[{d.pos(x), d.neg(x)}];
        c.first += 1;
        c.second += sigma[x] ? 1 : 0;
    }
    // Both the class s and its negation -s: the true count of -s is |V_s| minus that of s,
    // with target (1-p)|V_s|, so one check covers both.
    const double den = static_cast<double>(table.denominator());
    for (const auto& [sig, c] : cls) {
        const double p = static_cast<double>(p_bp_type(sig.first - sig.second, table.k()).num) / den;
        if (std::fabs(static_cast<double>(c.second) - p * static_cast<double>(c.first)) > 1.0 + 1e-9) return false;
    }
    return std::llabs(2 * half_true - half_mass) <= 2;
}

bool is_judicious(const Assignment& sigma, const Formula& f, const TypeTable& table)
{
    if (sigma.size() != f.n()) throw std::invalid_argument("size mismatch");
    std::map<ClauseType, std::pair<std::int64_t, std::vector<std::int64_t>>> slots;
    for (std::size_t i = 0; i < f.m(); ++i) {
        auto& s = slots[clause_type(f, i, table)];
        if (s.second.empty()) s.second.assign(f.k(), 0);
        s.first += 1;
        for (std::size_t j = 0; j < f.k(); ++j) s.second[j] += sigma.value(f.literal(i, j)) ? 1 : 0;
    }
    // |count - m(l) l_j| <= 1 with l_j = num / 2^(k+1), compared in integers.
    const std::int64_t den = table.denominator();
    for (const auto& [ell, s] : slots)
        for (std::size_t j = 0; j < f.k(); ++j) {
            const __int128 lhs = static_cast<__int128>(s.second[j]) * den - static_cast<__int128>(s.first) * ell[j].num;
            if ((lhs < 0 ? -lhs : lhs) > den) return false;
        }
    return true;
}

bool is_balanced(const Assignment& sigma, const Formula& f)
{
    if (sigma.size() != f.n()) throw std::invalid_argument("size mismatch");
    std::int64_t t = 0;
    for (const Literal& l : f.literals()) t += sigma.value(l) ? 1 : 0;
    const std::int64_t km = static_cast<std::int64_t>(f.literals().size());
    return std::llabs(2 * t - km) <= 2;
}

double sigma_skew(const SignedDegreeSequence& d, const TypeTable& table)
{
    if (d.total() == 0) throw std::invalid_argument("skew undefined for km = 0");
    // 1 - 2p = (2^k - num) / 2^k.
    const std::int64_t h = table.half().num;
    __int128 s = 0;
    for (std::size_t x = 0; x < d.n(); ++x)
        s += static_cast<__int128>(h - table.var_type(x).num) * (d.pos(x) - d.neg(x));
    return static_cast<double>(s) / (static_cast<double>(h) * static_cast<double>(d.total()));
}

}  // namespace ksat
