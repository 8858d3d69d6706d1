#include "ksat/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ksat/marginals.hpp"

namespace ksat {

Assignment::Assignment(std::vector<std::uint8_t> values) : values_(std::move(values))
{
    for (auto& v : values_) v = v ? 1 : 0;
}

Assignment Assignment::from_mask(std::uint64_t mask, std::size_t n)
{
    if (n > 64) throw std::invalid_argument("mask assignments hold at most 64 variables");
    Assignment a(n);
    for (std::size_t x = 0; x < n; ++x) a.values_[x] = (mask >> x) & 1u;
    return a;
}

std::uint64_t Assignment::mask() const
{
    if (values_.size() > 64) throw std::invalid_argument("assignment too long for a mask");
    std::uint64_t m = 0;
    for (std::size_t x = 0; x < values_.size(); ++x)
        if (values_[x]) m |= std::uint64_t{1} << x;
    return m;
}

std::size_t Assignment::distance(const Assignment& other) const
{
    if (other.size() != size()) throw std::invalid_argument("assignment length mismatch");
    std::size_t d = 0;
    for (std::size_t x = 0; x < values_.size(); ++x) d += values_[x] != other.values_[x];
    return d;
}

Formula::Formula(std::uint32_t n, std::uint32_t k) : n_(n), k_(k)
{
    if (k == 0) throw std::invalid_argument("clause width must be positive");
}

void Formula::add_clause(std::span<const Literal> clause)
{
    if (clause.size() != k_)
        throw std::invalid_argument("clause has " + std::to_string(clause.size()) + " literals, expected " +
                                    std::to_string(k_));
    for (const Literal& l : clause) {
        if (l.var >= n_) throw std::invalid_argument("literal references variable " + std::to_string(l.var));
        if (l.sign != 1 && l.sign != -1) throw std::invalid_argument("literal sign must be +1 or -1");
    }
    lits_.insert(lits_.end(), clause.begin(), clause.end());
}

bool Formula::satisfied_by(const Assignment& sigma) const
{
    for (std::size_t i = 0; i < m(); ++i) {
        bool sat = false;
        for (const Literal& l : clause(i))
            if (sigma.value(l)) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

Formula Formula::negated() const
{
    Formula g(n_, k_);
    g.lits_.reserve(lits_.size());
    for (const Literal& l : lits_) g.lits_.push_back(~l);
    return g;
}

SignedDegreeSequence::SignedDegreeSequence(std::uint32_t k, std::uint64_t m, std::vector<std::int64_t> pos,
                                           std::vector<std::int64_t> neg)
    : k_(k), m_(m), pos_(std::move(pos)), neg_(std::move(neg))
{
    if (k == 0) throw std::invalid_argument("clause width must be positive");
    if (pos_.size() != neg_.size()) throw std::invalid_argument("positive/negative degree lists differ in length");
    std::int64_t sum = 0;
    for (std::size_t x = 0; x < pos_.size(); ++x) {
        if (pos_[x] < 0 || neg_[x] < 0) throw std::invalid_argument("negative degree");
        sum += pos_[x] + neg_[x];
    }
    if (sum != total())
        throw std::invalid_argument("degrees sum to " + std::to_string(sum) + ", expected km = " +
                                    std::to_string(total()));
}

SignedDegreeSequence degree_sequence_of(const Formula& f)
{
    std::vector<std::int64_t> pos(f.n(), 0), neg(f.n(), 0);
    for (const Literal& l : f.literals()) (l.positive() ? pos : neg)[l.var] += 1;
    return {f.k(), f.m(), std::move(pos), std::move(neg)};
}

bool good_signature(std::int64_t dpos, std::int64_t dneg, std::uint32_t k, double r)
{
    const double lim = 0.75 * k * r;
    if (!(static_cast<double>(dpos) < lim && static_cast<double>(dneg) < lim)) return false;
    const std::int64_t z = dpos - dneg;
    return z != 0 && static_cast<double>(z) * static_cast<double>(z) <= bp_cutoff_squared(k);
}

TypeTable::TypeTable(const SignedDegreeSequence& d, TypeRule rule)
    : k_(d.k()), km_(d.total()), rule_(rule), var_type_(d.n()), good_(d.n(), 0)
{
    if (km_ == 0) throw std::invalid_argument("type table needs positive occurrence mass (km = 0)");
    if (k_ > 61) throw std::invalid_argument("clause width too large for dyadic types");
    const double r = d.n() ? static_cast<double>(d.m()) / static_cast<double>(d.n()) : 0.0;
    for (std::size_t x = 0; x < d.n(); ++x) {
        const std::int64_t z = d.pos(x) - d.neg(x);
        bool use_bp = rule != TypeRule::constant;
        if (rule == TypeRule::good_signature) {
            good_[x] = good_signature(d.pos(x), d.neg(x), k_, r) ? 1 : 0;
            use_bp = good_[x] != 0;
        }
        const PType t = use_bp ? p_bp_type(z, k_) : half();
        var_type_[x] = t;
        mass_[t] += d.pos(x);
        mass_[complement(t)] += d.neg(x);
        n_of_[t] += 1;
    }
}

double TypeTable::value(PType t) const
{
    return std::ldexp(static_cast<double>(t.num), -static_cast<int>(k_ + 1));
}

std::int64_t TypeTable::mass(PType t) const
{
    auto it = mass_.find(t);
    return it == mass_.end() ? 0 : it->second;
}

std::vector<PType> TypeTable::types() const
{
    std::vector<PType> out;
    out.reserve(mass_.size());
    for (const auto& [t, w] : mass_) out.push_back(t);
    return out;
}

TypeTable build_type_table(const SignedDegreeSequence& d, TypeRule rule) { return TypeTable(d, rule); }

std::int64_t ClauseTypeCounts::total() const
{
    std::int64_t s = 0;
    for (const auto& [l, c] : counts) s += c;
    return s;
}

ClauseType clause_type(const Formula& f, std::size_t i, const TypeTable& table)
{
    ClauseType ell;
    ell.reserve(f.k());
    for (const Literal& l : f.clause(i)) ell.push_back(table.type_of(l));
    return ell;
}

ClauseTypeCounts clause_type_counts(const Formula& f, const TypeTable& table)
{
    if (table.n() != f.n() || table.k() != f.k()) throw std::invalid_argument("type table does not match formula");
    ClauseTypeCounts out;
    for (std::size_t i = 0; i < f.m(); ++i) out.counts[clause_type(f, i, table)] += 1;
    return out;
}

}  // namespace ksat
