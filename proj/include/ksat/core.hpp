#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace ksat {

struct Literal {
    std::uint32_t var = 0;
    std::int8_t sign = 1;

    static Literal pos(std::uint32_t v) { return {v, 1}; }
    static Literal neg(std::uint32_t v) { return {v, -1}; }

    bool positive() const { return sign > 0; }
    Literal operator~() const { return {var, static_cast<std::int8_t>(-sign)}; }
    // Dense index in [0, 2n): 2v for x, 2v+1 for the negation.
    std::uint32_t index() const { return 2 * var + (sign < 0 ? 1u : 0u); }
    static Literal from_index(std::uint32_t i) { return {i / 2, static_cast<std::int8_t>(i % 2 ? -1 : 1)}; }

    friend bool operator==(const Literal&, const Literal&) = default;
};

class Assignment {
public:
    Assignment() = default;
    explicit Assignment(std::size_t n, bool value = false) : values_(n, value ? 1 : 0) {}
    explicit Assignment(std::vector<std::uint8_t> values);

    static Assignment from_mask(std::uint64_t mask, std::size_t n);
    std::uint64_t mask() const;

    std::size_t size() const { return values_.size(); }
    bool operator[](std::size_t x) const { return values_[x] != 0; }
    void set(std::size_t x, bool v) { values_[x] = v ? 1 : 0; }
    bool value(Literal l) const { return (values_[l.var] != 0) == l.positive(); }
    std::size_t distance(const Assignment& other) const;
    const std::vector<std::uint8_t>& values() const { return values_; }

    friend bool operator==(const Assignment&, const Assignment&) = default;

private:
    std::vector<std::uint8_t> values_;
};

class Formula {
public:
    Formula(std::uint32_t n, std::uint32_t k);

    std::uint32_t n() const { return n_; }
    std::uint32_t k() const { return k_; }
    std::size_t m() const { return lits_.size() / k_; }

    void add_clause(std::span<const Literal> clause);
    std::span<const Literal> clause(std::size_t i) const { return {lits_.data() + i * k_, k_}; }
    const Literal& literal(std::size_t i, std::size_t j) const { return lits_[i * k_ + j]; }
    const std::vector<Literal>& literals() const { return lits_; }

    bool satisfied_by(const Assignment& sigma) const;
    Formula negated() const;

    friend bool operator==(const Formula&, const Formula&) = default;

private:
    std::uint32_t n_;
    std::uint32_t k_;
    std::vector<Literal> lits_;
};

class SignedDegreeSequence {
public:
    SignedDegreeSequence(std::uint32_t k, std::uint64_t m, std::vector<std::int64_t> pos,
                         std::vector<std::int64_t> neg);

    std::uint32_t k() const { return k_; }
    std::uint64_t m() const { return m_; }
    std::size_t n() const { return pos_.size(); }
    std::int64_t total() const { return static_cast<std::int64_t>(k_ * m_); }

    std::int64_t pos(std::size_t x) const { return pos_[x]; }
    std::int64_t neg(std::size_t x) const { return neg_[x]; }
    std::int64_t degree(Literal l) const { return l.positive() ? pos_[l.var] : neg_[l.var]; }
    const std::vector<std::int64_t>& pos() const { return pos_; }
    const std::vector<std::int64_t>& neg() const { return neg_; }

    friend bool operator==(const SignedDegreeSequence&, const SignedDegreeSequence&) = default;

private:
    std::uint32_t k_;
    std::uint64_t m_;
    std::vector<std::int64_t> pos_;
    std::vector<std::int64_t> neg_;
};

SignedDegreeSequence degree_sequence_of(const Formula& f);

// A literal type: the dyadic rational num / 2^(k+1). The denominator is fixed by the table.
struct PType {
    std::int64_t num = 0;
    friend auto operator<=>(const PType&, const PType&) = default;
};

using ClauseType = std::vector<PType>;

enum class TypeRule {
    good_signature,  // refined rule: variables without a good signature get type 1/2
    bp_only,         // p_d(x) = p_BP(d_x - d_negx) with no signature filter
    constant,        // p_d == 1/2: the balanced reference map
};

class TypeTable {
public:
    TypeTable(const SignedDegreeSequence& d, TypeRule rule = TypeRule::good_signature);

    std::uint32_t k() const { return k_; }
    std::size_t n() const { return var_type_.size(); }
    std::int64_t km() const { return km_; }
    TypeRule rule() const { return rule_; }

    std::int64_t denominator() const { return std::int64_t{1} << (k_ + 1); }
    PType half() const { return {std::int64_t{1} << k_}; }
    PType complement(PType t) const { return {denominator() - t.num}; }
    double value(PType t) const;

    PType type_of(Literal l) const { return l.positive() ? var_type_[l.var] : complement(var_type_[l.var]); }
    PType var_type(std::size_t x) const { return var_type_[x]; }
    bool good(std::size_t x) const { return good_[x] != 0; }

    // Occurrence mass per type; pi(t) = mass(t) / km.
    const std::map<PType, std::int64_t>& masses() const { return mass_; }
    std::int64_t mass(PType t) const;
    double pi(PType t) const { return static_cast<double>(mass(t)) / static_cast<double>(km_); }
    // Variable count per type (type of the positive literal).
    const std::map<PType, std::int64_t>& var_counts() const { return n_of_; }
    std::vector<PType> types() const;

private:
    std::uint32_t k_;
    std::int64_t km_;
    TypeRule rule_;
    std::vector<PType> var_type_;
    std::vector<std::uint8_t> good_;
    std::map<PType, std::int64_t> mass_;
    std::map<PType, std::int64_t> n_of_;
};

TypeTable build_type_table(const SignedDegreeSequence& d, TypeRule rule = TypeRule::good_signature);

bool good_signature(std::int64_t dpos, std::int64_t dneg, std::uint32_t k, double r);

struct ClauseTypeCounts {
    std::map<ClauseType, std::int64_t> counts;
    std::int64_t total() const;
};

ClauseType clause_type(const Formula& f, std::size_t i, const TypeTable& table);
ClauseTypeCounts clause_type_counts(const Formula& f, const TypeTable& table);

}  // namespace ksat
