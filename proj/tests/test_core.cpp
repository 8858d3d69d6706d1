#include <doctest.h>

#include <algorithm>
#include <random>

#include "helpers.hpp"
#include "ksat/core.hpp"
#include "ksat/gen.hpp"
#include "ksat/marginals.hpp"

using namespace ksat;
using ksat::testing::make_formula;

TEST_CASE("literal encoding")
{
    const Literal a = Literal::pos(3), b = Literal::neg(3);
    CHECK(a.positive());
    CHECK_FALSE(b.positive());
    CHECK(~a == b);
    CHECK(Literal::from_index(a.index()) == a);
    CHECK(Literal::from_index(b.index()) == b);
}

TEST_CASE("assignment values and masks")
{
    Assignment s = Assignment::from_mask(0b101, 3);
    CHECK(s[0]);
    CHECK_FALSE(s[1]);
    CHECK(s[2]);
    CHECK(s.mask() == 0b101);
    CHECK(s.value(Literal::neg(1)));
    CHECK(s.distance(Assignment(3, true)) == 1);
}

TEST_CASE("formula validation")
{
    Formula f(3, 3);
    const std::vector<Literal> short_clause{Literal::pos(0)};
    CHECK_THROWS_AS(f.add_clause(short_clause), std::invalid_argument);
    const std::vector<Literal> bad_var{Literal::pos(0), Literal::pos(1), Literal::pos(3)};
    CHECK_THROWS_AS(f.add_clause(bad_var), std::invalid_argument);
    CHECK_THROWS_AS(SignedDegreeSequence(3, 1, {1, 1}, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(SignedDegreeSequence(3, 1, {4, 0}, {-1, 0}), std::invalid_argument);
}

TEST_CASE("degree_sequence_of counts occurrences")
{
    const Formula f = make_formula(3, 3, {{1, 2, 3}, {1, -2, 3}});
    const SignedDegreeSequence d = degree_sequence_of(f);
    CHECK(d.pos() == std::vector<std::int64_t>{2, 1, 2});
    CHECK(d.neg() == std::vector<std::int64_t>{0, 1, 0});
    CHECK(d.total() == 6);

    const SignedDegreeSequence empty = degree_sequence_of(Formula(4, 3));
    CHECK(empty.total() == 0);
    CHECK(std::all_of(empty.pos().begin(), empty.pos().end(), [](auto v) { return v == 0; }));

    const SignedDegreeSequence rep = degree_sequence_of(make_formula(2, 3, {{1, 1, 1}}));
    CHECK(rep.pos(0) == 3);
    CHECK(rep.neg(0) == 0);
    CHECK(rep.pos(1) == 0);
}

TEST_CASE("degree_sequence_of is invariant under clause permutation")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const Formula f = sample_uniform(12, 40, 3, 100 + trial);
        std::vector<std::size_t> order(f.m());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::shuffle(order.begin(), order.end(), rng);
        Formula g(f.n(), f.k());
        for (std::size_t i : order) g.add_clause(f.clause(i));
        CHECK(degree_sequence_of(g) == degree_sequence_of(f));
    }
}

TEST_CASE("type table: balanced degrees give the single type 1/2")
{
    const SignedDegreeSequence d(3, 2, {1, 1, 1}, {1, 1, 1});
    const TypeTable t(d);
    CHECK(t.types().size() == 1);
    CHECK(t.value(t.types()[0]) == 0.5);
    CHECK(t.pi(t.half()) == 1.0);
}

TEST_CASE("type table: a good signature inside the cutoff keeps its BP type")
{
    // k = 10, n = 2, m = 2, r = 1: 3kr/4 = 7.5, so (6, 2) is good.
    const SignedDegreeSequence d(10, 2, {6, 6}, {2, 6});
    const TypeTable t(d);
    CHECK(t.good(0));
    CHECK_FALSE(t.good(1));
    CHECK(t.value(t.var_type(0)) == 0.501953125);
    CHECK(t.value(t.type_of(Literal::neg(0))) == 1.0 - 0.501953125);
    CHECK(t.value(t.var_type(1)) == 0.5);
}

TEST_CASE("type table: beyond the cutoff the type is 1/2")
{
    // (2000, 0) has degrees below 3kr/4 = 2002.5, so only the cutoff removes it.
    const SignedDegreeSequence d(10, 534, {2000, 1670}, {0, 1670});
    CHECK(bp_cutoff(10) == doctest::Approx(1536.0).epsilon(1e-3));
    const TypeTable t(d);
    CHECK(2000 < 0.75 * 10 * 267);
    CHECK_FALSE(t.good(0));
    CHECK(t.value(t.var_type(0)) == 0.5);
    const TypeTable bp(d, TypeRule::bp_only);
    CHECK(bp.value(bp.var_type(0)) == 0.5);
}

TEST_CASE("type table rejects km = 0")
{
    CHECK_THROWS_AS(TypeTable(SignedDegreeSequence(3, 0, {0, 0}, {0, 0})), std::invalid_argument);
}

TEST_CASE("type table invariants on random degree sequences")
{
    for (std::uint32_t k : {3u, 5u, 8u}) {
        for (int trial = 0; trial < 30; ++trial) {
            const std::uint32_t n = 40;
            const SignedDegreeSequence d = sample_degree_sequence(n, 5 * n, k, 1000 * k + trial);
            for (TypeRule rule : {TypeRule::good_signature, TypeRule::bp_only}) {
                const TypeTable t(d, rule);
                std::int64_t mass = 0;
                double pi = 0;
                for (const auto& [type, w] : t.masses()) {
                    mass += w;
                    pi += t.pi(type);
                    CHECK(t.masses().count(t.complement(type)) == 1);
                }
                CHECK(mass == t.km());
                CHECK(pi == doctest::Approx(1.0).epsilon(1e-12));
                for (std::size_t x = 0; x < n; ++x) {
                    CHECK(t.value(t.type_of(Literal::pos(x))) + t.value(t.type_of(Literal::neg(x))) == 1.0);
                    if (!t.good(x) && rule == TypeRule::good_signature) CHECK(t.var_type(x) == t.half());
                }
            }
        }
    }
}

TEST_CASE("clause type counts")
{
    SUBCASE("balanced formula has one clause type")
    {
        const Formula f = make_formula(3, 3, {{1, 2, 3}, {-1, -2, -3}});
        const auto c = clause_type_counts(f, TypeTable(degree_sequence_of(f)));
        REQUIRE(c.counts.size() == 1);
        CHECK(c.counts.begin()->second == 2);
        for (PType t : c.counts.begin()->first) CHECK(t.num == 8);
    }
    SUBCASE("empty formula has no clause types")
    {
        const TypeTable t(SignedDegreeSequence(3, 1, {1, 1, 1}, {0, 0, 0}));
        CHECK(clause_type_counts(Formula(3, 3), t).counts.empty());
        CHECK(clause_type_counts(Formula(3, 3), t).total() == 0);
    }
    SUBCASE("two clauses of distinct types")
    {
        const Formula f = make_formula(3, 3, {{1, 1, 2}, {3, -3, 2}});
        const TypeTable t(degree_sequence_of(f), TypeRule::bp_only);
        const auto c = clause_type_counts(f, t);
        REQUIRE(c.counts.size() == 2);
        const ClauseType l1{{10}, {10}, {10}}, l2{{8}, {8}, {10}};
        CHECK(c.counts.at(l1) == 1);
        CHECK(c.counts.at(l2) == 1);
    }
}

TEST_CASE("clause type counts sum to m")
{
    for (int trial = 0; trial < 20; ++trial) {
        const Formula f = sample_uniform(30, 90, 3, 500 + trial);
        CHECK(clause_type_counts(f, TypeTable(degree_sequence_of(f))).total() == 90);
    }
}
