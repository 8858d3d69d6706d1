#include "ksat/gen.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "ksat/error.hpp"
#include "ksat/rng.hpp"

namespace ksat {

namespace {

void check_params(std::uint32_t n, std::uint32_t k)
{
    if (k < 2) throw std::invalid_argument("k must be at least 2");
    if (n < k) throw std::invalid_argument("n must be at least k");
}

Literal uniform_literal(Rng& rng, std::uint32_t n)
{
    std::uniform_int_distribution<std::uint32_t> pick(0, 2 * n - 1);
    return Literal::from_index(pick(rng));
}

}  // namespace

std::uint64_t clauses_for_density(double r, std::uint32_t n)
{
    if (!(r >= 0) || !std::isfinite(r)) throw std::invalid_argument("density must be finite and non-negative");
    return static_cast<std::uint64_t>(std::floor(r * n + 0.5));
}

Formula sample_uniform(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed)
{
    check_params(n, k);
    Rng rng = make_rng(seed, 1);
    Formula f(n, k);
    std::vector<Literal> clause(k);
    for (std::uint64_t i = 0; i < m; ++i) {
        for (auto& l : clause) l = uniform_literal(rng, n);
        f.add_clause(clause);
    }
    return f;
}

SignedDegreeSequence sample_degree_sequence(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed)
{
    check_params(n, k);
    Rng rng = make_rng(seed, 2);
    std::vector<std::int64_t> pos(n), neg(n);
    std::int64_t left = static_cast<std::int64_t>(k * m);
    std::uint64_t cells = 2ull * n;
    for (std::uint32_t x = 0; x < n; ++x)
        for (auto* out : {&pos, &neg}) {
            std::int64_t v = left;
            if (cells > 1) {
                std::binomial_distribution<std::int64_t> bin(left, 1.0 / static_cast<double>(cells));
                v = bin(rng);
            }
            (*out)[x] = v;
            left -= v;
            --cells;
        }
    return {k, m, std::move(pos), std::move(neg)};
}

Formula sample_formula_given_degrees(const SignedDegreeSequence& d, std::uint64_t seed)
{
    const std::int64_t km = d.total();
    std::vector<Literal> clones;
    clones.reserve(static_cast<std::size_t>(km));
    for (std::size_t x = 0; x < d.n(); ++x) {
        clones.insert(clones.end(), static_cast<std::size_t>(d.pos(x)), Literal::pos(static_cast<std::uint32_t>(x)));
        clones.insert(clones.end(), static_cast<std::size_t>(d.neg(x)), Literal::neg(static_cast<std::uint32_t>(x)));
    }
    if (static_cast<std::int64_t>(clones.size()) != km) throw std::invalid_argument("degree sum differs from km");
    Rng rng = make_rng(seed, 3);
    std::shuffle(clones.begin(), clones.end(), rng);
    Formula f(static_cast<std::uint32_t>(d.n()), d.k());
    for (std::uint64_t i = 0; i < d.m(); ++i) f.add_clause({clones.data() + i * d.k(), d.k()});
    return f;
}

Formula sample_two_step(std::uint32_t n, std::uint64_t m, std::uint32_t k, std::uint64_t seed)
{
    return sample_formula_given_degrees(sample_degree_sequence(n, m, k, derive_seed(seed, 11)), derive_seed(seed, 12));
}

Formula sample_formula_given_degrees_and_types(const SignedDegreeSequence& d, const ClauseTypeCounts& counts,
                                               std::uint64_t seed, TypeRule rule)
{
    const TypeTable table(d, rule);
    const std::uint32_t k = d.k();
    if (counts.total() != static_cast<std::int64_t>(d.m()))
        throw InfeasibleError("clause-type counts sum to " + std::to_string(counts.total()) + ", expected m = " +
                              std::to_string(d.m()));
    std::map<PType, std::int64_t> demand;
    for (const auto& [ell, c] : counts.counts) {
        if (ell.size() != k) throw InfeasibleError("clause type of wrong width");
        if (c < 0) throw InfeasibleError("negative clause-type count");
        for (PType t : ell) demand[t] += c;
    }
    for (const auto& [t, need] : demand)
        if (need != table.mass(t)) throw InfeasibleError("type demand differs from clone supply for some type");
    for (const auto& [t, have] : table.masses())
        if (have != 0 && demand.find(t) == demand.end())
            throw InfeasibleError("clones of some type are left unmatched");

    Rng rng = make_rng(seed, 4);
    std::map<PType, std::vector<Literal>> piles;
    for (std::size_t x = 0; x < d.n(); ++x) {
        const auto v = static_cast<std::uint32_t>(x);
        auto& pp = piles[table.type_of(Literal::pos(v))];
        pp.insert(pp.end(), static_cast<std::size_t>(d.pos(x)), Literal::pos(v));
        auto& pn = piles[table.type_of(Literal::neg(v))];
        pn.insert(pn.end(), static_cast<std::size_t>(d.neg(x)), Literal::neg(v));
    }
    for (auto& [t, pile] : piles) std::shuffle(pile.begin(), pile.end(), rng);

    std::vector<const ClauseType*> order;
    order.reserve(d.m());
    for (const auto& [ell, c] : counts.counts) order.insert(order.end(), static_cast<std::size_t>(c), &ell);
    std::shuffle(order.begin(), order.end(), rng);

    Formula f(static_cast<std::uint32_t>(d.n()), k);
    std::vector<Literal> clause(k);
    for (const ClauseType* ell : order) {
        for (std::uint32_t j = 0; j < k; ++j) {
            auto& pile = piles[(*ell)[j]];
            clause[j] = pile.back();
            pile.pop_back();
        }
        f.add_clause(clause);
    }
    return f;
}

Formula sample_planted_given(const Assignment& sigma, std::uint64_t m, std::uint32_t k, std::uint64_t seed)
{
    const auto n = static_cast<std::uint32_t>(sigma.size());
    if (n == 0 || k == 0) throw std::invalid_argument("planted model needs n, k >= 1");
    Rng rng = make_rng(seed, 5);
    Formula f(n, k);
    std::vector<Literal> clause(k);
    for (std::uint64_t i = 0; i < m; ++i) {
        for (;;) {
            bool sat = false;
            for (auto& l : clause) {
                l = uniform_literal(rng, n);
                sat = sat || sigma.value(l);
            }
            if (sat) break;
        }
        f.add_clause(clause);
    }
    return f;
}

std::pair<Formula, Assignment> sample_planted_pair(std::uint32_t n, std::uint64_t m, std::uint32_t k,
                                                   std::uint64_t seed)
{
    if (n == 0 || k == 0) throw std::invalid_argument("planted model needs n, k >= 1");
    Rng rng = make_rng(seed, 6);
    Assignment sigma(n);
    std::bernoulli_distribution coin(0.5);
    for (std::uint32_t x = 0; x < n; ++x) sigma.set(x, coin(rng));
    Formula f = sample_planted_given(sigma, m, k, derive_seed(seed, 7));
    return {std::move(f), std::move(sigma)};
}

}  // namespace ksat
