#include "ksat/census.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>

#include "ksat/error.hpp"
#include "ksat/marginals.hpp"

namespace ksat {

namespace {

constexpr std::uint32_t kHardCap = 30;

void check_cap(const Formula& f, const CensusOptions& opt)
{
    const std::uint32_t cap = std::min(opt.max_vars, kHardCap);
    if (f.n() > cap)
        throw CapExceeded("n = " + std::to_string(f.n()) + " exceeds enumeration cap " + std::to_string(cap));
}

unsigned thread_count(const CensusOptions& opt)
{
    unsigned t = opt.threads ? opt.threads : std::thread::hardware_concurrency();
    return std::max(1u, t);
}

// Literal occurrence lists, one entry per occurrence (repeats kept).
struct Occurrences {
    std::vector<std::uint32_t> start;
    std::vector<std::uint32_t> clause;

    explicit Occurrences(const Formula& f) : start(2 * f.n() + 1, 0)
    {
        for (const Literal& l : f.literals()) ++start[l.index() + 1];
        for (std::size_t i = 1; i < start.size(); ++i) start[i] += start[i - 1];
        clause.resize(f.literals().size());
        std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
        for (std::size_t i = 0; i < f.m(); ++i)
            for (const Literal& l : f.clause(i)) clause[fill[l.index()]++] = static_cast<std::uint32_t>(i);
    }
};

// Walks the 2^low assignments sharing the given high bits in Gray-code order and calls
// visit(mask) at every satisfying one. Returns false if visit asked to stop.
class GrayWalker {
public:
    GrayWalker(const Formula& f, const Occurrences& occ) : f_(f), occ_(occ), cnt_(f.m(), 0) {}

    template <class Visit, class Flip>
    bool run(std::uint64_t high, std::uint32_t low, Visit&& visit, Flip&& on_flip)
    {
        std::uint64_t mask = high;
        std::fill(cnt_.begin(), cnt_.end(), 0);
        unsat_ = 0;
        for (std::size_t i = 0; i < f_.m(); ++i) {
            std::uint32_t c = 0;
            for (const Literal& l : f_.clause(i)) c += (((mask >> l.var) & 1u) != 0) == l.positive();
            cnt_[i] = c;
            unsat_ += c == 0;
        }
        if (unsat_ == 0 && !visit(mask)) return false;
        const std::uint64_t steps = std::uint64_t{1} << low;
        for (std::uint64_t s = 1; s < steps; ++s) {
            const auto x = static_cast<std::uint32_t>(std::countr_zero(s));
            const bool now_true = ((mask >> x) & 1u) == 0;
            mask ^= std::uint64_t{1} << x;
            on_flip(x, now_true);
            const std::uint32_t up = now_true ? 2 * x : 2 * x + 1;
            const std::uint32_t down = up ^ 1u;
            for (std::uint32_t p = occ_.start[up]; p < occ_.start[up + 1]; ++p)
                if (cnt_[occ_.clause[p]]++ == 0) --unsat_;
            for (std::uint32_t p = occ_.start[down]; p < occ_.start[down + 1]; ++p)
                if (--cnt_[occ_.clause[p]] == 0) ++unsat_;
            if (unsat_ == 0 && !visit(mask)) return false;
        }
        return true;
    }

private:
    const Formula& f_;
    const Occurrences& occ_;
    std::vector<std::uint32_t> cnt_;
    std::uint64_t unsat_ = 0;
};

// Splits the cube into 2^high_bits blocks over the top variables and runs body(block) on a pool.
void parallel_blocks(std::uint32_t n, unsigned threads, const std::function<void(std::uint64_t, std::uint32_t)>& body)
{
    std::uint32_t high_bits = 0;
    while (high_bits < 6 && high_bits + 10 < n && (1u << high_bits) < 4 * threads) ++high_bits;
    const std::uint32_t low = n - high_bits;
    const std::uint64_t blocks = std::uint64_t{1} << high_bits;
    if (threads == 1 || blocks == 1) {
        for (std::uint64_t b = 0; b < blocks; ++b) body(b, low);
        return;
    }
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&, t] {
            for (std::uint64_t b = t; b < blocks; b += threads) body(b, low);
        });
    for (auto& th : pool) th.join();
}

std::uint64_t lex_key(std::uint64_t mask, std::uint32_t n)
{
    std::uint64_t r = 0;
    for (std::uint32_t x = 0; x < n; ++x) r |= ((mask >> x) & 1u) << (n - 1 - x);
    return r;
}

}  // namespace

Enumeration enumerate_satisfying(const Formula& f, std::uint64_t max_solutions, const CensusOptions& opt)
{
    check_cap(f, opt);
    const Occurrences occ(f);
    Enumeration out;
    GrayWalker walker(f, occ);
    // Single-threaded so the overflow cut is deterministic.
    const bool complete = walker.run(
        0, f.n(),
        [&](std::uint64_t mask) {
            if (out.solutions.size() >= max_solutions) return false;
            out.solutions.push_back(mask);
            return true;
        },
        [](std::uint32_t, bool) {});
    out.overflow = !complete;
    if (out.overflow) {
        // Re-derive the lexicographically first max_solutions via a full ordered pass.
        out.solutions.clear();
        std::vector<std::uint64_t> all;
        walker.run(
            0, f.n(),
            [&](std::uint64_t mask) {
                all.push_back(lex_key(mask, f.n()));
                if (all.size() > 4 * max_solutions + 1024) {
                    std::nth_element(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(max_solutions), all.end());
                    all.resize(max_solutions);
                }
                return true;
            },
            [](std::uint32_t, bool) {});
        std::sort(all.begin(), all.end());
        all.resize(std::min<std::size_t>(all.size(), max_solutions));
        for (auto key : all) out.solutions.push_back(lex_key(key, f.n()));
        return out;
    }
    std::sort(out.solutions.begin(), out.solutions.end(), [n = f.n()](std::uint64_t a, std::uint64_t b) {
        return lex_key(a, n) < lex_key(b, n);
    });
    return out;
}

CensusSummary census(const Formula& f, const CensusOptions& opt)
{
    check_cap(f, opt);
    const Occurrences occ(f);
    const unsigned threads = thread_count(opt);
    std::vector<CensusSummary> blocks(std::uint64_t{1} << 6);
    parallel_blocks(f.n(), threads, [&](std::uint64_t b, std::uint32_t low) {
        GrayWalker walker(f, occ);
        CensusSummary s;
        s.true_counts.assign(f.n(), 0);
        // since[x]: solution count when x last became true; each true run adds its length.
        std::vector<std::uint64_t> since(f.n(), 0);
        const std::uint64_t high = b << low;
        std::uint64_t sols = 0;
        walker.run(
            high, low,
            [&](std::uint64_t) {
                ++sols;
                return true;
            },
            [&](std::uint32_t x, bool now_true) {
                if (now_true)
                    since[x] = sols;
                else
                    s.true_counts[x] += sols - since[x];
            });
        // The walk ends at Gray code 2^(low-1) within the block.
        const std::uint64_t last = low ? high | (std::uint64_t{1} << (low - 1)) : high;
        for (std::uint32_t x = 0; x < f.n(); ++x)
            if ((last >> x) & 1u) s.true_counts[x] += sols - (x < low ? since[x] : 0);
        s.count = sols;
        blocks[b] = std::move(s);
    });
    CensusSummary total;
    total.true_counts.assign(f.n(), 0);
    for (const auto& s : blocks) {
        if (s.true_counts.empty()) continue;
        total.count += s.count;
        for (std::uint32_t x = 0; x < f.n(); ++x) total.true_counts[x] += s.true_counts[x];
    }
    return total;
}

std::uint64_t count_satisfying(const Formula& f, const CensusOptions& opt) { return census(f, opt).count; }

std::uint64_t count_satisfying_naive(const Formula& f, const CensusOptions& opt)
{
    check_cap(f, opt);
    std::vector<std::uint64_t> pos(f.m(), 0), neg(f.m(), 0);
    for (std::size_t i = 0; i < f.m(); ++i)
        for (const Literal& l : f.clause(i)) (l.positive() ? pos : neg)[i] |= std::uint64_t{1} << l.var;
    std::uint64_t count = 0;
    const std::uint64_t all = f.n() == 64 ? ~0ull : (std::uint64_t{1} << f.n()) - 1;
    for (std::uint64_t mask = 0;; ++mask) {
        bool ok = true;
        for (std::size_t i = 0; i < f.m() && ok; ++i) ok = (mask & pos[i]) || (~mask & neg[i]);
        count += ok;
        if (mask == all) break;
    }
    return count;
}

std::uint64_t count_satisfying_backtrack(const Formula& f, const CensusOptions& opt)
{
    check_cap(f, opt);
    const std::uint32_t n = f.n();
    const Occurrences occ(f);
    std::vector<std::uint32_t> sat(f.m(), 0), open(f.m(), f.k());
    std::uint64_t satisfied = 0;
    std::uint64_t total = 0;
    // Assign variables in index order; a clause with no open literal and no true one is a conflict.
    std::function<void(std::uint32_t)> go = [&](std::uint32_t x) {
        if (satisfied == f.m()) {
            total += std::uint64_t{1} << (n - x);
            return;
        }
        if (x == n) return;
        for (int value = 0; value < 2; ++value) {
            const std::uint32_t t = value ? 2 * x : 2 * x + 1;  // literal made true
            bool conflict = false;
            for (std::uint32_t p = occ.start[t]; p < occ.start[t + 1]; ++p) {
                const auto c = occ.clause[p];
                --open[c];
                if (sat[c]++ == 0) ++satisfied;
            }
            for (std::uint32_t p = occ.start[t ^ 1u]; p < occ.start[(t ^ 1u) + 1]; ++p) {
                const auto c = occ.clause[p];
                if (--open[c] == 0 && sat[c] == 0) conflict = true;
            }
            if (!conflict) go(x + 1);
            for (std::uint32_t p = occ.start[t]; p < occ.start[t + 1]; ++p) {
                const auto c = occ.clause[p];
                ++open[c];
                if (--sat[c] == 0) --satisfied;
            }
            for (std::uint32_t p = occ.start[t ^ 1u]; p < occ.start[(t ^ 1u) + 1]; ++p) ++open[occ.clause[p]];
        }
    };
    go(0);
    return total;
}

std::vector<double> empirical_marginals(const Formula& f, const CensusOptions& opt)
{
    const CensusSummary s = census(f, opt);
    if (s.count == 0) throw std::invalid_argument("formula is unsatisfiable; marginals undefined");
    std::vector<double> mu(f.n());
    for (std::uint32_t x = 0; x < f.n(); ++x)
        mu[x] = static_cast<double>(s.true_counts[x]) / static_cast<double>(s.count);
    return mu;
}

double mean_distance_to_majority(const Formula& f, const CensusOptions& opt)
{
    const CensusSummary s = census(f, opt);
    if (s.count == 0) throw std::invalid_argument("formula is unsatisfiable; distance undefined");
    if (f.n() == 0) return 0.0;
    const Assignment maj = majority_vote(degree_sequence_of(f));
    long double sum = 0;
    for (std::uint32_t x = 0; x < f.n(); ++x)
        sum += maj[x] ? static_cast<long double>(s.count - s.true_counts[x]) : static_cast<long double>(s.true_counts[x]);
    return static_cast<double>(sum / (static_cast<long double>(s.count) * f.n()));
}

OverlapVector overlap_vector(const Assignment& sigma, const Assignment& tau, const SignedDegreeSequence& d,
                             const TypeTable& table)
{
    if (sigma.size() != d.n() || tau.size() != d.n()) throw std::invalid_argument("size mismatch");
    OverlapVector out;
    for (const auto& [t, w] : table.masses()) out[t].mass = w;
    for (std::size_t x = 0; x < d.n(); ++x) {
        const auto v = static_cast<std::uint32_t>(x);
        for (Literal l : {Literal::pos(v), Literal::neg(v)})
            if (sigma.value(l) && tau.value(l)) out[table.type_of(l)].both_true += d.degree(l);
    }
    return out;
}

double OverlapMatrix::omega(const ClauseType& ell, std::size_t j) const
{
    auto it = clauses.find(ell);
    if (it == clauses.end() || it->second == 0) return 0.0;
    return static_cast<double>(both_true.at(ell)[j]) / static_cast<double>(it->second);
}

OverlapMatrix overlap_matrix(const Assignment& sigma, const Assignment& tau, const Formula& f,
                             const TypeTable& table)
{
    if (sigma.size() != f.n() || tau.size() != f.n()) throw std::invalid_argument("size mismatch");
    OverlapMatrix w;
    for (std::size_t i = 0; i < f.m(); ++i) {
        const ClauseType ell = clause_type(f, i, table);
        w.clauses[ell] += 1;
        auto& row = w.both_true[ell];
        if (row.empty()) row.assign(f.k(), 0);
        for (std::size_t j = 0; j < f.k(); ++j) {
            const Literal l = f.literal(i, j);
            row[j] += (sigma.value(l) && tau.value(l)) ? 1 : 0;
        }
    }
    return w;
}

OverlapVector overlap_from_matrix(const OverlapMatrix& w, const TypeTable& table)
{
    OverlapVector out;
    for (const auto& [t, mass] : table.masses()) out[t].mass = mass;
    for (const auto& [ell, row] : w.both_true)
        for (std::size_t j = 0; j < row.size(); ++j) out[ell[j]].both_true += row[j];
    return out;
}

double default_cluster_delta(std::uint32_t k)
{
    return static_cast<double>(k) * k * std::pow(2.0, -0.5 * k);
}

std::vector<Assignment> cluster_of(const Assignment& sigma, const Formula& f, double delta, const CensusOptions& opt)
{
    check_cap(f, opt);
    if (sigma.size() != f.n()) throw std::invalid_argument("size mismatch");
    const std::uint64_t s = sigma.mask();
    const double n = f.n();
    std::vector<Assignment> out;
    const Occurrences occ(f);
    GrayWalker walker(f, occ);
    std::vector<std::uint64_t> hits;
    walker.run(
        0, f.n(),
        [&](std::uint64_t mask) {
            const double rel = n > 0 ? std::popcount(mask ^ s) / n : 0.0;
            if (rel < 0.5 - delta || rel > 0.5 + delta) hits.push_back(mask);
            return true;
        },
        [](std::uint32_t, bool) {});
    std::sort(hits.begin(), hits.end(),
              [nn = f.n()](std::uint64_t a, std::uint64_t b) { return lex_key(a, nn) < lex_key(b, nn); });
    out.reserve(hits.size());
    for (auto h : hits) out.push_back(Assignment::from_mask(h, f.n()));
    return out;
}

std::vector<std::uint64_t> pair_distance_spectrum_pairwise(const std::vector<std::uint64_t>& solutions,
                                                           std::uint32_t n)
{
    std::vector<std::uint64_t> hist(n + 1, 0);
    for (std::size_t a = 0; a < solutions.size(); ++a) {
        hist[0] += 1;
        for (std::size_t b = a + 1; b < solutions.size(); ++b) hist[std::popcount(solutions[a] ^ solutions[b])] += 2;
    }
    return hist;
}

std::vector<std::uint64_t> pair_distance_spectrum(const Formula& f, const CensusOptions& opt)
{
    check_cap(f, opt);
    const std::uint32_t n = f.n();
    const Occurrences occ(f);
    GrayWalker walker(f, occ);
    if (n <= 22) {
        // Autocorrelation of the solution indicator via the Walsh-Hadamard transform.
        std::vector<__int128> a(std::size_t{1} << n, 0);
        walker.run(
            0, n,
            [&](std::uint64_t mask) {
                a[mask] = 1;
                return true;
            },
            [](std::uint32_t, bool) {});
        auto wht = [&](std::vector<__int128>& v) {
            for (std::size_t h = 1; h < v.size(); h <<= 1)
                for (std::size_t i = 0; i < v.size(); i += 2 * h)
                    for (std::size_t j = i; j < i + h; ++j) {
                        const __int128 x = v[j], y = v[j + h];
                        v[j] = x + y;
                        v[j + h] = x - y;
                    }
        };
        wht(a);
        for (auto& v : a) v *= v;
        wht(a);
        std::vector<std::uint64_t> hist(n + 1, 0);
        for (std::size_t z = 0; z < a.size(); ++z)
            hist[std::popcount(z)] += static_cast<std::uint64_t>(a[z] >> n);
        return hist;
    }
    std::vector<std::uint64_t> sols;
    walker.run(
        0, n,
        [&](std::uint64_t mask) {
            sols.push_back(mask);
            return sols.size() <= (std::uint64_t{1} << 22);
        },
        [](std::uint32_t, bool) {});
    if (sols.size() > (std::uint64_t{1} << 22))
        throw CapExceeded("too many solutions for a pairwise distance spectrum");
    return pair_distance_spectrum_pairwise(sols, n);
}

}  // namespace ksat
