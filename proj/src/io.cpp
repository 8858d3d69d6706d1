#include "ksat/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace ksat {

Formula parse_dimacs(std::istream& in, std::optional<std::uint32_t> k)
{
    std::string line;
    long long n = -1, m = -1;
    std::vector<std::vector<Literal>> clauses;
    std::vector<Literal> cur;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok[0] == 'c' || tok[0] == '%') continue;
        if (tok == "p") {
            std::string fmt;
            if (n >= 0 || !(ls >> fmt >> n >> m) || fmt != "cnf" || n < 0 || m < 0)
                throw std::invalid_argument("malformed DIMACS header: " + line);
            continue;
        }
        if (n < 0) throw std::invalid_argument("DIMACS clause before header");
        ls.clear();
        ls.str(line);
        long long v;
        while (ls >> v) {
            if (v == 0) {
                clauses.push_back(std::move(cur));
                cur.clear();
                continue;
            }
            const long long a = v < 0 ? -v : v;
            if (a > n) throw std::invalid_argument("DIMACS literal " + std::to_string(v) + " exceeds n");
            cur.push_back(v > 0 ? Literal::pos(static_cast<std::uint32_t>(a - 1))
                                : Literal::neg(static_cast<std::uint32_t>(a - 1)));
        }
        if (!ls.eof()) throw std::invalid_argument("malformed DIMACS line: " + line);
    }
    if (n < 0) throw std::invalid_argument("missing DIMACS header");
    if (!cur.empty()) throw std::invalid_argument("unterminated DIMACS clause");
    if (static_cast<long long>(clauses.size()) != m)
        throw std::invalid_argument("DIMACS header declares " + std::to_string(m) + " clauses, found " +
                                    std::to_string(clauses.size()));
    std::uint32_t width = k ? *k : (clauses.empty() ? 0u : static_cast<std::uint32_t>(clauses.front().size()));
    if (width == 0) throw std::invalid_argument("clause width unknown for an empty DIMACS formula");
    Formula f(static_cast<std::uint32_t>(n), width);
    for (const auto& c : clauses) f.add_clause(c);
    return f;
}

void write_dimacs(std::ostream& out, const Formula& f)
{
    out << "p cnf " << f.n() << ' ' << f.m() << '\n';
    for (std::size_t i = 0; i < f.m(); ++i) {
        for (const Literal& l : f.clause(i)) out << (l.positive() ? "" : "-") << (l.var + 1) << ' ';
        out << "0\n";
    }
}

std::string to_dimacs(const Formula& f)
{
    std::ostringstream os;
    write_dimacs(os, f);
    return os.str();
}

Formula from_dimacs(const std::string& text, std::optional<std::uint32_t> k)
{
    std::istringstream is(text);
    return parse_dimacs(is, k);
}

SignedDegreeSequence parse_degrees(std::istream& in)
{
    long long k, m, n;
    if (!(in >> k >> m >> n) || k <= 0 || m < 0 || n < 0) throw std::invalid_argument("malformed degree header");
    std::vector<std::int64_t> pos(n, 0), neg(n, 0);
    std::vector<bool> seen(n, false);
    for (long long i = 0; i < n; ++i) {
        long long idx, dp, dn;
        if (!(in >> idx >> dp >> dn)) throw std::invalid_argument("truncated degree file");
        if (idx < 0 || idx >= n || seen[idx]) throw std::invalid_argument("bad variable index " + std::to_string(idx));
        seen[idx] = true;
        pos[idx] = dp;
        neg[idx] = dn;
    }
    return {static_cast<std::uint32_t>(k), static_cast<std::uint64_t>(m), std::move(pos), std::move(neg)};
}

void write_degrees(std::ostream& out, const SignedDegreeSequence& d)
{
    out << d.k() << ' ' << d.m() << ' ' << d.n() << '\n';
    for (std::size_t x = 0; x < d.n(); ++x) out << x << ' ' << d.pos(x) << ' ' << d.neg(x) << '\n';
}

}  // namespace ksat
