#pragma once

#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "ksat/core.hpp"

namespace ksat::testing {

// Clauses in DIMACS-style signed 1-based notation.
inline Formula make_formula(std::uint32_t n, std::uint32_t k, std::initializer_list<std::initializer_list<int>> clauses)
{
    Formula f(n, k);
    for (const auto& c : clauses) {
        std::vector<Literal> lits;
        for (int v : c) lits.push_back(v > 0 ? Literal::pos(v - 1) : Literal::neg(-v - 1));
        f.add_clause(lits);
    }
    return f;
}

}  // namespace ksat::testing
