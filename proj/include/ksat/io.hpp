#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ksat/core.hpp"

namespace ksat {

// DIMACS CNF. Clause and literal order are preserved; the clause width is taken from the
// first clause unless given (needed for formulas without clauses).
Formula parse_dimacs(std::istream& in, std::optional<std::uint32_t> k = std::nullopt);
void write_dimacs(std::ostream& out, const Formula& f);
std::string to_dimacs(const Formula& f);
Formula from_dimacs(const std::string& text, std::optional<std::uint32_t> k = std::nullopt);

// Degree sequences: header "k m n", then one line "index d_pos d_neg" per variable.
SignedDegreeSequence parse_degrees(std::istream& in);
void write_degrees(std::ostream& out, const SignedDegreeSequence& d);

}  // namespace ksat
