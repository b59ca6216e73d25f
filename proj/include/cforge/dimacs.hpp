#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace cforge {

struct Literal {
  std::size_t var = 0;  // 0-based
  bool negated = false;
};

using Clause = std::vector<Literal>;

struct CNF {
  std::size_t num_vars = 0;
  std::vector<Clause> clauses;
};

/// Reads DIMACS CNF ("p cnf V C" header, 'c' comment lines, clauses ended by 0).
/// Throws ParseError on malformed input.
CNF parse_dimacs(std::istream& in);
CNF parse_dimacs_string(const std::string& text);
std::string to_dimacs(const CNF& cnf);

/// Bit v of `assignment` is the value of variable v.
bool satisfies(const CNF& cnf, std::uint64_t assignment);
std::size_t satisfied_clauses(const CNF& cnf, std::uint64_t assignment);

/// Exhaustive search, num_vars <= 24.
std::optional<std::uint64_t> find_satisfying(const CNF& cnf);

}  // namespace cforge
