#include "cforge/dimacs.hpp"

#include <cstdlib>
#include <sstream>

#include "cforge/model.hpp"

namespace cforge {

CNF parse_dimacs(std::istream& in) {
  CNF cnf;
  bool header = false;
  std::size_t declared = 0;
  Clause current;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c" || tok[0] == 'c') continue;
    if (tok == "%") break;  // some benchmark files end this way
    if (tok == "p") {
      std::string fmt;
      long long v = -1, c = -1;
      if (header || !(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0) {
        throw ParseError("line " + std::to_string(lineno) + ": bad problem line");
      }
      header = true;
      cnf.num_vars = static_cast<std::size_t>(v);
      declared = static_cast<std::size_t>(c);
      continue;
    }
    if (!header) throw ParseError("line " + std::to_string(lineno) + ": clause before problem line");
    do {
      char* end = nullptr;
      const long long lit = std::strtoll(tok.c_str(), &end, 10);
      if (end == tok.c_str() || *end != '\0') {
        throw ParseError("line " + std::to_string(lineno) + ": bad literal '" + tok + "'");
      }
      if (lit == 0) {
        cnf.clauses.push_back(std::move(current));
        current.clear();
        continue;
      }
      const auto var = static_cast<std::size_t>(lit < 0 ? -lit : lit);
      if (var > cnf.num_vars) {
        throw ParseError("line " + std::to_string(lineno) + ": variable " + std::to_string(var) +
                         " exceeds declared count");
      }
      current.push_back({var - 1, lit < 0});
    } while (ls >> tok);
  }
  if (!header) throw ParseError("missing 'p cnf' problem line");
  if (!current.empty()) cnf.clauses.push_back(std::move(current));
  if (cnf.clauses.size() != declared) {
    throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                     std::to_string(cnf.clauses.size()));
  }
  return cnf;
}

CNF parse_dimacs_string(const std::string& text) {
  std::istringstream in(text);
  return parse_dimacs(in);
}

std::string to_dimacs(const CNF& cnf) {
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
  for (const auto& clause : cnf.clauses) {
    for (const auto& lit : clause) out << (lit.negated ? "-" : "") << lit.var + 1 << ' ';
    out << "0\n";
  }
  return out.str();
}

std::size_t satisfied_clauses(const CNF& cnf, std::uint64_t assignment) {
  std::size_t count = 0;
  for (const auto& clause : cnf.clauses) {
    for (const auto& lit : clause) {
      const bool value = (assignment >> lit.var) & 1u;
      if (value != lit.negated) {
        ++count;
        break;
      }
    }
  }
  return count;
}

bool satisfies(const CNF& cnf, std::uint64_t assignment) {
  return satisfied_clauses(cnf, assignment) == cnf.clauses.size();
}

std::optional<std::uint64_t> find_satisfying(const CNF& cnf) {
  if (cnf.num_vars > 24) throw CapacityError("exhaustive SAT search limited to 24 variables");
  const std::uint64_t total = std::uint64_t{1} << cnf.num_vars;
  for (std::uint64_t a = 0; a < total; ++a) {
    if (satisfies(cnf, a)) return a;
  }
  return std::nullopt;
}

}  // namespace cforge
