#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace cforge::lp {

enum class Sense { Minimize, Maximize };
enum class Relation { LessEq, GreaterEq, Equal };
enum class Status { Optimal, Infeasible, Unbounded };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::LessEq;
  double rhs = 0.0;
};

/// Dense LP: optimize objective.x subject to rows and lower <= x <= upper.
struct LinearProgram {
  Sense sense = Sense::Minimize;
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  std::vector<double> lower;                 // empty means all zero
  std::vector<std::optional<double>> upper;  // empty means all unbounded

  std::size_t num_vars() const { return objective.size(); }
  std::size_t num_rows() const { return constraints.size(); }
  void add(std::vector<double> coeffs, Relation rel, double rhs) {
    constraints.push_back({std::move(coeffs), rel, rhs});
  }
  double lower_bound(std::size_t j) const { return lower.empty() ? 0.0 : lower[j]; }
  std::optional<double> upper_bound(std::size_t j) const {
    return upper.empty() ? std::nullopt : upper[j];
  }
};

/// Every numerical threshold the solver uses, in one place.
struct Tolerances {
  double feasibility = 1e-7;   // primal residual accepted at Optimal
  double gap = 1e-7;           // |primal - dual| accepted at Optimal
  double pivot = 1e-11;        // smallest usable pivot magnitude
  double optimality = 1e-10;   // reduced cost treated as zero
  double phase1 = 1e-9;        // phase-1 objective treated as zero (relative)
  std::size_t max_iterations = 200000;
  bool scaling = true;
};

struct LPSolution {
  Status status = Status::Infeasible;
  std::vector<double> primal;
  /// dual[r] = d(objective)/d(rhs_r). Signs: for Minimize, >= rows have
  /// dual >= 0 and <= rows dual <= 0; reversed for Maximize.
  std::vector<double> dual;
  /// c - A^T dual, in original units.
  std::vector<double> reduced_costs;
  double objective_value = 0.0;
  /// When Infeasible: y over constraints (>= rows y >= 0, <= rows y <= 0)
  /// with max over the variable box of sum_r y_r (a_r x - b_r) < 0.
  std::vector<double> farkas;
  std::size_t iterations = 0;
};

/// Two-phase dense tableau simplex with Bland's rule.
/// Throws ArgumentError on non-finite input and ResourceError when the
/// iteration limit is hit.
LPSolution solve_lp(const LinearProgram& lp, const Tolerances& tol = {});

/// max_r |violation| of rows and bounds at x.
double primal_residual(const LinearProgram& lp, const std::vector<double>& x);

/// Lagrangian bound from the dual vector; -inf/+inf when the box makes it
/// unbounded. Equals objective_value at an optimal basis.
double dual_objective(const LinearProgram& lp, const std::vector<double>& dual);

/// Largest violation of the dual sign conditions.
double dual_sign_violation(const LinearProgram& lp, const std::vector<double>& dual);

/// Checks a Farkas certificate in the form documented on LPSolution.
bool verify_farkas(const LinearProgram& lp, const std::vector<double>& y, double tol = 1e-9);

std::string to_string(Status status);

}  // namespace cforge::lp
