#include "cforge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cforge/model.hpp"

namespace cforge::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Standard-form row built from an original constraint or an upper bound.
struct StdRow {
  std::vector<double> a;
  Relation rel;
  double b;
  double flip = 1.0;   // sigma: +1 or -1
  double scale = 1.0;  // rho
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), a_(rows * (cols + 1), 0.0), obj_(cols + 1, 0.0), basis_(rows, 0) {}

  double& at(std::size_t i, std::size_t j) { return a_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return a_[i * (n_ + 1) + j]; }
  double& rhs(std::size_t i) { return at(i, n_); }
  double rhs(std::size_t i) const { return at(i, n_); }
  double& obj(std::size_t j) { return obj_[j]; }
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    double* pr = &a_[r * (n_ + 1)];
    const double inv = 1.0 / pr[c];
    for (std::size_t j = 0; j <= n_; ++j) pr[j] *= inv;
    pr[c] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* pi = &a_[i * (n_ + 1)];
      const double f = pi[c];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) pi[j] -= f * pr[j];
      pi[c] = 0.0;
      if (pi[n_] < 0.0 && pi[n_] > -1e-12) pi[n_] = 0.0;
    }
    const double f = obj_[c];
    if (f != 0.0) {
      for (std::size_t j = 0; j <= n_; ++j) obj_[j] -= f * pr[j];
      obj_[c] = 0.0;
    }
    basis_[r] = c;
  }

  // Sets the objective row to cost c (size n_) priced out against the basis.
  void set_objective(const std::vector<double>& c) {
    std::fill(obj_.begin(), obj_.end(), 0.0);
    std::copy(c.begin(), c.end(), obj_.begin());
    for (std::size_t i = 0; i < m_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) obj_[j] -= cb * at(i, j);
    }
  }

  double objective() const { return -obj_[n_]; }

 private:
  std::size_t m_, n_;
  std::vector<double> a_;
  std::vector<double> obj_;
  std::vector<std::size_t> basis_;
};

enum class RunResult { Optimal, Unbounded };

// Bland's rule primal simplex over columns with allowed[j].
RunResult run_simplex(Tableau& t, const std::vector<char>& allowed, const Tolerances& tol,
                    std::size_t& iterations) {
  const std::size_t n = t.cols();
  const std::size_t m = t.rows();
  while (true) {
    std::size_t enter = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (allowed[j] && t.obj(j) < -tol.optimality) {
        enter = j;
        break;
      }
    }
    if (enter == n) return RunResult::Optimal;
    if (++iterations > tol.max_iterations) {
      std::ostringstream os;
      os << "simplex iteration limit " << tol.max_iterations << " reached (" << m << " rows, " << n
         << " columns)";
      throw ResourceError(os.str());
    }
    std::size_t leave = m;
    double best = kInf;
    for (std::size_t i = 0; i < m; ++i) {
      const double piv = t.at(i, enter);
      if (piv <= tol.pivot) continue;
      const double ratio = std::max(t.rhs(i), 0.0) / piv;
      const double slack = 1e-12 * (1.0 + std::abs(best));
      if (leave == m || ratio < best - slack) {
        best = ratio;
        leave = i;
      } else if (ratio <= best + slack && t.basis()[i] < t.basis()[leave]) {
        leave = i;
      }
    }
    if (leave == m) return RunResult::Unbounded;
    t.pivot(leave, enter);
  }
}

void check_input(const LinearProgram& lp) {
  const std::size_t n = lp.num_vars();
  auto finite = [](double x) { return std::isfinite(x); };
  for (double c : lp.objective) {
    if (!finite(c)) throw ArgumentError("LP objective has a non-finite coefficient");
  }
  if (!lp.lower.empty() && lp.lower.size() != n) throw ArgumentError("LP lower bounds have wrong length");
  if (!lp.upper.empty() && lp.upper.size() != n) throw ArgumentError("LP upper bounds have wrong length");
  for (double l : lp.lower) {
    if (!finite(l)) throw ArgumentError("LP lower bound is not finite");
  }
  for (const auto& u : lp.upper) {
    if (u && !finite(*u)) throw ArgumentError("LP upper bound is not finite (omit it instead)");
  }
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const auto& row = lp.constraints[r];
    if (row.coeffs.size() != n) {
      throw ArgumentError("LP row " + std::to_string(r) + " has " + std::to_string(row.coeffs.size()) +
                          " coefficients, expected " + std::to_string(n));
    }
    for (double a : row.coeffs) {
      if (!finite(a)) throw ArgumentError("LP row " + std::to_string(r) + " has a non-finite coefficient");
    }
    if (!finite(row.rhs)) throw ArgumentError("LP row " + std::to_string(r) + " has a non-finite rhs");
  }
}

LPSolution solve_once(const LinearProgram& lp, const Tolerances& tol) {
  const std::size_t n = lp.num_vars();
  const double sense_sign = lp.sense == Sense::Minimize ? 1.0 : -1.0;

  // Shift x = l + x', then build rows over x' >= 0.
  std::vector<double> lo(n);
  for (std::size_t j = 0; j < n; ++j) lo[j] = lp.lower_bound(j);

  std::vector<StdRow> rows;
  rows.reserve(lp.num_rows() + n);
  for (const auto& c : lp.constraints) {
    double b = c.rhs;
    for (std::size_t j = 0; j < n; ++j) b -= c.coeffs[j] * lo[j];
    rows.push_back({c.coeffs, c.relation, b});
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (auto u = lp.upper_bound(j)) {
      std::vector<double> e(n, 0.0);
      e[j] = 1.0;
      rows.push_back({std::move(e), Relation::LessEq, *u - lo[j]});
    }
  }
  const std::size_t m = rows.size();

  // Equilibrate rows, then columns.
  std::vector<double> col_scale(n, 1.0);
  if (tol.scaling) {
    for (auto& row : rows) {
      double big = 0.0;
      for (double a : row.a) big = std::max(big, std::abs(a));
      if (big > 0.0) {
        row.scale = 1.0 / big;
        for (double& a : row.a) a *= row.scale;
        row.b *= row.scale;
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      double big = 0.0;
      for (const auto& row : rows) big = std::max(big, std::abs(row.a[j]));
      if (big > 0.0) {
        col_scale[j] = 1.0 / big;
        for (auto& row : rows) row.a[j] *= col_scale[j];
      }
    }
  }
  for (auto& row : rows) {
    if (row.b < 0.0) {
      row.flip = -1.0;
      for (double& a : row.a) a = -a;
      row.b = -row.b;
      if (row.rel == Relation::LessEq) {
        row.rel = Relation::GreaterEq;
      } else if (row.rel == Relation::GreaterEq) {
        row.rel = Relation::LessEq;
      }
    }
  }

  // Columns: structural | slack/surplus | artificial.
  std::size_t num_slack = 0, num_art = 0;
  for (const auto& row : rows) {
    if (row.rel != Relation::Equal) ++num_slack;
    if (row.rel != Relation::LessEq) ++num_art;
  }
  const std::size_t cols = n + num_slack + num_art;
  Tableau t(m, cols);
  std::vector<std::size_t> identity(m);  // column that started as e_i
  std::vector<char> is_art(cols, 0);
  {
    std::size_t s = n, a = n + num_slack;
    for (std::size_t i = 0; i < m; ++i) {
      const auto& row = rows[i];
      for (std::size_t j = 0; j < n; ++j) t.at(i, j) = row.a[j];
      t.rhs(i) = row.b;
      if (row.rel == Relation::LessEq) {
        t.at(i, s) = 1.0;
        identity[i] = s++;
      } else {
        if (row.rel == Relation::GreaterEq) t.at(i, s++) = -1.0;
        t.at(i, a) = 1.0;
        is_art[a] = 1;
        identity[i] = a++;
      }
      t.basis()[i] = identity[i];
    }
  }

  LPSolution sol;
  std::size_t iters = 0;
  double bmax = 1.0;
  for (const auto& row : rows) bmax = std::max(bmax, row.b);

  if (num_art > 0) {
    std::vector<double> c1(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j) c1[j] = is_art[j] ? 1.0 : 0.0;
    t.set_objective(c1);
    std::vector<char> all(cols, 1);
    run_simplex(t, all, tol, iters);
    if (t.objective() > tol.phase1 * bmax) {
      sol.status = Status::Infeasible;
      sol.iterations = iters;
      sol.farkas.assign(lp.num_rows(), 0.0);
      for (std::size_t i = 0; i < lp.num_rows(); ++i) {
        const std::size_t id = identity[i];
        const double y1 = c1[id] - t.obj(id);
        sol.farkas[i] = y1 * rows[i].flip * rows[i].scale;
      }
      return sol;
    }
    // Drive zero-level artificials out of the basis where possible.
    for (std::size_t i = 0; i < m; ++i) {
      if (!is_art[t.basis()[i]]) continue;
      std::size_t best = cols;
      double big = tol.pivot;
      for (std::size_t j = 0; j < cols; ++j) {
        if (is_art[j]) continue;
        if (std::abs(t.at(i, j)) > big) {
          big = std::abs(t.at(i, j));
          best = j;
        }
      }
      if (best != cols) t.pivot(i, best);
    }
  }

  std::vector<double> c2(cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) c2[j] = sense_sign * lp.objective[j] * col_scale[j];
  t.set_objective(c2);
  std::vector<char> allowed(cols, 1);
  for (std::size_t j = 0; j < cols; ++j) allowed[j] = !is_art[j];
  const RunResult out = run_simplex(t, allowed, tol, iters);
  sol.iterations = iters;
  if (out == RunResult::Unbounded) {
    sol.status = Status::Unbounded;
    return sol;
  }

  sol.status = Status::Optimal;
  std::vector<double> xs(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) xs[t.basis()[i]] = std::max(t.rhs(i), 0.0);
  sol.primal.resize(n);
  for (std::size_t j = 0; j < n; ++j) sol.primal[j] = lo[j] + col_scale[j] * xs[j];
  // Snap values that drifted just past their bounds.
  for (std::size_t j = 0; j < n; ++j) {
    if (auto u = lp.upper_bound(j); u && sol.primal[j] > *u) sol.primal[j] = *u;
  }

  sol.dual.assign(lp.num_rows(), 0.0);
  for (std::size_t i = 0; i < lp.num_rows(); ++i) {
    const std::size_t id = identity[i];
    const double y2 = c2[id] - t.obj(id);
    sol.dual[i] = sense_sign * y2 * rows[i].flip * rows[i].scale;
  }
  sol.reduced_costs = lp.objective;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const double y = sol.dual[r];
    if (y == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) sol.reduced_costs[j] -= y * lp.constraints[r].coeffs[j];
  }
  double z = 0.0;
  for (std::size_t j = 0; j < n; ++j) z += lp.objective[j] * sol.primal[j];
  sol.objective_value = z;
  return sol;
}

}  // namespace

LPSolution solve_lp(const LinearProgram& lp, const Tolerances& tol) {
  check_input(lp);
  LPSolution sol = solve_once(lp, tol);
  if (sol.status != Status::Optimal) return sol;
  double scale = 1.0;
  for (const auto& c : lp.constraints) scale = std::max(scale, std::abs(c.rhs));
  if (primal_residual(lp, sol.primal) <= tol.feasibility * scale) return sol;
  // Scaling occasionally hurts on tiny, badly mixed rows; retry plain.
  if (tol.scaling) {
    Tolerances plain = tol;
    plain.scaling = false;
    LPSolution retry = solve_once(lp, plain);
    if (retry.status != Status::Optimal || primal_residual(lp, retry.primal) <= tol.feasibility * scale) {
      return retry;
    }
  }
  std::ostringstream os;
  os << "LP solution violates feasibility tolerance (residual " << primal_residual(lp, sol.primal) << ")";
  throw ResourceError(os.str());
}

double primal_residual(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    worst = std::max(worst, lp.lower_bound(j) - x[j]);
    if (auto u = lp.upper_bound(j)) worst = std::max(worst, x[j] - *u);
  }
  for (const auto& c : lp.constraints) {
    double ax = 0.0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) ax += c.coeffs[j] * x[j];
    const double d = ax - c.rhs;
    switch (c.relation) {
      case Relation::LessEq: worst = std::max(worst, d); break;
      case Relation::GreaterEq: worst = std::max(worst, -d); break;
      case Relation::Equal: worst = std::max(worst, std::abs(d)); break;
    }
  }
  return worst;
}

double dual_objective(const LinearProgram& lp, const std::vector<double>& dual) {
  const std::size_t n = lp.num_vars();
  std::vector<double> d = lp.objective;
  double val = 0.0;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    val += dual[r] * lp.constraints[r].rhs;
    for (std::size_t j = 0; j < n; ++j) d[j] -= dual[r] * lp.constraints[r].coeffs[j];
  }
  const bool minimize = lp.sense == Sense::Minimize;
  for (std::size_t j = 0; j < n; ++j) {
    // minimize picks the box point minimizing d_j x_j, maximize the opposite
    const double toward_upper = minimize ? -d[j] : d[j];
    if (toward_upper > 0.0) {
      auto u = lp.upper_bound(j);
      if (!u) return minimize ? -kInf : kInf;
      val += d[j] * *u;
    } else {
      val += d[j] * lp.lower_bound(j);
    }
  }
  return val;
}

double dual_sign_violation(const LinearProgram& lp, const std::vector<double>& dual) {
  const double s = lp.sense == Sense::Minimize ? 1.0 : -1.0;
  double worst = 0.0;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const double y = s * dual[r];
    switch (lp.constraints[r].relation) {
      case Relation::GreaterEq: worst = std::max(worst, -y); break;
      case Relation::LessEq: worst = std::max(worst, y); break;
      case Relation::Equal: break;
    }
  }
  return worst;
}

bool verify_farkas(const LinearProgram& lp, const std::vector<double>& y, double tol) {
  if (y.size() != lp.num_rows()) return false;
  double ymax = 0.0;
  for (double v : y) ymax = std::max(ymax, std::abs(v));
  if (ymax == 0.0) return false;
  const std::size_t n = lp.num_vars();
  std::vector<double> g(n, 0.0);
  double val = 0.0;
  for (std::size_t r = 0; r < lp.num_rows(); ++r) {
    const double yr = y[r] / ymax;
    const auto& c = lp.constraints[r];
    if (c.relation == Relation::GreaterEq && yr < -tol) return false;
    if (c.relation == Relation::LessEq && yr > tol) return false;
    val -= yr * c.rhs;
    for (std::size_t j = 0; j < n; ++j) g[j] += yr * c.coeffs[j];
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (g[j] > tol) {
      auto u = lp.upper_bound(j);
      if (!u) return false;
      val += g[j] * *u;
    } else {
      val += g[j] * lp.lower_bound(j);
    }
  }
  return val < -tol;
}

std::string to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
  }
  return "unknown";
}

}  // namespace cforge::lp
