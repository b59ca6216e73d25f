#include "cforge/delta_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "cforge/oracle.hpp"

namespace cforge {

DeltaMethod parse_method(const std::string& text) {
  if (text == "cuts") return DeltaMethod::Cuts;
  if (text == "ellipsoid") return DeltaMethod::Ellipsoid;
  throw ArgumentError("unknown method '" + text + "' (expected cuts|ellipsoid)");
}

namespace {

enum class Verdict { Feasible, Infeasible };

struct Restricted {
  double value = 0.0;
  std::vector<double> lambda;
  std::vector<double> primal;  // base, then one entry per pool outcome
};

class Search {
 public:
  Search(const ProductSetting& setting, std::size_t action, double delta, double scale,
         const DeltaOptions& opt, DeltaSolveResult& out)
      : s_(setting), i_(action), delta_(delta), scale_(scale), opt_(opt), out_(out) {
    for (std::size_t k = 0; k < s_.num_actions(); ++k) {
      if (k == i_) continue;
      others_.push_back(k);
      cdiff_.push_back((s_.cost(i_) - s_.cost(k)) / scale_);
    }
    inst_.reference = s_.probs()[i_];
    for (std::size_t k : others_) inst_.mixtures.push_back(s_.probs()[k]);
    inst_.weights.assign(others_.size(), 0.0);
  }

  const std::vector<double>& cdiff() const { return cdiff_; }

  Restricted solve() {
    const std::size_t cols = 1 + pool_.size();
    lp::LinearProgram prog;
    prog.sense = lp::Sense::Minimize;
    prog.objective.assign(cols, 1.0 + delta_);
    for (std::size_t r = 0; r < others_.size(); ++r) {
      std::vector<double> row(cols);
      row[0] = delta_;
      for (std::size_t c = 0; c < pool_.size(); ++c) row[c + 1] = (1.0 + delta_) - rho_[c][r];
      prog.add(std::move(row), lp::Relation::GreaterEq, cdiff_[r]);
    }
    const lp::LPSolution sol = lp::solve_lp(prog, opt_.lp_tol);
    ++out_.lp_solves;
    if (sol.status != lp::Status::Optimal) {
      // the base column keeps this program feasible and bounded
      throw ResourceError("restricted program reported " + lp::to_string(sol.status));
    }
    Restricted res;
    res.value = sol.objective_value;
    res.primal = sol.primal;
    res.lambda = sol.dual;
    for (double& l : res.lambda) l = std::max(l, 0.0);
    return res;
  }

  // Most violated relaxed dual constraint the FPTAS can certify, if new.
  std::optional<std::pair<Outcome, double>> separate(const std::vector<double>& lambda) {
    double sum = 0.0;
    for (double l : lambda) sum += l;
    if (sum <= 1.0) return std::nullopt;
    for (std::size_t r = 0; r < lambda.size(); ++r) inst_.weights[r] = lambda[r] / sum;
    const OracleResult found = min_ratio_fptas(inst_, std::min(delta_, 1.0));
    const double violation = (1.0 + delta_) * (sum - 1.0) - sum * found.ratio;
    if (violation <= 1e-10 * std::max(1.0, sum)) return std::nullopt;
    if (in_pool_.count(found.outcome.bits())) return std::nullopt;
    return std::make_pair(found.outcome, found.ratio);
  }

  void add(Outcome s) {
    if (!in_pool_.insert(s.bits()).second) return;
    const double qi = outcome_probability(s_, i_, s);
    std::vector<double> ratios;
    for (std::size_t k : others_) ratios.push_back(outcome_probability(s_, k, s) / qi);
    pool_.push_back(s);
    qi_.push_back(qi);
    rho_.push_back(std::move(ratios));
    if (pool_.size() > opt_.max_cuts) {
      throw ResourceError("delta solver exceeded " + std::to_string(opt_.max_cuts) + " cuts");
    }
  }

  Verdict decide(double gamma) {
    ++out_.decisions;
    if (opt_.method == DeltaMethod::Ellipsoid) ellipsoid(gamma);
    while (true) {
      Restricted r = solve();
      if (r.value < gamma) {
        emit(gamma, r, std::nullopt, 0.0, "infeasible");
        return Verdict::Infeasible;
      }
      auto cut = separate(r.lambda);
      if (!cut) {
        emit(gamma, r, std::nullopt, 0.0, "feasible");
        out_.accepted_duals.push_back(r.lambda);
        return Verdict::Feasible;
      }
      emit(gamma, r, cut->first, cut->second, "cut");
      add(cut->first);
    }
  }

  const std::vector<Outcome>& pool() const { return pool_; }
  const std::vector<double>& pool_probs() const { return qi_; }

 private:
  void emit(double gamma, const Restricted& r, std::optional<Outcome> cut, double ratio,
            const char* event) {
    if (!opt_.trace) return;
    TraceRow row;
    row.action = i_;
    row.step = step_++;
    row.gamma = gamma;
    row.value = r.value;
    for (double l : r.lambda) row.lambda_sum += l;
    row.cut = cut;
    row.cut_ratio = ratio;
    row.event = event;
    row.lambda = r.lambda;
    opt_.trace(row);
  }

  // Central-cut ellipsoid over lambda for {dual objective >= gamma} intersected
  // with the strengthened dual; every oracle cut it meets joins the pool.
  void ellipsoid(double gamma) {
    const std::size_t d = others_.size();
    const double cap = (1.0 + delta_) / delta_;
    std::vector<double> c(d, cap / 2.0);
    std::vector<double> P(d * d, 0.0);
    for (std::size_t k = 0; k < d; ++k) P[k * d + k] = cap * cap * static_cast<double>(d);
    const std::size_t iters =
        opt_.ellipsoid_iterations ? opt_.ellipsoid_iterations : 50 * d * d + 200;
    std::vector<double> a(d), g(d);
    for (std::size_t it = 0; it < iters; ++it) {
      bool have = false;
      double sum = 0.0, obj = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        sum += c[k];
        obj += c[k] * cdiff_[k];
      }
      for (std::size_t k = 0; k < d && !have; ++k) {
        if (c[k] < 0.0) {
          std::fill(a.begin(), a.end(), 0.0);
          a[k] = -1.0;
          have = true;
        }
      }
      if (!have && delta_ * sum > 1.0 + delta_) {
        std::fill(a.begin(), a.end(), 1.0);
        have = true;
      }
      if (!have && obj < gamma) {
        for (std::size_t k = 0; k < d; ++k) a[k] = -cdiff_[k];
        have = true;
      }
      if (!have && sum > 1.0) {
        for (std::size_t k = 0; k < d; ++k) inst_.weights[k] = c[k] / sum;
        const OracleResult found = min_ratio_fptas(inst_, std::min(delta_, 1.0));
        if ((1.0 + delta_) * (sum - 1.0) - sum * found.ratio > 0.0) {
          const bool fresh = !in_pool_.count(found.outcome.bits());
          add(found.outcome);
          const std::size_t idx =
              std::find(pool_.begin(), pool_.end(), found.outcome) - pool_.begin();
          for (std::size_t k = 0; k < d; ++k) a[k] = (1.0 + delta_) - rho_[idx][k];
          have = true;
          if (fresh && opt_.trace) {
            Restricted r;
            r.value = obj;
            r.lambda = c;
            emit(gamma, r, found.outcome, found.ratio, "ellipsoid-cut");
          }
        }
      }
      if (!have) return;  // center is feasible for the strengthened dual
      // g = P a / sqrt(a' P a)
      double aPa = 0.0;
      for (std::size_t r = 0; r < d; ++r) {
        g[r] = 0.0;
        for (std::size_t k = 0; k < d; ++k) g[r] += P[r * d + k] * a[k];
        aPa += a[r] * g[r];
      }
      if (!(aPa > 1e-300)) return;
      const double root = std::sqrt(aPa);
      for (double& x : g) x /= root;
      if (d == 1) {
        c[0] -= g[0] / 2.0;
        P[0] /= 4.0;
        continue;
      }
      const double dd = static_cast<double>(d);
      for (std::size_t k = 0; k < d; ++k) c[k] -= g[k] / (dd + 1.0);
      const double f = dd * dd / (dd * dd - 1.0);
      for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t k = 0; k < d; ++k) {
          P[r * d + k] = f * (P[r * d + k] - 2.0 / (dd + 1.0) * g[r] * g[k]);
        }
      }
    }
  }

  const ProductSetting& s_;
  std::size_t i_;
  double delta_;
  double scale_;
  const DeltaOptions& opt_;
  DeltaSolveResult& out_;
  std::vector<std::size_t> others_;
  std::vector<double> cdiff_;
  SeparationInstance inst_;
  std::vector<Outcome> pool_;
  std::vector<double> qi_;
  std::vector<std::vector<double>> rho_;
  std::set<std::uint64_t> in_pool_;
  std::size_t step_ = 0;
};

}  // namespace

DeltaSolveResult min_payment_delta(const ProductSetting& setting, std::size_t action, double delta,
                                   const DeltaOptions& options) {
  const std::size_t n = setting.num_actions();
  if (action >= n) throw ArgumentError("action index out of range");
  if (!(std::isfinite(delta) && delta > 0.0)) throw ArgumentError("delta must be > 0");
  if (n > kMaxDeltaActions) {
    throw CapacityError("delta solver supports at most " + std::to_string(kMaxDeltaActions) +
                        " actions (got " + std::to_string(n) + ")");
  }
  DeltaSolveResult out;
  out.action = action;
  double scale = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    scale = std::max({scale, setting.expected_reward(k), setting.cost(k)});
  }
  const double r_i = setting.expected_reward(action);
  out.eps_search = options.eps_search > 0.0 ? options.eps_search : 1e-6 * std::max(r_i, 1e-12 * scale);
  if (n == 1 || scale == 0.0) return out;
  out.scale = scale;

  Search search(setting, action, delta, scale, options, out);
  const double eps = out.eps_search / scale;
  double lo = 0.0;
  for (double d : search.cdiff()) lo = std::max(lo, d);
  double hi = std::max(r_i / scale, lo + eps);
  std::size_t doublings = 0;
  while (search.decide(hi) == Verdict::Feasible) {
    lo = hi;
    hi *= 2.0;
    if (++doublings > options.max_doublings) {
      throw ResourceError("binary search upper bound did not converge");
    }
  }
  while (hi - lo > eps) {
    const double mid = 0.5 * (lo + hi);
    if (search.decide(mid) == Verdict::Feasible) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  out.gamma_star = lo * scale;

  // Read the contract off the final pool.
  Search& final_search = search;
  const Restricted r = final_search.solve();
  const auto& pool = final_search.pool();
  const auto& qi = final_search.pool_probs();
  std::map<Outcome, double> pay;
  for (std::size_t c = 0; c < pool.size(); ++c) {
    const double t = r.primal[c + 1];
    if (t > 0.0) pay.emplace(pool[c], t / qi[c] * scale);
  }
  out.contract = make_sparse(std::max(r.primal[0], 0.0) * scale, std::move(pay));
  out.cut_outcomes = pool;

  const Setting view = setting;
  const double slack = ic_slack(view, out.contract, action, delta, ICNotion::Multiplicative);
  if (slack < 0.0) {
    out.base_lift = -slack / delta * (1.0 + 1e-9);
    out.contract.base += out.base_lift;
  }
  out.expected_payment = expected_payment(setting, action, out.contract);
  return out;
}

OptContractResult opt_contract_delta(const ProductSetting& setting, double delta,
                                     const DeltaOptions& options,
                                     std::vector<DeltaSolveResult>* per_action) {
  const std::size_t n = setting.num_actions();
  OptContractResult best;
  best.action_payoffs.assign(n, 0.0);
  if (per_action) per_action->clear();
  const double tie = 1e-9 * magnitude(setting);
  for (std::size_t i = 0; i < n; ++i) {
    DeltaSolveResult res = min_payment_delta(setting, i, delta, options);
    const double payoff = setting.expected_reward(i) - res.expected_payment;
    best.action_payoffs[i] = payoff;
    if (i == 0 || payoff > best.payoff + tie) {
      best.payoff = payoff;
      best.action = i;
      best.contract = res.contract;
    }
    if (per_action) per_action->push_back(std::move(res));
  }
  return best;
}

}  // namespace cforge
