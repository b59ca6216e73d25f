#include "cforge/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace cforge {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double product_prob(const std::vector<double>& q, Outcome s) {
  double p = 1.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    p *= s.contains(j) ? q[j] : 1.0 - q[j];
    if (p == 0.0) return 0.0;
  }
  return p;
}

bool better(double ratio, double best) { return ratio < best * (1.0 - 1e-12); }

}  // namespace

void SeparationInstance::validate() const {
  if (weights.empty()) throw ArgumentError("separation instance needs at least one mixture");
  if (weights.size() != mixtures.size()) throw ArgumentError("weights and mixtures differ in length");
  const std::size_t m = reference.size();
  if (m > 63) throw ArgumentError("at most 63 items are supported");
  double sum = 0.0;
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) throw ArgumentError("weights must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ArgumentError("weights must sum to 1");
  auto check = [&](const std::vector<double>& q) {
    if (q.size() != m) throw ArgumentError("all distributions need the same item count");
    for (double x : q) {
      if (!std::isfinite(x) || x < 0.0 || x > 1.0) throw ArgumentError("probabilities must lie in [0,1]");
    }
  };
  check(reference);
  for (const auto& q : mixtures) check(q);
}

double likelihood_ratio(const SeparationInstance& inst, Outcome s) {
  const double den = product_prob(inst.reference, s);
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  double num = 0.0;
  for (std::size_t k = 0; k < inst.weights.size(); ++k) {
    if (inst.weights[k] > 0.0) num += inst.weights[k] * product_prob(inst.mixtures[k], s);
  }
  return num / den;
}

OracleResult min_ratio_bruteforce(const SeparationInstance& inst, std::size_t max_items) {
  inst.validate();
  const std::size_t m = inst.num_items();
  if (m > max_items) {
    throw CapacityError("brute-force oracle limited to m <= " + std::to_string(max_items));
  }
  OracleResult best{Outcome(0), std::numeric_limits<double>::infinity()};
  bool found = false;
  const std::uint64_t count = std::uint64_t{1} << m;
  for (std::uint64_t b = 0; b < count; ++b) {
    const double r = likelihood_ratio(inst, Outcome(b));
    if (std::isinf(r)) continue;
    if (!found || better(r, best.ratio)) {
      best = {Outcome(b), r};
      found = true;
    }
  }
  if (!found) throw InstanceError("reference distribution gives every outcome probability 0");
  return best;
}

OracleResult min_ratio_fptas(const SeparationInstance& inst, double eps, FptasStats* stats) {
  inst.validate();
  if (!(eps > 0.0 && eps <= 1.0)) throw ArgumentError("eps must lie in (0,1]");
  const std::size_t m = inst.num_items();

  // Distributions that matter: mixtures with positive weight, then the reference.
  std::vector<const std::vector<double>*> dists;
  std::vector<double> w;
  for (std::size_t k = 0; k < inst.weights.size(); ++k) {
    if (inst.weights[k] > 0.0) {
      dists.push_back(&inst.mixtures[k]);
      w.push_back(inst.weights[k]);
    }
  }
  dists.push_back(&inst.reference);
  const std::size_t d = dists.size();
  const std::size_t ref = d - 1;

  const double log_delta = m == 0 ? 1.0 : std::log1p(eps) / (2.0 * static_cast<double>(m));

  struct Partial {
    std::uint64_t bits;
    std::vector<double> logq;  // log marginal per distribution
  };
  auto key_of = [&](const Partial& p) {
    std::vector<std::int64_t> key(d);
    for (std::size_t l = 0; l < d; ++l) {
      key[l] = p.logq[l] == kNegInf ? -1 : static_cast<std::int64_t>(std::floor(-p.logq[l] / log_delta));
    }
    return key;
  };

  std::vector<Partial> reps{{0, std::vector<double>(d, 0.0)}};
  std::vector<Partial> finals;
  if (stats) {
    *stats = {};
    double qmin = 1.0;
    for (const auto* q : dists) {
      for (double x : *q) {
        if (x > 0.0) qmin = std::min(qmin, x);
        if (x < 1.0) qmin = std::min(qmin, 1.0 - x);
      }
    }
    const double md = static_cast<double>(m);
    stats->t = std::max(1.0, std::ceil(2.0 * md * md * std::log2(1.0 / qmin) / eps));
    stats->dimensions = d;
    stats->family_bound = std::pow(stats->t, static_cast<double>(d));
  }

  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Partial> children;
    children.reserve(2 * reps.size());
    for (const auto& p : reps) {
      Partial without{p.bits, p.logq};
      Partial with{p.bits | (std::uint64_t{1} << j), p.logq};
      for (std::size_t l = 0; l < d; ++l) {
        const double q = (*dists[l])[j];
        without.logq[l] += q < 1.0 ? std::log1p(-q) : kNegInf;
        with.logq[l] += q > 0.0 ? std::log(q) : kNegInf;
      }
      children.push_back(std::move(without));
      children.push_back(std::move(with));
    }
    if (j + 1 == m) {
      finals = std::move(children);
      break;
    }
    std::map<std::vector<std::int64_t>, std::size_t> seen;
    std::vector<Partial> next;
    for (auto& c : children) {
      if (seen.emplace(key_of(c), next.size()).second) next.push_back(std::move(c));
    }
    reps = std::move(next);
    if (stats) {
      stats->families.push_back(reps.size());
      stats->max_families = std::max(stats->max_families, reps.size());
    }
  }
  if (m == 0) finals = reps;
  if (stats && m > 0) {
    // the last iteration's solutions are all evaluated; count their families too
    std::map<std::vector<std::int64_t>, std::size_t> seen;
    for (const auto& c : finals) seen.emplace(key_of(c), 0);
    stats->families.push_back(seen.size());
    stats->max_families = std::max(stats->max_families, seen.size());
  }

  OracleResult best{Outcome(0), std::numeric_limits<double>::infinity()};
  bool found = false;
  for (const auto& p : finals) {
    if (p.logq[ref] == kNegInf) continue;
    double r = 0.0;
    for (std::size_t l = 0; l < ref; ++l) {
      if (p.logq[l] != kNegInf) r += w[l] * std::exp(p.logq[l] - p.logq[ref]);
    }
    if (!found || better(r, best.ratio) || (!better(best.ratio, r) && p.bits < best.outcome.bits())) {
      best = {Outcome(p.bits), r};
      found = true;
    }
  }
  if (!found) throw InstanceError("reference distribution gives every outcome probability 0");
  best.ratio = likelihood_ratio(inst, best.outcome);
  return best;
}

}  // namespace cforge
