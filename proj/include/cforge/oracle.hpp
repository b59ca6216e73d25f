#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cforge/model.hpp"

namespace cforge {

/// Minimize (sum_k w_k q_{k,S}) / q_{ref,S} over outcomes S with q_{ref,S} > 0.
struct SeparationInstance {
  std::vector<double> weights;                 // sum to 1
  std::vector<std::vector<double>> mixtures;   // one product distribution per weight
  std::vector<double> reference;

  std::size_t num_items() const { return reference.size(); }
  /// Throws ArgumentError when malformed.
  void validate() const;
};

struct OracleResult {
  Outcome outcome;
  double ratio = 0.0;
};

/// Diagnostics from one FPTAS run.
struct FptasStats {
  std::vector<std::size_t> families;  // family count after each item
  std::size_t max_families = 0;
  double t = 0.0;             // ceil(2 m^2 log2(1/q_min) / eps)
  std::size_t dimensions = 0; // distributions used for bucketing
  double family_bound = 0.0;  // t^dimensions
};

/// Likelihood ratio at S; +inf when the reference gives S probability 0.
double likelihood_ratio(const SeparationInstance& inst, Outcome s);

/// Exact minimizer by enumeration; ties to the lowest bit-set.
OracleResult min_ratio_bruteforce(const SeparationInstance& inst,
                                  std::size_t max_items = kMaxEnumerableItems);

/// Bucketing FPTAS: ratio <= (1+eps) * optimum.
///
/// Partial solutions over the first j items are grouped by the bucket
/// floor(-log q / log D), D = (1+eps)^(1/2m), of their marginal under every
/// distribution; probability 0 has its own bucket. Each family keeps its
/// first-inserted member, which spawns the child without item j and then the
/// child with it.
OracleResult min_ratio_fptas(const SeparationInstance& inst, double eps, FptasStats* stats = nullptr);

}  // namespace cforge
