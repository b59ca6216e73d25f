#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cforge/dimacs.hpp"
#include "cforge/model.hpp"
#include "cforge/oracle.hpp"

namespace cforge {

/// Single-item gap setting with c actions: action i (1-based) produces the
/// item with probability gamma^{c-i} at cost 1/gamma^{i-1} - i + (i-1) gamma;
/// the item is worth 1/gamma^{c-1}. c >= 2, gamma in (0, 1/4].
ProductSetting gen_gap(int c, double gamma);

/// One action per clause, one item per variable: 0 for a positive literal,
/// 1 for a negative one, 1/2 otherwise. Costs and rewards are 0.
ProductSetting gen_sat(const CNF& formula);

/// SAT block over a two-action gap setting: n+1 actions, m+1 items.
ProductSetting gen_product2(const CNF& formula, double epsilon);

/// c copies of the SAT block over a c-action gap setting: cn+1 actions, m+1 items.
ProductSetting gen_productc(const CNF& formula, int c, double epsilon);

/// Outcome S* = {true variables} + gap item; paying c_last 2^m on it extracts
/// the full welfare of the product setting when `assignment` satisfies it.
SparseContract satisfying_contract(const ProductSetting& product, std::uint64_t assignment);

struct MinMaxInstance {
  ProductSetting setting;
  double ell = 0.0;    // prod_j 1/(a_j+1)
  double A = 0.0;      // sqrt(prod_j a_j)
  double Delta = 0.0;  // 1 - ell A 2^{m-1}
  double reward = 0.0; // 2 / Delta, on item 0 only
  double cost = 0.0;   // 1/(a_max+1), action 3
};

/// Three-action setting from a MIN-MAX-PROB instance. Every a_j >= 3.
MinMaxInstance gen_minmax(const std::vector<long long>& a);

struct A3Instance {
  ProductSetting setting;
  double M = 0.0;            // eps / delta
  double opt = 0.0;          // eps
  double delta_payoff = 0.0; // 4 eps / 3
  SparseContract delta_contract;  // pays M - eps/3 on {item 1}
};

/// Two actions, two items; delta-IC contracts earn 4/3 of the IC optimum.
A3Instance gen_appendixA3(double epsilon, double delta);

struct FInstance {
  ProductSetting setting;
  double R1 = 0.0;                // 1
  double R2 = 0.0;                // 1/delta - 1 + delta
  double opt = 0.0;               // R2 - c2/(1-delta^2)
  double separable = 0.0;         // 1
  SparseContract opt_contract;    // 4 c2/(1-delta^2) on outcome (1,0)
};

/// Two actions, two items; separable contracts lose a factor close to 2.
FInstance gen_appendixF(double delta);

/// delta at which the optimum-to-separable ratio of gen_appendixF equals 2 - eps.
double appendixF_delta_for_ratio(double eps);

/// Uniform q_{i,j} in [0,1]; rewards scaled so max R_i = 1; c_1 = 0 and
/// c_i uniform in [0, max(0, R_i - 0.01)].
ProductSetting gen_random(std::size_t n, std::size_t m, std::uint64_t seed);

/// Same recipe with q_{i,j} uniform in [lo, hi].
ProductSetting gen_random(std::size_t n, std::size_t m, std::uint64_t seed, double lo, double hi);

/// Random explicit setting over K outcomes; each entry is zero with
/// probability zero_fraction (at least one positive entry per row).
ExplicitSetting gen_random_explicit(std::size_t n, std::size_t k, std::uint64_t seed,
                                    double zero_fraction = 0.0);

/// Random separation instance with n-1 mixtures and entries in [lo, hi].
SeparationInstance gen_random_separation(std::size_t n, std::size_t m, std::uint64_t seed, double lo,
                                         double hi);

/// FNV-1a (64-bit) over the little-endian bytes of n, m, costs, rewards, probs.
std::uint64_t digest(const ProductSetting& setting);
std::string digest_hex(const ProductSetting& setting);

}  // namespace cforge
