#pragma once

#include <cstddef>
#include <vector>

#include "cforge/lp.hpp"
#include "cforge/model.hpp"

namespace cforge {

enum class Implementability { Implementable, NotImplementable };

struct MinPaymentResult {
  std::size_t action = 0;
  double expected_payment = 0.0;  // +inf when NotImplementable
  SparseContract contract;
  Implementability status = Implementability::Implementable;
};

struct OptContractResult {
  double payoff = 0.0;
  std::size_t action = 0;
  Contract contract = SparseContract{};
  /// R_i - OPT_i per action (-inf where not implementable). Empty for
  /// solvers that do not compute every action exactly.
  std::vector<double> action_payoffs;
};

/// Cheapest contract (delta-)incentivizing `action`.
///
/// delta = 0 solves the IC program; delta > 0 with Multiplicative solves
/// (1+delta) p_i - c_i >= p_k - c_k, with Additive p_i - c_i + delta >= p_k - c_k.
/// Outcomes that `action` never produces carry no payment, which loses nothing.
MinPaymentResult min_payment(const ExplicitSetting& setting, std::size_t action, double delta = 0.0,
                             ICNotion notion = ICNotion::Multiplicative,
                             const lp::Tolerances& tol = {});

/// Enumerates the product setting first (m <= 20).
MinPaymentResult min_payment(const ProductSetting& setting, std::size_t action, double delta = 0.0,
                             ICNotion notion = ICNotion::Multiplicative,
                             const lp::Tolerances& tol = {});

/// Best action by R_i - OPT_i; ties within 1e-9 go to the lowest index.
OptContractResult opt_contract(const ExplicitSetting& setting, double delta = 0.0,
                               ICNotion notion = ICNotion::Multiplicative,
                               const lp::Tolerances& tol = {});
OptContractResult opt_contract(const ProductSetting& setting, double delta = 0.0,
                               ICNotion notion = ICNotion::Multiplicative,
                               const lp::Tolerances& tol = {});
OptContractResult opt_contract(const Setting& setting, double delta = 0.0,
                               ICNotion notion = ICNotion::Multiplicative,
                               const lp::Tolerances& tol = {});

/// max_i (R_i - c_i).
double first_best(const Setting& setting);
double first_best(const ProductSetting& setting);
double first_best(const ExplicitSetting& setting);

}  // namespace cforge
