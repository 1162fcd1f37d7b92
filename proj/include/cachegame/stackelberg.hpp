#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cachegame/follower.hpp"
#include "cachegame/leader.hpp"
#include "cachegame/model.hpp"

namespace cachegame {

struct SolveOptions {
  /// Run best-response dynamics at the optimal price and confirm they
  /// reach the linear-solve equilibrium.
  bool run_br_check = true;
  /// Initial profile for the dynamics; zeros when absent.
  std::optional<QuantityProfile> initial;
  double br_tol = 1e-9;
  int br_max_iter = 10000;
  /// Agreement required between the dynamics' fixed point and the
  /// linear solve before a diagnostic is raised.
  double br_match_tol = 1e-7;
  ParityConvention parity = ParityConvention::EvenBranch;
  /// Strict mode: clamp equilibrium requests to each provider's catalog
  /// size and flag the clamp. Off by default; the model itself does not
  /// bound q_m by the catalog.
  bool enforce_catalog_bound = false;
  /// Cross-check the closed-form equilibrium against the linear solve and
  /// report (never correct) any mismatch.
  bool compare_closed_form = true;
};

struct CapacityUsage {
  double d = 0.0;  // stored copies at equilibrium
  double s = 0.0;  // aggregate capacity
};

struct EquilibriumReport {
  PriceDecision price;
  QuantityProfile quantities;  // continuous + rounded
  std::vector<double> per_cp_utilities;
  double mno_utility = 0.0;
  CapacityUsage capacity_used;
  std::optional<BrTrace> br_trace;
  std::vector<std::string> diagnostics;
};

/// Full sequential game: optimal price, follower equilibrium recomputed at
/// that price, optional best-response confirmation, uncoded rounding, and
/// all utilities. The follower side is always re-solved at the optimal
/// price so the two modules cross-validate on every run.
///
/// Throws ConfigError (invalid market, no partial report), InfeasibleMarket,
/// or NonConvergence (with the trace attached) when the dynamics check is
/// enabled and fails to converge.
EquilibriumReport solve_stackelberg(const MarketConfig& config,
                                    const SolveOptions& options = {});

}  // namespace cachegame
