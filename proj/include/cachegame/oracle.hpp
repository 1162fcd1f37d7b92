#pragma once

#include <span>
#include <string>

#include "cachegame/leader.hpp"
#include "cachegame/model.hpp"

namespace cachegame {

/// Brute-force verifiers. None of these call the closed forms they are
/// used to check.

struct OracleVerdict {
  bool passed = false;
  double worst_violation = 0.0;  // <= 0 implies passed
  std::string witness;           // violating point, empty when none
};

/// Golden-section maximization of the provider utility over
/// [0, search_bound], to absolute tolerance 1e-10 in the argument.
/// search_bound must be positive and should cover 1/price.
double numeric_best_response(double price, double j_m, double alpha,
                             double search_bound);

/// Argmax of the operator utility over a uniform price grid on the
/// feasible range shrunk by 1e-6 at both ends. Ties break toward the
/// smaller price. Requires grid_points >= 100.
double grid_argmax_price(const MarketConfig& config, int grid_points,
                         ParityConvention convention = ParityConvention::EvenBranch);

/// Unilateral-deviation check: for every provider m and every additive
/// deviation d, evaluates the utility at max(0, q[m] + d) holding the
/// others fixed. worst_violation is the largest utility gain found;
/// passed iff it does not exceed 1e-12.
OracleVerdict verify_ne(const MarketConfig& config, double price,
                        const QuantityProfile& profile,
                        std::span<const double> deviations);

}  // namespace cachegame
