#pragma once

#include <cstddef>
#include <vector>

#include "cachegame/model.hpp"

namespace cachegame {

/// Provider satisfaction log(1 + q_m / (1 + J_m / alpha)). Zero at q_m = 0,
/// strictly increasing in q_m, strictly decreasing in J_m for q_m > 0.
double cp_revenue(double q_m, double j_m, double alpha);

/// Caching charge price * q_m.
double cp_cost(double price, double q_m);

/// Provider utility: cp_revenue - cp_cost. Strictly concave in q_m.
double cp_utility(double price, double q_m, double j_m, double alpha);

/// Unique utility-maximizing request max(0, 1/price - 1 - j_m/alpha).
double best_response(double price, double j_m, double alpha);

enum class UpdateSchedule {
  Simultaneous,  // all providers update from the previous round's profile
  Sequential,    // providers update in index order within a round
};

struct BrOptions {
  double tol = 1e-9;  // max-norm change considered converged
  int max_iter = 10000;
  UpdateSchedule schedule = UpdateSchedule::Simultaneous;
};

/// Record of a best-response iteration. iterations[0] is the initial
/// profile; residuals[i] is the max-norm change from step i-1 to i
/// (residuals[0] is +inf, no step has happened yet).
struct BrTrace {
  std::vector<QuantityProfile> iterations;
  std::vector<double> residuals;
  bool converged = false;
  double final_residual = 0.0;

  std::size_t steps() const { return iterations.size() - 1; }
};

/// Repeated best response of all providers at a fixed price. Never throws
/// on non-convergence: the returned trace carries the full history and
/// converged = false.
BrTrace br_dynamics(const MarketConfig& config, double price,
                    const QuantityProfile& initial, const BrOptions& options = {});

/// Equilibrium profile plus the indices of any components that came out
/// negative and were clamped to zero.
struct NeSolution {
  QuantityProfile profile;
  std::vector<std::size_t> clamped;
};

/// Solves the M x M best-response system directly (dense elimination with
/// partial pivoting): row m reads q_m + (1/alpha_m) * sum_{l != m} q_l =
/// 1/price - 1. This is the authoritative equilibrium of the library.
NeSolution solve_ne_linear(const MarketConfig& config, double price);

/// Closed-form equilibrium via the published per-provider determinant
/// ratios. Kept as a literal transcription for cross-checking against
/// solve_ne_linear; discrepancies are reported by callers, not corrected
/// here. Throws DomainError when any alpha equals 1.
QuantityProfile ne_closed_form(const MarketConfig& config, double price);

/// Uncoded caching: attach nearest-integer quantities (ties round half
/// away from zero). The continuous values are preserved alongside.
QuantityProfile round_uncoded(const QuantityProfile& profile);

/// Raised when an orchestrated solve requires best-response convergence
/// and the dynamics ran out of iterations. Carries the full trace.
class NonConvergence : public std::runtime_error {
 public:
  NonConvergence(std::string message, BrTrace trace);
  const BrTrace& trace() const { return trace_; }

 private:
  BrTrace trace_;
};

}  // namespace cachegame
