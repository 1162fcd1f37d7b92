#include "cachegame/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"

namespace cachegame {

double numeric_best_response(double price, double j_m, double alpha,
                             double search_bound) {
  if (!(search_bound > 0.0))
    throw DomainError("numeric_best_response: search_bound must be > 0");
  const auto utility = [&](double q) { return cp_utility(price, q, j_m, alpha); };

  constexpr double kInvPhi = 0.6180339887498949;  // 1/phi
  constexpr double kTol = 1e-10;
  double lo = 0.0;
  double hi = search_bound;
  double x1 = hi - kInvPhi * (hi - lo);
  double x2 = lo + kInvPhi * (hi - lo);
  double f1 = utility(x1);
  double f2 = utility(x2);
  while (hi - lo > kTol) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + kInvPhi * (hi - lo);
      f2 = utility(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - kInvPhi * (hi - lo);
      f1 = utility(x1);
    }
  }
  const double bracket = 0.5 * (lo + hi);

  // Near the flat top, utility differences fall below rounding noise at a
  // distance of about sqrt(eps)/price from the maximizer, which the
  // bracketing alone cannot beat. One three-point parabolic vertex over a
  // wider spacing recovers the remaining digits.
  const double h = 1e-4;
  if (bracket < h || bracket + h > search_bound) return bracket;
  const double f_minus = utility(bracket - h);
  const double f_center = utility(bracket);
  const double f_plus = utility(bracket + h);
  const double curvature = f_minus - 2.0 * f_center + f_plus;
  if (!(curvature < 0.0)) return bracket;
  const double vertex = bracket + 0.5 * h * (f_minus - f_plus) / curvature;
  if (!(vertex >= 0.0 && vertex <= search_bound)) return bracket;
  return vertex;
}

double grid_argmax_price(const MarketConfig& config, int grid_points,
                         ParityConvention convention) {
  if (grid_points < 100)
    throw DomainError("grid_argmax_price: need at least 100 grid points");
  ensure_valid(config);

  const RtCoefficients rt = rt_coefficients(config, convention);
  const double s = config.total_capacity();
  constexpr double kShrink = 1e-6;
  const double lo = rt.r / (s + rt.r) + kShrink;
  const double hi = 1.0 - kShrink;
  const double step = (hi - lo) / static_cast<double>(grid_points - 1);

  double best_price = lo;
  double best_value = mno_utility_at(lo, rt, s);
  for (int i = 1; i < grid_points; ++i) {
    const double price = lo + step * static_cast<double>(i);
    const double value = mno_utility_at(price, rt, s);
    if (value > best_value) {  // ties keep the smaller price
      best_value = value;
      best_price = price;
    }
  }
  return best_price;
}

OracleVerdict verify_ne(const MarketConfig& config, double price,
                        const QuantityProfile& profile,
                        std::span<const double> deviations) {
  ensure_valid(config);
  if (profile.q.size() != config.cp_count())
    throw DomainError("verify_ne: profile size does not match the market");
  for (double v : profile.q) {
    if (v < 0.0) throw DomainError("verify_ne: quantities must be >= 0");
  }

  OracleVerdict verdict;
  verdict.worst_violation = -std::numeric_limits<double>::infinity();
  constexpr double kGainTol = 1e-12;

  for (std::size_t m = 0; m < profile.q.size(); ++m) {
    const double j_m = profile.others_total(m);
    const double alpha = config.cps[m].alpha;
    const double baseline = cp_utility(price, profile.q[m], j_m, alpha);
    for (double deviation : deviations) {
      const double q_dev = std::max(0.0, profile.q[m] + deviation);
      const double gain = cp_utility(price, q_dev, j_m, alpha) - baseline;
      if (gain > verdict.worst_violation) {
        verdict.worst_violation = gain;
        if (gain > kGainTol) {
          std::ostringstream witness;
          witness << "cps[" << m << "]: moving q from " << profile.q[m] << " to "
                  << q_dev << " gains " << gain;
          verdict.witness = witness.str();
        }
      }
    }
  }
  verdict.passed = verdict.worst_violation <= kGainTol;
  if (verdict.passed) verdict.witness.clear();
  return verdict;
}

}  // namespace cachegame
