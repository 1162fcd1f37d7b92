#pragma once

#include <utility>

#include "cachegame/model.hpp"

namespace cachegame {

enum class Parity { Odd, Even };

/// How the copy-weight parity branch is picked when quantities are being
/// predicted (their parity is not yet known):
///   EvenBranch  - always p_mean + delta_p/2 (default),
///   OddBranch   - always p_mean,
///   FromRounded - parity of the rounded equilibrium quantities.
enum class ParityConvention { EvenBranch, OddBranch, FromRounded };

/// Mean stored-copy weight per cached file: p_mean when the request count
/// is odd, p_mean + delta_p/2 when even.
double f_pm(const CpParams& cp, Parity parity);

/// Total stored copies d = sum_m q_m * f(p_m). When the profile carries
/// rounded quantities their per-component parity selects the branch;
/// otherwise `convention` applies (FromRounded falls back to the even
/// branch if no rounded values exist).
double cached_copies(const QuantityProfile& profile, const MarketConfig& config,
                     ParityConvention convention = ParityConvention::EvenBranch);

/// Barrier storage cost 1/(S - d) for 0 < d < S, +inf otherwise
/// (including d = S and d <= 0). Infinite cost is a value, not an error.
double mno_cost(double total_capacity, double cached);

/// Operator revenue: price times total requested quantity.
double mno_revenue(double price, const QuantityProfile& profile);

/// Price-independent demand coefficients of the equilibrium:
/// t = sum_m q_m / (1/pi - 1) and r = sum_m q_m f(p_m) / (1/pi - 1),
/// both divided out of a solve at an arbitrary probe price.
struct RtCoefficients {
  double r = 0.0;
  double t = 0.0;
};

RtCoefficients rt_coefficients(const MarketConfig& config,
                               ParityConvention convention = ParityConvention::EvenBranch,
                               double probe_price = 0.5);

/// Operator utility at a price: (1 - pi) t - 1/(S - (1/pi - 1) r).
/// Returns -inf when the implied demand reaches capacity. Throws
/// DomainError for prices outside (0,1).
double mno_utility(double price, const MarketConfig& config,
                   ParityConvention convention = ParityConvention::EvenBranch);

/// Same utility from precomputed coefficients; the building block for
/// sweeps and grid searches.
double mno_utility_at(double price, const RtCoefficients& rt, double total_capacity);

/// The operator's optimal price with its feasibility metadata.
/// feasible range is (r/(S+r), 1); r and t are strictly positive for any
/// validated market.
struct PriceDecision {
  double price = 0.0;
  double feasible_lower = 0.0;
  double feasible_upper = 1.0;
  double r = 0.0;
  double t = 0.0;
};

/// Closed-form utility-maximizing price (sqrt(r/t) + r) / (S + r).
/// Throws InfeasibleMarket when the formula lands at or above 1, which
/// signals capacity too small relative to demand.
PriceDecision optimal_price(const MarketConfig& config,
                            ParityConvention convention = ParityConvention::EvenBranch);

/// Price interval keeping revenue positive and demand inside capacity:
/// (r/(S+r), 1).
std::pair<double, double> feasible_price_range(
    const MarketConfig& config,
    ParityConvention convention = ParityConvention::EvenBranch);

/// First derivative of the operator utility in the price, in the closed
/// algebraic form r/(S pi - (1 - pi) r)^2 - t. Vanishes at the optimum.
double mno_utility_slope(double price, const RtCoefficients& rt, double total_capacity);

}  // namespace cachegame
