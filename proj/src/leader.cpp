#include "cachegame/leader.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"

namespace cachegame {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

Parity parity_of(long long value) { return (value % 2 == 0) ? Parity::Even : Parity::Odd; }

Parity fixed_parity(ParityConvention convention) {
  return convention == ParityConvention::OddBranch ? Parity::Odd : Parity::Even;
}
}  // namespace

double f_pm(const CpParams& cp, Parity parity) {
  return parity == Parity::Odd ? cp.p_mean : cp.p_mean + cp.delta_p / 2.0;
}

double cached_copies(const QuantityProfile& profile, const MarketConfig& config,
                     ParityConvention convention) {
  if (profile.q.size() != config.cp_count())
    throw DomainError("cached_copies: profile size does not match the market");
  double d = 0.0;
  for (std::size_t m = 0; m < profile.q.size(); ++m) {
    Parity parity = fixed_parity(convention);
    if (profile.rounded.has_value()) parity = parity_of((*profile.rounded)[m]);
    d += profile.q[m] * f_pm(config.cps[m], parity);
  }
  return d;
}

double mno_cost(double total_capacity, double cached) {
  if (cached > 0.0 && cached < total_capacity) return 1.0 / (total_capacity - cached);
  return kInf;
}

double mno_revenue(double price, const QuantityProfile& profile) {
  if (price < 0.0) throw DomainError("mno_revenue: price must be >= 0");
  return price * profile.total();
}

RtCoefficients rt_coefficients(const MarketConfig& config, ParityConvention convention,
                               double probe_price) {
  if (!(probe_price > 0.0 && probe_price < 1.0))
    throw DomainError("rt_coefficients: probe price must be in (0,1)");
  const NeSolution ne = solve_ne_linear(config, probe_price);
  const double scale = 1.0 / probe_price - 1.0;

  std::optional<std::vector<long long>> rounded;
  if (convention == ParityConvention::FromRounded)
    rounded = *round_uncoded(ne.profile).rounded;

  RtCoefficients rt;
  for (std::size_t m = 0; m < config.cp_count(); ++m) {
    const Parity parity =
        rounded ? parity_of((*rounded)[m]) : fixed_parity(convention);
    const double q_m = ne.profile.q[m];
    rt.t += q_m;
    rt.r += q_m * f_pm(config.cps[m], parity);
  }
  rt.t /= scale;
  rt.r /= scale;
  return rt;
}

double mno_utility_at(double price, const RtCoefficients& rt, double total_capacity) {
  const double slack = total_capacity - (1.0 / price - 1.0) * rt.r;
  if (!(slack > 0.0)) return -kInf;
  return (1.0 - price) * rt.t - 1.0 / slack;
}

double mno_utility(double price, const MarketConfig& config, ParityConvention convention) {
  if (!(price > 0.0 && price < 1.0))
    throw DomainError("mno_utility: price must be in (0,1)");
  const RtCoefficients rt = rt_coefficients(config, convention);
  return mno_utility_at(price, rt, config.total_capacity());
}

double mno_utility_slope(double price, const RtCoefficients& rt, double total_capacity) {
  const double scaled = total_capacity * price - (1.0 - price) * rt.r;
  return rt.r / (scaled * scaled) - rt.t;
}

PriceDecision optimal_price(const MarketConfig& config, ParityConvention convention) {
  ensure_valid(config);
  const RtCoefficients rt = rt_coefficients(config, convention);
  const double s = config.total_capacity();
  if (!(rt.r > 0.0) || !(rt.t > 0.0))
    throw InfeasibleMarket("optimal_price: degenerate demand (r or t not positive)");

  PriceDecision decision;
  decision.r = rt.r;
  decision.t = rt.t;
  decision.feasible_lower = rt.r / (s + rt.r);
  decision.feasible_upper = 1.0;
  decision.price = (std::sqrt(rt.r / rt.t) + rt.r) / (s + rt.r);

  if (!(decision.price < 1.0)) {
    std::ostringstream msg;
    msg << "optimal_price: price " << decision.price
        << " is not below 1; capacity S = " << s << " is too small for demand r = " << rt.r;
    throw InfeasibleMarket(msg.str());
  }

  // The formula lands strictly inside the feasible range and its slope
  // vanishes there; both are internal consistency checks, not user errors.
  if (!(decision.price > decision.feasible_lower))
    throw SingularSystem("optimal_price: price fell outside the feasible range");
  const double slope = mno_utility_slope(decision.price, rt, s);
  if (!(std::abs(slope) <= 1e-9))
    throw SingularSystem("optimal_price: stationarity check failed");
  return decision;
}

std::pair<double, double> feasible_price_range(const MarketConfig& config,
                                               ParityConvention convention) {
  const RtCoefficients rt = rt_coefficients(config, convention);
  const double s = config.total_capacity();
  return {rt.r / (s + rt.r), 1.0};
}

}  // namespace cachegame
