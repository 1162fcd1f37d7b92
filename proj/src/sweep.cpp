#include "cachegame/sweep.hpp"

#include <algorithm>
#include <cmath>

#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"

namespace cachegame {

namespace {

constexpr double kRangeShrink = 1e-6;

PriceSweepRow evaluate_point(double price, const RtCoefficients& rt, double s,
                             bool optimal) {
  const double scale = 1.0 / price - 1.0;
  PriceSweepRow row;
  row.pi = price;
  row.d = scale * rt.r;
  row.r_o = (1.0 - price) * rt.t;
  row.c_o = mno_cost(s, row.d);
  row.u_o = mno_utility_at(price, rt, s);
  row.feasible = row.d < s;
  row.optimal = optimal;
  row.s = s;
  return row;
}

std::vector<PriceSweepRow> sweep_one(const MarketConfig& config,
                                     const PriceSweepOptions& options, double grid_lo,
                                     double grid_hi) {
  const RtCoefficients rt = rt_coefficients(config, options.parity);
  const double s = config.total_capacity();
  const PriceDecision decision = optimal_price(config, options.parity);

  std::vector<PriceSweepRow> rows;
  if (options.single_price) {
    const double price = *options.single_price;
    if (!(price > 0.0 && price < 1.0))
      throw DomainError("price sweep: price must be in (0,1)");
    const bool optimal =
        std::abs(price - decision.price) <= 1e-9 * std::max(1.0, std::abs(decision.price));
    rows.push_back(evaluate_point(price, rt, s, optimal));
    return rows;
  }

  if (options.grid_points < 2)
    throw DomainError("price sweep: grid must have at least 2 points");
  const double step = (grid_hi - grid_lo) / static_cast<double>(options.grid_points - 1);
  bool optimal_emitted = false;
  for (int i = 0; i < options.grid_points; ++i) {
    const double price = grid_lo + step * static_cast<double>(i);
    if (!optimal_emitted && decision.price < price) {
      rows.push_back(evaluate_point(decision.price, rt, s, true));
      optimal_emitted = true;
    }
    rows.push_back(evaluate_point(price, rt, s, false));
  }
  if (!optimal_emitted) rows.push_back(evaluate_point(decision.price, rt, s, true));
  return rows;
}

}  // namespace

std::vector<PriceSweepRow> price_sweep_rows(const MarketConfig& config,
                                            const PriceSweepOptions& options) {
  ensure_valid(config);
  const auto [lower, upper] = feasible_price_range(config, options.parity);
  return sweep_one(config, options, lower + kRangeShrink, upper - kRangeShrink);
}

std::vector<PriceSweepRow> price_sweep_rows(std::span<const MarketConfig> configs,
                                            const PriceSweepOptions& options) {
  if (configs.empty()) throw DomainError("price sweep: no configs given");
  if (configs.size() == 1) return price_sweep_rows(configs.front(), options);

  double lower = 0.0;
  for (const MarketConfig& config : configs) {
    ensure_valid(config);
    lower = std::max(lower, feasible_price_range(config, options.parity).first);
  }
  std::vector<PriceSweepRow> rows;
  for (const MarketConfig& config : configs) {
    auto block = sweep_one(config, options, lower + kRangeShrink, 1.0 - kRangeShrink);
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

MarketConfig scaled_market(const MarketConfig& templ, int total_cps) {
  if (templ.cps.empty())
    throw ConfigError({{ValidationCode::EmptyCpList, -1,
                        "cp sweep: template config has no providers"}});
  if (total_cps < 1) throw DomainError("cp sweep: provider count must be >= 1");
  MarketConfig config;
  config.fleet = templ.fleet;
  config.cps.assign(static_cast<std::size_t>(total_cps), templ.cps.front());
  for (int m = 1; m <= total_cps; ++m)
    config.cps[static_cast<std::size_t>(m - 1)].alpha = static_cast<double>(total_cps + m);
  return config;
}

std::vector<CpSweepRow> cp_sweep_rows(const MarketConfig& templ, int m_from, int m_to,
                                      ParityConvention parity) {
  if (m_from < 1 || m_to < m_from)
    throw DomainError("cp sweep: range must satisfy 1 <= from <= to");
  std::vector<CpSweepRow> rows;
  for (int total = m_from; total <= m_to; ++total) {
    const MarketConfig config = scaled_market(templ, total);
    ensure_valid(config);
    const PriceDecision decision = optimal_price(config, parity);
    const NeSolution ne = solve_ne_linear(config, decision.price);
    for (std::size_t m = 0; m < config.cp_count(); ++m) {
      const double q_m = ne.profile.q[m];
      const double j_m = ne.profile.others_total(m);
      const double alpha = config.cps[m].alpha;
      CpSweepRow row;
      row.total_cps = total;
      row.cp = static_cast<int>(m) + 1;
      row.alpha = alpha;
      row.pi_star = decision.price;
      row.q_star = q_m;
      row.u_at_q_star = cp_utility(decision.price, q_m, j_m, alpha);
      row.u_at_half = cp_utility(decision.price, q_m / 2.0, j_m, alpha);
      row.u_at_double = cp_utility(decision.price, 2.0 * q_m, j_m, alpha);
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace cachegame
