#include "cachegame/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cachegame/errors.hpp"

namespace cachegame {

namespace {

std::string describe_clamped(const std::vector<std::size_t>& clamped) {
  std::ostringstream msg;
  msg << "clamped negative equilibrium components to zero:";
  for (std::size_t m : clamped) msg << " cps[" << m << "]";
  return msg.str();
}

}  // namespace

EquilibriumReport solve_stackelberg(const MarketConfig& config,
                                    const SolveOptions& options) {
  ensure_valid(config);

  EquilibriumReport report;
  report.price = optimal_price(config, options.parity);
  const double pi_star = report.price.price;
  const double s = config.total_capacity();

  NeSolution ne = solve_ne_linear(config, pi_star);
  if (!ne.clamped.empty())
    report.diagnostics.push_back(describe_clamped(ne.clamped));

  if (options.enforce_catalog_bound) {
    for (std::size_t m = 0; m < ne.profile.q.size(); ++m) {
      const double bound = static_cast<double>(config.cps[m].catalog_size);
      if (ne.profile.q[m] > bound) {
        std::ostringstream msg;
        msg << "clamped cps[" << m << "] request " << ne.profile.q[m]
            << " to catalog size " << bound;
        report.diagnostics.push_back(msg.str());
        ne.profile.q[m] = bound;
      }
    }
  }

  if (options.compare_closed_form) {
    const QuantityProfile closed = ne_closed_form(config, pi_star);
    for (std::size_t m = 0; m < closed.q.size(); ++m) {
      const double reference = ne.profile.q[m];
      const double mismatch =
          std::abs(closed.q[m] - reference) / std::max(std::abs(reference), 1e-12);
      if (mismatch > 1e-9) {
        std::ostringstream msg;
        msg << "closed-form equilibrium disagrees with the linear solve at cps[" << m
            << "]: " << closed.q[m] << " vs " << reference;
        report.diagnostics.push_back(msg.str());
      }
    }
  }

  if (options.run_br_check) {
    QuantityProfile initial;
    if (options.initial) {
      initial = *options.initial;
    } else {
      initial.q.assign(config.cp_count(), 0.0);
    }
    BrOptions br_options;
    br_options.tol = options.br_tol;
    br_options.max_iter = options.br_max_iter;
    BrTrace trace = br_dynamics(config, pi_star, initial, br_options);
    if (!trace.converged) {
      throw NonConvergence("best-response dynamics did not converge at the optimal price",
                           std::move(trace));
    }
    const QuantityProfile& fixed_point = trace.iterations.back();
    double gap = 0.0;
    for (std::size_t m = 0; m < fixed_point.q.size(); ++m)
      gap = std::max(gap, std::abs(fixed_point.q[m] - ne.profile.q[m]));
    if (gap > options.br_match_tol) {
      std::ostringstream msg;
      msg << "best-response fixed point differs from the linear solve by " << gap;
      report.diagnostics.push_back(msg.str());
    }
    report.br_trace = std::move(trace);
  }

  report.quantities = round_uncoded(ne.profile);

  // Utilities and capacity use are evaluated on the continuous profile;
  // rounding is attached for reporting, and feeds back only through the
  // FromRounded parity convention.
  const double d = options.parity == ParityConvention::FromRounded
                       ? cached_copies(report.quantities, config, options.parity)
                       : cached_copies(ne.profile, config, options.parity);
  report.capacity_used = {d, s};
  if (!(d < s)) report.diagnostics.push_back("infeasible: cached copies reach capacity");

  report.per_cp_utilities.resize(config.cp_count());
  for (std::size_t m = 0; m < config.cp_count(); ++m) {
    report.per_cp_utilities[m] = cp_utility(pi_star, ne.profile.q[m],
                                            ne.profile.others_total(m),
                                            config.cps[m].alpha);
  }
  report.mno_utility = mno_revenue(pi_star, ne.profile) - mno_cost(s, d);

  return report;
}

}  // namespace cachegame
