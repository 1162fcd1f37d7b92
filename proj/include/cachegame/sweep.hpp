#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cachegame/io.hpp"
#include "cachegame/leader.hpp"
#include "cachegame/model.hpp"

namespace cachegame {

struct PriceSweepOptions {
  int grid_points = 200;
  /// Evaluate a single price instead of a grid.
  std::optional<double> single_price;
  ParityConvention parity = ParityConvention::EvenBranch;
};

/// Utility curve of the operator over its feasible price range (shrunk by
/// 1e-6 at both ends), with the optimal-price row inserted and flagged.
std::vector<PriceSweepRow> price_sweep_rows(const MarketConfig& config,
                                            const PriceSweepOptions& options);

/// Same sweep for several markets sharing one file. All configs are
/// evaluated on a common grid (the intersection of their feasible ranges)
/// so curves compare pointwise; each config still gets its own optimal row.
std::vector<PriceSweepRow> price_sweep_rows(std::span<const MarketConfig> configs,
                                            const PriceSweepOptions& options);

/// Builds the M-provider market used by the provider-count sweep: the
/// fleet and the per-provider p_mean/delta_p/catalog_size come from the
/// template's first provider, and traffic loads follow alpha_m = M + m.
MarketConfig scaled_market(const MarketConfig& templ, int total_cps);

/// For each M in [m_from, m_to]: the optimal price, the equilibrium, and
/// every provider's utility at its equilibrium request, at half of it and
/// at double of it (competitors held at equilibrium).
std::vector<CpSweepRow> cp_sweep_rows(const MarketConfig& templ, int m_from, int m_to,
                                      ParityConvention parity = ParityConvention::EvenBranch);

}  // namespace cachegame
