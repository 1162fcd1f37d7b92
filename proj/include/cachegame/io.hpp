#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cachegame/follower.hpp"
#include "cachegame/model.hpp"
#include "cachegame/stackelberg.hpp"

namespace cachegame {

/// Parses a market config document:
///   { "sbs_capacities": [..],
///     "cps": [{"alpha":.., "p_mean":.., "delta_p":.., "catalog_size":..}, ..] }
/// Field names are exact; unknown or missing fields are rejected with a
/// ConfigError. The result is NOT validated against the market invariants;
/// call validate_market / ensure_valid for that.
MarketConfig parse_market_config(const std::string& json_text);

/// parse_market_config over a file; file-system problems also surface as
/// ConfigError.
MarketConfig load_market_config(const std::filesystem::path& path);

/// Fixed-width float rendering used by every CSV writer: 12 significant
/// digits, locale-independent.
std::string format_double(double value);

/// One row per iteration: iter, q_1, ..., q_M, residual.
void write_br_trace_csv(std::ostream& out, const BrTrace& trace);

/// Equilibrium report as a JSON document (field names are part of the
/// interface).
std::string report_to_json(const EquilibriumReport& report);

/// Flattened per-provider rows of an equilibrium report.
void write_report_csv(std::ostream& out, const EquilibriumReport& report,
                      const MarketConfig& config);

struct PriceSweepRow {
  double pi = 0.0;
  double u_o = 0.0;
  double r_o = 0.0;
  double c_o = 0.0;
  double d = 0.0;
  bool feasible = false;
  bool optimal = false;
  double s = 0.0;  // aggregate capacity of the config that produced the row
};

/// Columns pi, u_o, R_o, C_o, d, feasible, then optimal; an S column is
/// appended when rows from differently sized fleets share one file.
void write_price_sweep_csv(std::ostream& out, std::span<const PriceSweepRow> rows,
                           bool with_capacity_column);

struct CpSweepRow {
  int total_cps = 0;  // M
  int cp = 0;         // 1-based provider index
  double alpha = 0.0;
  double pi_star = 0.0;
  double q_star = 0.0;
  double u_at_q_star = 0.0;
  double u_at_half = 0.0;
  double u_at_double = 0.0;
};

void write_cp_sweep_csv(std::ostream& out, std::span<const CpSweepRow> rows);

}  // namespace cachegame
