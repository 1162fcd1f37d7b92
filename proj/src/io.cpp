#include "cachegame/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "json.hpp"

namespace cachegame {

namespace {

using nlohmann::json;

[[noreturn]] void fail_config(const std::string& message) {
  throw ConfigError({{ValidationCode::MalformedConfig, -1, message}});
}

void reject_unknown_keys(const json& object, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : object.items()) {
    bool recognized = false;
    for (const char* key : known) {
      if (item.key() == key) {
        recognized = true;
        break;
      }
    }
    if (!recognized) fail_config("unknown field \"" + item.key() + "\" in " + where);
  }
}

double require_number(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) fail_config("missing field \"" + std::string(key) + "\" in " + where);
  const json& value = object.at(key);
  if (!value.is_number()) fail_config("field \"" + std::string(key) + "\" in " + where + " must be a number");
  return value.get<double>();
}

long require_integer(const json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) fail_config("missing field \"" + std::string(key) + "\" in " + where);
  const json& value = object.at(key);
  if (!value.is_number_integer()) fail_config("field \"" + std::string(key) + "\" in " + where + " must be an integer");
  return value.get<long>();
}

}  // namespace

MarketConfig parse_market_config(const std::string& json_text) {
  json document;
  try {
    document = json::parse(json_text);
  } catch (const json::parse_error& e) {
    fail_config(std::string("malformed JSON: ") + e.what());
  }
  if (!document.is_object()) fail_config("config root must be a JSON object");
  reject_unknown_keys(document, {"sbs_capacities", "cps"}, "config");

  MarketConfig config;
  if (!document.contains("sbs_capacities")) fail_config("missing field \"sbs_capacities\"");
  const json& capacities = document.at("sbs_capacities");
  if (!capacities.is_array()) fail_config("\"sbs_capacities\" must be an array of numbers");
  for (const json& value : capacities) {
    if (!value.is_number()) fail_config("\"sbs_capacities\" must contain only numbers");
    config.fleet.capacities.push_back(value.get<double>());
  }

  if (!document.contains("cps")) fail_config("missing field \"cps\"");
  const json& cps = document.at("cps");
  if (!cps.is_array()) fail_config("\"cps\" must be an array of objects");
  for (std::size_t m = 0; m < cps.size(); ++m) {
    const json& entry = cps[m];
    std::ostringstream where;
    where << "cps[" << m << "]";
    if (!entry.is_object()) fail_config(where.str() + " must be an object");
    reject_unknown_keys(entry, {"alpha", "p_mean", "delta_p", "catalog_size"}, where.str());
    CpParams cp;
    cp.alpha = require_number(entry, "alpha", where.str());
    cp.p_mean = require_number(entry, "p_mean", where.str());
    cp.delta_p = require_number(entry, "delta_p", where.str());
    cp.catalog_size = require_integer(entry, "catalog_size", where.str());
    config.cps.push_back(cp);
  }
  return config;
}

MarketConfig load_market_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail_config("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_market_config(buffer.str());
}

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

void write_br_trace_csv(std::ostream& out, const BrTrace& trace) {
  const std::size_t m_count =
      trace.iterations.empty() ? 0 : trace.iterations.front().q.size();
  out << "iter";
  for (std::size_t m = 1; m <= m_count; ++m) out << ",q_" << m;
  out << ",residual\n";
  for (std::size_t i = 0; i < trace.iterations.size(); ++i) {
    out << i;
    for (double q : trace.iterations[i].q) out << ',' << format_double(q);
    out << ',' << format_double(trace.residuals[i]) << '\n';
  }
}

std::string report_to_json(const EquilibriumReport& report) {
  json document;
  document["price"] = {
      {"price", report.price.price},
      {"feasible_range", {report.price.feasible_lower, report.price.feasible_upper}},
      {"r", report.price.r},
      {"t", report.price.t},
  };
  document["quantities"]["q"] = report.quantities.q;
  if (report.quantities.rounded)
    document["quantities"]["rounded"] = *report.quantities.rounded;
  document["per_cp_utilities"] = report.per_cp_utilities;
  document["mno_utility"] = report.mno_utility;
  document["capacity_used"] = {{"d", report.capacity_used.d}, {"S", report.capacity_used.s}};
  if (report.br_trace) {
    json trace;
    trace["converged"] = report.br_trace->converged;
    trace["final_residual"] = report.br_trace->final_residual;
    json iterations = json::array();
    for (const QuantityProfile& profile : report.br_trace->iterations)
      iterations.push_back(profile.q);
    trace["iterations"] = std::move(iterations);
    trace["residuals"] = report.br_trace->residuals;
    document["br_trace"] = std::move(trace);
  }
  document["diagnostics"] = report.diagnostics;
  return document.dump(2);
}

void write_report_csv(std::ostream& out, const EquilibriumReport& report,
                      const MarketConfig& config) {
  out << "m,alpha,q,rounded,u_m,pi_star,u_o,d,S\n";
  for (std::size_t m = 0; m < report.quantities.q.size(); ++m) {
    out << (m + 1) << ',' << format_double(config.cps[m].alpha) << ','
        << format_double(report.quantities.q[m]) << ',';
    if (report.quantities.rounded) out << (*report.quantities.rounded)[m];
    out << ',' << format_double(report.per_cp_utilities[m]) << ','
        << format_double(report.price.price) << ',' << format_double(report.mno_utility)
        << ',' << format_double(report.capacity_used.d) << ','
        << format_double(report.capacity_used.s) << '\n';
  }
}

void write_price_sweep_csv(std::ostream& out, std::span<const PriceSweepRow> rows,
                           bool with_capacity_column) {
  out << "pi,u_o,R_o,C_o,d,feasible,optimal";
  if (with_capacity_column) out << ",S";
  out << '\n';
  for (const PriceSweepRow& row : rows) {
    out << format_double(row.pi) << ',' << format_double(row.u_o) << ','
        << format_double(row.r_o) << ',' << format_double(row.c_o) << ','
        << format_double(row.d) << ',' << (row.feasible ? "true" : "false") << ','
        << (row.optimal ? "true" : "false");
    if (with_capacity_column) out << ',' << format_double(row.s);
    out << '\n';
  }
}

void write_cp_sweep_csv(std::ostream& out, std::span<const CpSweepRow> rows) {
  out << "M,m,alpha,pi_star,q_star,u_at_q_star,u_at_half_q,u_at_double_q\n";
  for (const CpSweepRow& row : rows) {
    out << row.total_cps << ',' << row.cp << ',' << format_double(row.alpha) << ','
        << format_double(row.pi_star) << ',' << format_double(row.q_star) << ','
        << format_double(row.u_at_q_star) << ',' << format_double(row.u_at_half) << ','
        << format_double(row.u_at_double) << '\n';
  }
}

}  // namespace cachegame
