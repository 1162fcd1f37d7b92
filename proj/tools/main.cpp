#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"
#include "cachegame/io.hpp"
#include "cachegame/oracle.hpp"
#include "cachegame/stackelberg.hpp"
#include "cachegame/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitNonConvergence = 4;

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + out_path);
  out << content;
}

std::vector<double> parse_init_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    try {
      std::size_t consumed = 0;
      values.push_back(std::stod(token, &consumed));
      if (consumed != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw cachegame::DomainError("--init: \"" + token + "\" is not a number");
    }
  }
  return values;
}

struct MRange {
  int from = 0;
  int to = 0;
};

MRange parse_m_range(const std::string& text) {
  const auto sep = text.find("..");
  if (sep == std::string::npos)
    throw cachegame::DomainError("--m-range: expected the form a..b");
  try {
    MRange range;
    range.from = std::stoi(text.substr(0, sep));
    range.to = std::stoi(text.substr(sep + 2));
    return range;
  } catch (const std::exception&) {
    throw cachegame::DomainError("--m-range: expected the form a..b with integers");
  }
}

int run_equilibrium(const std::string& config_path, const std::string& out_path,
                    const std::string& format, double tol, int max_iter,
                    const std::string& init_text) {
  const cachegame::MarketConfig config = cachegame::load_market_config(config_path);
  cachegame::SolveOptions options;
  options.br_tol = tol;
  options.br_max_iter = max_iter;
  if (!init_text.empty())
    options.initial = cachegame::QuantityProfile{parse_init_list(init_text), std::nullopt};
  const cachegame::EquilibriumReport report = cachegame::solve_stackelberg(config, options);

  if (format == "csv") {
    std::ostringstream out;
    cachegame::write_report_csv(out, report, config);
    emit(out_path, out.str());
  } else {
    emit(out_path, cachegame::report_to_json(report) + "\n");
  }
  return kExitOk;
}

int run_br_trace(const std::string& config_path, const std::string& out_path,
                 double price, double tol, int max_iter, const std::string& init_text) {
  const cachegame::MarketConfig config = cachegame::load_market_config(config_path);
  if (!(price > 0.0 && price < 1.0))
    throw cachegame::DomainError("--price must be in (0,1)");

  cachegame::QuantityProfile initial;
  if (init_text.empty()) {
    initial.q.assign(config.cp_count(), 0.0);
  } else {
    initial.q = parse_init_list(init_text);
  }
  cachegame::BrOptions options;
  options.tol = tol;
  options.max_iter = max_iter;
  const cachegame::BrTrace trace = cachegame::br_dynamics(config, price, initial, options);

  std::ostringstream out;
  cachegame::write_br_trace_csv(out, trace);
  emit(out_path, out.str());
  if (!trace.converged) {
    std::cerr << "error: best-response dynamics did not converge after "
              << trace.steps() << " iterations (last residual "
              << cachegame::format_double(trace.final_residual) << ")\n";
    return kExitNonConvergence;
  }
  return kExitOk;
}

int run_price_sweep(const std::vector<std::string>& config_paths,
                    const std::string& out_path, int grid,
                    std::optional<double> single_price) {
  std::vector<cachegame::MarketConfig> configs;
  for (const std::string& path : config_paths)
    configs.push_back(cachegame::load_market_config(path));

  cachegame::PriceSweepOptions options;
  options.grid_points = grid;
  options.single_price = single_price;
  const auto rows = cachegame::price_sweep_rows(configs, options);

  std::ostringstream out;
  cachegame::write_price_sweep_csv(out, rows, configs.size() > 1);
  emit(out_path, out.str());
  return kExitOk;
}

int run_cp_sweep(const std::string& config_path, const std::string& out_path,
                 const std::string& m_range_text) {
  const cachegame::MarketConfig templ = cachegame::load_market_config(config_path);
  const MRange range = parse_m_range(m_range_text);
  const auto rows = cachegame::cp_sweep_rows(templ, range.from, range.to);

  std::ostringstream out;
  cachegame::write_cp_sweep_csv(out, rows);
  emit(out_path, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stackelberg caching-market solver"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> config_paths;
  std::string out_path;
  std::string format = "json";
  std::string init_text;
  std::string m_range_text;
  double price = 0.0;
  double tol = 1e-9;
  int max_iter = 10000;
  int grid = 200;

  CLI::App* equilibrium = app.add_subcommand(
      "equilibrium", "Solve the full game and write the equilibrium report");
  equilibrium->add_option("--config", config_path, "market config (JSON)")->required();
  equilibrium->add_option("--out", out_path, "output path (default: stdout)");
  equilibrium->add_option("--format", format, "json|csv")
      ->check(CLI::IsMember({"json", "csv"}));
  equilibrium->add_option("--tol", tol, "best-response convergence tolerance");
  equilibrium->add_option("--max-iter", max_iter, "best-response iteration cap");
  equilibrium->add_option("--init", init_text, "initial quantities, comma separated");

  CLI::App* br_trace = app.add_subcommand(
      "br-trace", "Run best-response dynamics at a fixed price and write the trace CSV");
  br_trace->add_option("--config", config_path, "market config (JSON)")->required();
  br_trace->add_option("--price", price, "caching price in (0,1)")->required();
  br_trace->add_option("--out", out_path, "output path (default: stdout)");
  br_trace->add_option("--tol", tol, "convergence tolerance (max-norm)");
  br_trace->add_option("--max-iter", max_iter, "iteration cap");
  br_trace->add_option("--init", init_text, "initial quantities, comma separated");

  CLI::App* price_sweep = app.add_subcommand(
      "price-sweep", "Sweep the operator utility over the feasible price range");
  price_sweep->add_option("--config", config_paths, "market config(s); repeat for several capacities")
      ->required();
  price_sweep->add_option("--out", out_path, "output path (default: stdout)");
  price_sweep->add_option("--grid", grid, "number of grid points (>= 2)");
  double sweep_price = 0.0;
  CLI::Option* sweep_price_opt =
      price_sweep->add_option("--price", sweep_price, "evaluate a single price instead");

  CLI::App* cp_sweep = app.add_subcommand(
      "cp-sweep", "Provider utilities at equilibrium while the provider count grows");
  cp_sweep->add_option("--config", config_path, "template market config (JSON)")->required();
  cp_sweep->add_option("--m-range", m_range_text, "provider count range a..b")->required();
  cp_sweep->add_option("--out", out_path, "output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (equilibrium->parsed())
      return run_equilibrium(config_path, out_path, format, tol, max_iter, init_text);
    if (br_trace->parsed())
      return run_br_trace(config_path, out_path, price, tol, max_iter, init_text);
    if (price_sweep->parsed()) {
      std::optional<double> single;
      if (sweep_price_opt->count() > 0) single = sweep_price;
      return run_price_sweep(config_paths, out_path, grid, single);
    }
    if (cp_sweep->parsed())
      return run_cp_sweep(config_path, out_path, m_range_text);
  } catch (const cachegame::ConfigError& e) {
    for (const auto& issue : e.issues()) std::cerr << "error: " << issue.message << "\n";
    return kExitValidation;
  } catch (const cachegame::InfeasibleMarket& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const cachegame::NonConvergence& e) {
    std::ostringstream out;
    cachegame::write_br_trace_csv(out, e.trace());
    try {
      emit(out_path, out.str());
    } catch (const std::exception& io_error) {
      std::cerr << "error: " << io_error.what() << "\n";
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitNonConvergence;
  } catch (const cachegame::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
