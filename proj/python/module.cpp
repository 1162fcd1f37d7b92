#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cachegame/errors.hpp"
#include "cachegame/follower.hpp"
#include "cachegame/io.hpp"
#include "cachegame/leader.hpp"
#include "cachegame/model.hpp"
#include "cachegame/oracle.hpp"
#include "cachegame/stackelberg.hpp"
#include "cachegame/sweep.hpp"

namespace py = pybind11;
using namespace cachegame;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Stackelberg caching-market solver";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InfeasibleMarket>(m, "InfeasibleMarket", PyExc_RuntimeError);
  py::register_exception<NonConvergence>(m, "NonConvergenceError", PyExc_RuntimeError);
  py::register_exception<SingularSystem>(m, "SingularSystemError", PyExc_RuntimeError);

  py::class_<SbsFleet>(m, "SbsFleet")
      .def(py::init([](std::vector<double> capacities) {
             return SbsFleet{std::move(capacities)};
           }),
           py::arg("capacities"))
      .def_readwrite("capacities", &SbsFleet::capacities)
      .def("total", &SbsFleet::total);

  py::class_<CpParams>(m, "CpParams")
      .def(py::init([](double alpha, double p_mean, double delta_p, long catalog_size) {
             return CpParams{alpha, p_mean, delta_p, catalog_size};
           }),
           py::arg("alpha"), py::arg("p_mean"), py::arg("delta_p") = 0.0,
           py::arg("catalog_size") = 1)
      .def_readwrite("alpha", &CpParams::alpha)
      .def_readwrite("p_mean", &CpParams::p_mean)
      .def_readwrite("delta_p", &CpParams::delta_p)
      .def_readwrite("catalog_size", &CpParams::catalog_size);

  py::class_<MarketConfig>(m, "MarketConfig")
      .def(py::init([](SbsFleet fleet, std::vector<CpParams> cps) {
             return MarketConfig{std::move(fleet), std::move(cps)};
           }),
           py::arg("fleet"), py::arg("cps"))
      .def_readwrite("fleet", &MarketConfig::fleet)
      .def_readwrite("cps", &MarketConfig::cps)
      .def("cp_count", &MarketConfig::cp_count)
      .def("total_capacity", &MarketConfig::total_capacity);

  py::class_<QuantityProfile>(m, "QuantityProfile")
      .def(py::init([](std::vector<double> q) {
             return QuantityProfile{std::move(q), std::nullopt};
           }),
           py::arg("q"))
      .def_readwrite("q", &QuantityProfile::q)
      .def_readwrite("rounded", &QuantityProfile::rounded)
      .def("total", &QuantityProfile::total)
      .def("others_total", &QuantityProfile::others_total, py::arg("m"));

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_readonly("cp_index", &ValidationIssue::cp_index)
      .def_readonly("message", &ValidationIssue::message)
      .def("__repr__",
           [](const ValidationIssue& issue) { return "<ValidationIssue: " + issue.message + ">"; });

  m.def("validate_market", &validate_market, py::arg("config"),
        "Complete list of invariant violations; empty means valid.");
  m.def("is_valid", &is_valid, py::arg("config"));
  m.def("total_capacity", &total_capacity, py::arg("fleet"));

  m.def("cp_revenue", &cp_revenue, py::arg("q_m"), py::arg("j_m"), py::arg("alpha"));
  m.def("cp_cost", &cp_cost, py::arg("price"), py::arg("q_m"));
  m.def("cp_utility", &cp_utility, py::arg("price"), py::arg("q_m"), py::arg("j_m"),
        py::arg("alpha"));
  m.def("best_response", &best_response, py::arg("price"), py::arg("j_m"), py::arg("alpha"));

  py::enum_<UpdateSchedule>(m, "UpdateSchedule")
      .value("SIMULTANEOUS", UpdateSchedule::Simultaneous)
      .value("SEQUENTIAL", UpdateSchedule::Sequential);

  py::class_<BrTrace>(m, "BrTrace")
      .def_readonly("iterations", &BrTrace::iterations)
      .def_readonly("residuals", &BrTrace::residuals)
      .def_readonly("converged", &BrTrace::converged)
      .def_readonly("final_residual", &BrTrace::final_residual)
      .def("steps", &BrTrace::steps);

  m.def(
      "br_dynamics",
      [](const MarketConfig& config, double price, const QuantityProfile& initial,
         double tol, int max_iter, UpdateSchedule schedule) {
        return br_dynamics(config, price, initial, BrOptions{tol, max_iter, schedule});
      },
      py::arg("config"), py::arg("price"), py::arg("initial"), py::arg("tol") = 1e-9,
      py::arg("max_iter") = 10000, py::arg("schedule") = UpdateSchedule::Simultaneous);

  py::class_<NeSolution>(m, "NeSolution")
      .def_readonly("profile", &NeSolution::profile)
      .def_readonly("clamped", &NeSolution::clamped);

  m.def("solve_ne_linear", &solve_ne_linear, py::arg("config"), py::arg("price"));
  m.def("ne_closed_form", &ne_closed_form, py::arg("config"), py::arg("price"));
  m.def("round_uncoded", &round_uncoded, py::arg("profile"));

  py::enum_<Parity>(m, "Parity").value("ODD", Parity::Odd).value("EVEN", Parity::Even);
  py::enum_<ParityConvention>(m, "ParityConvention")
      .value("EVEN_BRANCH", ParityConvention::EvenBranch)
      .value("ODD_BRANCH", ParityConvention::OddBranch)
      .value("FROM_ROUNDED", ParityConvention::FromRounded);

  m.def("f_pm", &f_pm, py::arg("cp"), py::arg("parity"));
  m.def("cached_copies", &cached_copies, py::arg("profile"), py::arg("config"),
        py::arg("convention") = ParityConvention::EvenBranch);
  m.def("mno_cost", &mno_cost, py::arg("total_capacity"), py::arg("cached"));
  m.def("mno_revenue", &mno_revenue, py::arg("price"), py::arg("profile"));

  py::class_<RtCoefficients>(m, "RtCoefficients")
      .def_readonly("r", &RtCoefficients::r)
      .def_readonly("t", &RtCoefficients::t);

  m.def("rt_coefficients", &rt_coefficients, py::arg("config"),
        py::arg("convention") = ParityConvention::EvenBranch, py::arg("probe_price") = 0.5);
  m.def("mno_utility", &mno_utility, py::arg("price"), py::arg("config"),
        py::arg("convention") = ParityConvention::EvenBranch);
  m.def("mno_utility_at", &mno_utility_at, py::arg("price"), py::arg("rt"),
        py::arg("total_capacity"));

  py::class_<PriceDecision>(m, "PriceDecision")
      .def_readonly("price", &PriceDecision::price)
      .def_readonly("feasible_lower", &PriceDecision::feasible_lower)
      .def_readonly("feasible_upper", &PriceDecision::feasible_upper)
      .def_readonly("r", &PriceDecision::r)
      .def_readonly("t", &PriceDecision::t);

  m.def("optimal_price", &optimal_price, py::arg("config"),
        py::arg("convention") = ParityConvention::EvenBranch);
  m.def("feasible_price_range", &feasible_price_range, py::arg("config"),
        py::arg("convention") = ParityConvention::EvenBranch);

  m.def("numeric_best_response", &numeric_best_response, py::arg("price"), py::arg("j_m"),
        py::arg("alpha"), py::arg("search_bound"));
  m.def("grid_argmax_price", &grid_argmax_price, py::arg("config"), py::arg("grid_points"),
        py::arg("convention") = ParityConvention::EvenBranch);

  py::class_<OracleVerdict>(m, "OracleVerdict")
      .def_readonly("passed", &OracleVerdict::passed)
      .def_readonly("worst_violation", &OracleVerdict::worst_violation)
      .def_readonly("witness", &OracleVerdict::witness);

  m.def(
      "verify_ne",
      [](const MarketConfig& config, double price, const QuantityProfile& profile,
         const std::vector<double>& deviations) {
        return verify_ne(config, price, profile, deviations);
      },
      py::arg("config"), py::arg("price"), py::arg("profile"), py::arg("deviations"));

  py::class_<CapacityUsage>(m, "CapacityUsage")
      .def_readonly("d", &CapacityUsage::d)
      .def_readonly("S", &CapacityUsage::s);

  py::class_<SolveOptions>(m, "SolveOptions")
      .def(py::init<>())
      .def_readwrite("run_br_check", &SolveOptions::run_br_check)
      .def_readwrite("initial", &SolveOptions::initial)
      .def_readwrite("br_tol", &SolveOptions::br_tol)
      .def_readwrite("br_max_iter", &SolveOptions::br_max_iter)
      .def_readwrite("br_match_tol", &SolveOptions::br_match_tol)
      .def_readwrite("parity", &SolveOptions::parity)
      .def_readwrite("enforce_catalog_bound", &SolveOptions::enforce_catalog_bound)
      .def_readwrite("compare_closed_form", &SolveOptions::compare_closed_form);

  py::class_<EquilibriumReport>(m, "EquilibriumReport")
      .def_readonly("price", &EquilibriumReport::price)
      .def_readonly("quantities", &EquilibriumReport::quantities)
      .def_readonly("per_cp_utilities", &EquilibriumReport::per_cp_utilities)
      .def_readonly("mno_utility", &EquilibriumReport::mno_utility)
      .def_readonly("capacity_used", &EquilibriumReport::capacity_used)
      .def_readonly("br_trace", &EquilibriumReport::br_trace)
      .def_readonly("diagnostics", &EquilibriumReport::diagnostics)
      .def("to_json", &report_to_json);

  m.def("solve_stackelberg", &solve_stackelberg, py::arg("config"),
        py::arg("options") = SolveOptions{});

  m.def("parse_market_config", &parse_market_config, py::arg("json_text"));
  m.def("load_market_config", &load_market_config, py::arg("path"));
  m.def("report_to_json", &report_to_json, py::arg("report"));
}
