#include "cachegame/model.hpp"

#include <sstream>

namespace cachegame {

double SbsFleet::total() const {
  double s = 0.0;
  for (double c : capacities) s += c;
  return s;
}

double total_capacity(const SbsFleet& fleet) { return fleet.total(); }

double QuantityProfile::total() const {
  double s = 0.0;
  for (double v : q) s += v;
  return s;
}

double QuantityProfile::others_total(std::size_t m) const {
  double s = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (i != m) s += q[i];
  }
  return s;
}

std::vector<ValidationIssue> validate_market(const MarketConfig& config) {
  std::vector<ValidationIssue> issues;
  const auto add = [&issues](ValidationCode code, int cp, std::string message) {
    issues.push_back({code, cp, std::move(message)});
  };

  if (config.fleet.capacities.empty()) {
    add(ValidationCode::EmptyCapacityList, -1, "sbs_capacities is empty");
  }
  for (std::size_t n = 0; n < config.fleet.capacities.size(); ++n) {
    if (config.fleet.capacities[n] < 0.0) {
      std::ostringstream msg;
      msg << "sbs_capacities[" << n << "] is negative";
      add(ValidationCode::NonPositiveCapacity, -1, msg.str());
    }
  }
  if (!(config.fleet.total() > 0.0)) {
    add(ValidationCode::NonPositiveCapacity, -1, "total capacity S must be > 0");
  }

  if (config.cps.empty()) {
    add(ValidationCode::EmptyCpList, -1, "cps is empty");
  }
  const double m_count = static_cast<double>(config.cps.size());
  for (std::size_t m = 0; m < config.cps.size(); ++m) {
    const CpParams& cp = config.cps[m];
    if (!(cp.alpha > 1.0) || cp.alpha < m_count) {
      std::ostringstream msg;
      msg << "cps[" << m << "]: alpha = " << cp.alpha
          << " must be > 1 and >= the number of providers (" << config.cps.size() << ")";
      add(ValidationCode::AlphaTooSmall, static_cast<int>(m), msg.str());
    }
    if (!(cp.p_mean > 0.0)) {
      std::ostringstream msg;
      msg << "cps[" << m << "]: p_mean must be > 0";
      add(ValidationCode::BadQuantization, static_cast<int>(m), msg.str());
    }
    if (cp.delta_p < 0.0) {
      std::ostringstream msg;
      msg << "cps[" << m << "]: delta_p must be >= 0";
      add(ValidationCode::BadQuantization, static_cast<int>(m), msg.str());
    }
    if (cp.catalog_size < 1) {
      std::ostringstream msg;
      msg << "cps[" << m << "]: catalog_size must be >= 1";
      add(ValidationCode::BadCatalog, static_cast<int>(m), msg.str());
    }
  }
  return issues;
}

bool is_valid(const MarketConfig& config) { return validate_market(config).empty(); }

namespace {

std::string join_issues(const std::vector<ValidationIssue>& issues) {
  std::ostringstream out;
  out << "invalid market config (" << issues.size() << " issue"
      << (issues.size() == 1 ? "" : "s") << ")";
  for (const ValidationIssue& issue : issues) out << "\n  - " << issue.message;
  return out.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<ValidationIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

void ensure_valid(const MarketConfig& config) {
  auto issues = validate_market(config);
  if (!issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace cachegame
