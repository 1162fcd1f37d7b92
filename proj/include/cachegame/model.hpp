#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cachegame {

/// Cache-enabled small base stations owned by the operator. Capacities are
/// file counts, real-valued; the aggregate capacity S is their exact sum.
struct SbsFleet {
  std::vector<double> capacities;

  double total() const;
};

/// Parameters of one content provider: traffic load alpha, mean access
/// weight p_mean (copies per file), quantization step delta_p, and the
/// provider's catalog size in files.
struct CpParams {
  double alpha = 0.0;
  double p_mean = 0.0;
  double delta_p = 0.0;
  long catalog_size = 0;
};

/// One market instance: the SBS fleet plus an ordered list of providers.
struct MarketConfig {
  SbsFleet fleet;
  std::vector<CpParams> cps;

  std::size_t cp_count() const { return cps.size(); }
  double total_capacity() const { return fleet.total(); }
};

enum class ValidationCode {
  AlphaTooSmall,
  NonPositiveCapacity,
  EmptyCapacityList,
  EmptyCpList,
  BadQuantization,
  BadCatalog,
  MalformedConfig,  // schema/JSON problems, not market invariants
};

struct ValidationIssue {
  ValidationCode code;
  int cp_index = -1;  // 0-based provider index, -1 for fleet-level issues
  std::string message;
};

/// Checks every market invariant and returns the complete list of
/// violations; an empty list means the config is valid. Idempotent.
///
/// Rules: capacities non-empty and each >= 0; total capacity S > 0;
/// at least one provider; per provider alpha > 1 and alpha >= M,
/// p_mean > 0, delta_p >= 0, catalog_size >= 1.
std::vector<ValidationIssue> validate_market(const MarketConfig& config);

bool is_valid(const MarketConfig& config);

/// Exhaustive validation failure: carries every violated invariant.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Throws ConfigError when validate_market reports any violation.
void ensure_valid(const MarketConfig& config);

/// Aggregate cache capacity S of a fleet (exact sum of capacities).
double total_capacity(const SbsFleet& fleet);

/// Per-provider caching request quantities. The continuous vector q is the
/// primary representation; `rounded` is attached by the uncoded-caching
/// rounding step and stays within 0.5 of q componentwise.
struct QuantityProfile {
  std::vector<double> q;
  std::optional<std::vector<long long>> rounded;

  std::size_t size() const { return q.size(); }
  double total() const;
  /// Sum of all entries except m (the competitors' load J_m).
  double others_total(std::size_t m) const;
};

}  // namespace cachegame
