#include "cachegame/follower.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cachegame/errors.hpp"

namespace cachegame {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double cp_revenue(double q_m, double j_m, double alpha) {
  if (q_m < 0.0) throw DomainError("cp_revenue: q_m must be >= 0");
  if (j_m < 0.0) throw DomainError("cp_revenue: j_m must be >= 0");
  if (!(alpha > 0.0)) throw DomainError("cp_revenue: alpha must be > 0");
  return std::log1p(q_m / (1.0 + j_m / alpha));
}

double cp_cost(double price, double q_m) {
  if (price < 0.0) throw DomainError("cp_cost: price must be >= 0");
  if (q_m < 0.0) throw DomainError("cp_cost: q_m must be >= 0");
  return price * q_m;
}

double cp_utility(double price, double q_m, double j_m, double alpha) {
  return cp_revenue(q_m, j_m, alpha) - cp_cost(price, q_m);
}

double best_response(double price, double j_m, double alpha) {
  if (!(price > 0.0)) throw DomainError("best_response: price must be > 0");
  if (j_m < 0.0) throw DomainError("best_response: j_m must be >= 0");
  if (!(alpha > 0.0)) throw DomainError("best_response: alpha must be > 0");
  return std::max(0.0, 1.0 / price - 1.0 - j_m / alpha);
}

BrTrace br_dynamics(const MarketConfig& config, double price,
                    const QuantityProfile& initial, const BrOptions& options) {
  ensure_valid(config);
  if (!(price > 0.0 && price < 1.0))
    throw DomainError("br_dynamics: price must be in (0,1)");
  if (!(options.tol > 0.0)) throw DomainError("br_dynamics: tol must be > 0");
  if (options.max_iter < 1) throw DomainError("br_dynamics: max_iter must be >= 1");
  const std::size_t m_count = config.cp_count();
  if (initial.q.size() != m_count)
    throw DomainError("br_dynamics: initial profile size does not match the market");
  for (double v : initial.q) {
    if (v < 0.0) throw DomainError("br_dynamics: initial quantities must be >= 0");
  }

  BrTrace trace;
  trace.iterations.push_back(QuantityProfile{initial.q, std::nullopt});
  trace.residuals.push_back(kInf);

  std::vector<double> current = initial.q;
  std::vector<double> next(m_count);
  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (options.schedule == UpdateSchedule::Simultaneous) {
      double total = 0.0;
      for (double v : current) total += v;
      for (std::size_t m = 0; m < m_count; ++m) {
        next[m] = best_response(price, total - current[m], config.cps[m].alpha);
      }
    } else {
      next = current;
      for (std::size_t m = 0; m < m_count; ++m) {
        double others = 0.0;
        for (std::size_t l = 0; l < m_count; ++l) {
          if (l != m) others += next[l];
        }
        next[m] = best_response(price, others, config.cps[m].alpha);
      }
    }

    double residual = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
      residual = std::max(residual, std::abs(next[m] - current[m]));
    }
    current = next;
    trace.iterations.push_back(QuantityProfile{current, std::nullopt});
    trace.residuals.push_back(residual);
    if (residual <= options.tol) {
      trace.converged = true;
      break;
    }
  }
  trace.final_residual = trace.residuals.back();
  return trace;
}

NeSolution solve_ne_linear(const MarketConfig& config, double price) {
  ensure_valid(config);
  if (!(price > 0.0 && price < 1.0))
    throw DomainError("solve_ne_linear: price must be in (0,1)");

  const std::size_t m_count = config.cp_count();
  const double rhs_value = 1.0 / price - 1.0;

  // Dense Gaussian elimination with partial pivoting; the matrix has unit
  // diagonal and 1/alpha_m across row m, so it is strictly diagonally
  // dominant for any validated market.
  std::vector<double> a(m_count * m_count);
  std::vector<double> b(m_count, rhs_value);
  for (std::size_t m = 0; m < m_count; ++m) {
    const double off = 1.0 / config.cps[m].alpha;
    for (std::size_t l = 0; l < m_count; ++l) a[m * m_count + l] = (l == m) ? 1.0 : off;
  }

  for (std::size_t col = 0; col < m_count; ++col) {
    std::size_t pivot = col;
    double best = std::abs(a[col * m_count + col]);
    for (std::size_t row = col + 1; row < m_count; ++row) {
      const double candidate = std::abs(a[row * m_count + col]);
      if (candidate > best) {
        best = candidate;
        pivot = row;
      }
    }
    if (best < 1e-14) throw SingularSystem("solve_ne_linear: singular best-response system");
    if (pivot != col) {
      for (std::size_t k = col; k < m_count; ++k)
        std::swap(a[col * m_count + k], a[pivot * m_count + k]);
      std::swap(b[col], b[pivot]);
    }
    const double inv_pivot = 1.0 / a[col * m_count + col];
    for (std::size_t row = col + 1; row < m_count; ++row) {
      const double factor = a[row * m_count + col] * inv_pivot;
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < m_count; ++k)
        a[row * m_count + k] -= factor * a[col * m_count + k];
      b[row] -= factor * b[col];
    }
  }

  std::vector<double> q(m_count);
  for (std::size_t i = m_count; i-- > 0;) {
    double sum = b[i];
    for (std::size_t k = i + 1; k < m_count; ++k) sum -= a[i * m_count + k] * q[k];
    q[i] = sum / a[i * m_count + i];
  }

  NeSolution solution;
  for (std::size_t m = 0; m < m_count; ++m) {
    if (q[m] < 0.0) {
      q[m] = 0.0;
      solution.clamped.push_back(m);
    }
  }
  solution.profile.q = std::move(q);
  return solution;
}

QuantityProfile ne_closed_form(const MarketConfig& config, double price) {
  for (const CpParams& cp : config.cps) {
    if (cp.alpha == 1.0)
      throw DomainError("ne_closed_form: alpha = 1 makes the formula undefined");
  }
  ensure_valid(config);
  if (!(price > 0.0 && price < 1.0))
    throw DomainError("ne_closed_form: price must be in (0,1)");

  const std::size_t m_count = config.cp_count();
  const auto alpha = [&config](std::size_t i) { return config.cps[i].alpha; };
  const double scale = 1.0 / price - 1.0;

  // The determinant ratio collapses to the lone best response when there
  // is no interaction; the printed expressions below assume M >= 2.
  if (m_count == 1) {
    QuantityProfile profile;
    profile.q = {scale};
    return profile;
  }

  // Empty sums are 0 and empty products 1, which covers M = 2.
  std::vector<double> numerators(m_count);
  for (std::size_t m = 0; m < m_count; ++m) {
    double a_m = 0.0;
    double b_m = 1.0;
    if (m == 0) {
      double sum = 0.0;
      for (std::size_t l = 1; l + 1 < m_count; ++l)
        sum += (alpha(0) - alpha(l)) / ((alpha(l) - 1.0) * alpha(0));
      a_m = 1.0 - 1.0 / alpha(0) -
            (1.0 - alpha(m_count - 1)) / alpha(m_count - 1) * sum;
      for (std::size_t l = 1; l + 1 < m_count; ++l) b_m *= 1.0 - 1.0 / alpha(l);
    } else {
      double sum = 0.0;
      for (std::size_t l = 1; l < m_count; ++l) {
        if (l == m) continue;
        sum += (alpha(m) - alpha(l)) / ((alpha(l) - 1.0) * alpha(m));
      }
      a_m = 1.0 - 1.0 / alpha(m) - (1.0 - alpha(0)) / alpha(0) * sum;
      for (std::size_t l = 1; l < m_count; ++l) {
        if (l != m) b_m *= 1.0 - 1.0 / alpha(l);
      }
    }
    numerators[m] = a_m * b_m;
  }

  double denom = 1.0;
  {
    double sum = 0.0;
    for (std::size_t l = 1; l < m_count; ++l) sum += 1.0 / (alpha(l) - 1.0);
    denom = 1.0 - (1.0 - alpha(0)) / alpha(0) * sum;
    for (std::size_t l = 1; l < m_count; ++l) denom *= 1.0 - 1.0 / alpha(l);
  }

  QuantityProfile profile;
  profile.q.resize(m_count);
  for (std::size_t m = 0; m < m_count; ++m)
    profile.q[m] = scale * numerators[m] / denom;
  return profile;
}

QuantityProfile round_uncoded(const QuantityProfile& profile) {
  if (profile.rounded.has_value())
    throw DomainError("round_uncoded: profile already carries rounded quantities");
  QuantityProfile result = profile;
  std::vector<long long> rounded(profile.q.size());
  for (std::size_t m = 0; m < profile.q.size(); ++m) {
    // llround ties away from zero.
    rounded[m] = std::llround(profile.q[m]);
  }
  result.rounded = std::move(rounded);
  return result;
}

NonConvergence::NonConvergence(std::string message, BrTrace trace)
    : std::runtime_error(std::move(message)), trace_(std::move(trace)) {}

}  // namespace cachegame
