#pragma once

#include <stdexcept>
#include <string>

namespace cachegame {

/// An argument is outside the mathematical domain of an operation
/// (negative quantity, price outside (0,1), ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// The equilibrium linear system could not be solved. Unreachable for
/// validated markets (diagonal dominance); kept as an internal error.
class SingularSystem : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The optimal price falls outside (0,1): capacity is too small relative
/// to demand. Surfaced, never clamped.
class InfeasibleMarket : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cachegame
