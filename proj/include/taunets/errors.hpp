#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace taunets {

// Argument outside the mathematical domain of an operation (eps not in (0,1),
// log of a non-positive number, box without finite endpoints, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A net produced NaN/inf (or hit a domain violation) while being swept over a
// grid. Carries the offending eps and, for function nets, a description of x.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, double eps)
      : std::runtime_error(what + " (at eps=" + std::to_string(eps) + ")"), eps_(eps) {}
  EvaluationError(const std::string& what, double eps, std::string x_desc)
      : std::runtime_error(what + " (at eps=" + std::to_string(eps) + ", x=" + x_desc + ")"),
        eps_(eps),
        x_desc_(std::move(x_desc)) {}

  double eps() const { return eps_; }
  const std::optional<std::string>& x_desc() const { return x_desc_; }

 private:
  double eps_;
  std::optional<std::string> x_desc_;
};

// A result failed the moderateness certificate at the configured N cap.
class ModerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A derived object (nudged point, generated sample) could not be placed
// inside its box at some grid eps.
class ConstructionError : public std::runtime_error {
 public:
  ConstructionError(const std::string& what, double eps)
      : std::runtime_error(what + " (at eps=" + std::to_string(eps) + ")"), eps_(eps) {}
  double eps() const { return eps_; }

 private:
  double eps_;
};

}  // namespace taunets
