#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "taunets/errors.hpp"

namespace taunets {

// Certification thresholds. A finite grid can only certify asymptotic
// statements up to fixed exponent caps; every verdict in this library is
// relative to these caps, which is why they travel together.
struct Thresholds {
  int n_max = 16;   // moderateness: |x_eps| <= slack * eps^-N for some N <= n_max
  int m_max = 24;   // strict majorant scan: |x_eps| > eps^m for some m <= m_max
  int p_max = 8;    // negligibility: holds for every p <= p_max, plus slope gate
  double tail_fraction = 0.5;     // "sufficiently small eps" = smallest fraction of the grid
  double slack_structural = 1.0;  // slack for structural bound sweeps
  double slack_estimate = 16.0;   // slack for classification predicates
  int perturbation_trials = 32;   // representative-stability trials per predicate
  std::uint64_t seed = 0x7a75u;
};

// Finite descending eps grid in (0,1]. Geometric-like spacing is enforced so
// log-log fits stay well conditioned.
class EpsGrid {
 public:
  explicit EpsGrid(std::vector<double> values);

  // eps_k = 2^-k for k = min_exp .. min_exp+count-1 (defaults give 2^-4..2^-40).
  static EpsGrid dyadic(int min_exp = 4, int count = 37);

  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& log_values() const { return log_values_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }

  // Index of the first element of the tail (the smallest ceil(size*fraction)
  // values). The tail is where "for sufficiently small eps" is checked.
  std::size_t tail_begin(double tail_fraction = 0.5) const;

 private:
  std::vector<double> values_;
  std::vector<double> log_values_;
};

// A raw representative of a generalized number: a pure map eps -> R.
// eval must be total on (0,1] and deterministic (same eps, same bits).
struct ScalarNet {
  std::function<double(double)> eval;
  std::string label;

  double operator()(double eps) const { return eval(eps); }
};

// Empirical exponent of a net: least-squares slope of ln|net| against ln eps
// over the grid points where the net is nonzero.
struct OrderEstimate {
  double slope = 0.0;      // +inf sentinel when the net vanishes on the grid
  double residual = 0.0;   // RMS deviation of the log-log fit
  double min_log_value = 0.0;  // smallest ln|net(eps)| seen; -inf if a zero occurred
  int points_used = 0;     // nonzero grid points entering the fit
  bool exact_zero = false; // every grid value was exactly 0
};

// eps^t evaluated in log space; underflows to 0 and overflows to +inf.
double eps_pow(double eps, double t);

// log_eps(x) = ln x / ln eps.
double log_eps(double x, double eps);

// exp(expo * ln base) for base > 0; shared by eps_pow and the DSL power node.
double pow_logspace(double base, double expo);

// Evaluates net(eps), rejecting NaN/inf with an EvaluationError.
double checked_eval(const ScalarNet& net, double eps);

OrderEstimate estimate_order(const ScalarNet& net, const EpsGrid& grid);

// |net(eps)| <= slack * eps^p on the grid tail, compared in log space.
bool is_O_eps_power(const ScalarNet& net, double p, const EpsGrid& grid, double slack,
                    double tail_fraction = 0.5);

// Operational negligibility: is_O_eps_power for every integer p in [0, p_max]
// and estimated slope >= p_max (exact-zero nets short-circuit to true).
bool is_negligible_net(const ScalarNet& net, const EpsGrid& grid, const Thresholds& thr);

// Smallest N <= n_max with |net(eps)| <= slack_estimate * eps^-N on the tail.
std::optional<int> moderate_exponent(const ScalarNet& net, const EpsGrid& grid,
                                     const Thresholds& thr);

// Pointwise net algebra.
ScalarNet net_const(double c);
ScalarNet net_add(ScalarNet a, ScalarNet b);
ScalarNet net_sub(ScalarNet a, ScalarNet b);
ScalarNet net_mul(ScalarNet a, ScalarNet b);
ScalarNet net_neg(ScalarNet a);
ScalarNet net_abs(ScalarNet a);
ScalarNet net_min(std::vector<ScalarNet> nets);

}  // namespace taunets
