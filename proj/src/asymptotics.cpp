#include "taunets/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace taunets {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

EpsGrid::EpsGrid(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 8) throw DomainError("EpsGrid: need at least 8 points");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double v = values_[i];
    if (!(v > 0.0 && v <= 1.0)) throw DomainError("EpsGrid: values must lie in (0,1]");
    if (i > 0) {
      if (!(v < values_[i - 1])) throw DomainError("EpsGrid: values must be strictly decreasing");
      // Geometric-like spacing keeps the log-log fit well conditioned.
      if (v / values_[i - 1] > 0.95)
        throw DomainError("EpsGrid: consecutive ratio too close to 1");
    }
  }
  log_values_.reserve(values_.size());
  for (double v : values_) log_values_.push_back(std::log(v));
}

EpsGrid EpsGrid::dyadic(int min_exp, int count) {
  if (min_exp < 1 || count < 8) throw DomainError("EpsGrid::dyadic: min_exp >= 1, count >= 8");
  if (min_exp + count - 1 > 1000) throw DomainError("EpsGrid::dyadic: exponent range too deep");
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) v[static_cast<std::size_t>(i)] = std::exp2(-(min_exp + i));
  return EpsGrid(std::move(v));
}

std::size_t EpsGrid::tail_begin(double tail_fraction) const {
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
    throw DomainError("tail_fraction must lie in (0,1]");
  const std::size_t n = values_.size();
  auto tail_count = static_cast<std::size_t>(std::ceil(static_cast<double>(n) * tail_fraction));
  if (tail_count == 0) tail_count = 1;
  if (tail_count > n) tail_count = n;
  return n - tail_count;
}

double pow_logspace(double base, double expo) {
  if (!(base > 0.0)) throw DomainError("pow_logspace: base must be positive");
  if (expo == 0.0) return 1.0;
  return std::exp(expo * std::log(base));
}

double eps_pow(double eps, double t) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps_pow: eps must lie in (0,1)");
  return pow_logspace(eps, t);
}

double log_eps(double x, double eps) {
  if (!(x > 0.0)) throw DomainError("log_eps: x must be positive");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("log_eps: eps must lie in (0,1)");
  return std::log(x) / std::log(eps);
}

double checked_eval(const ScalarNet& net, double eps) {
  const double v = net.eval(eps);
  if (std::isnan(v) || std::isinf(v))
    throw EvaluationError("net '" + net.label + "' returned NaN/inf", eps);
  return v;
}

OrderEstimate estimate_order(const ScalarNet& net, const EpsGrid& grid) {
  OrderEstimate est;
  est.min_log_value = kInf;

  // Fixed sequential order over the grid; sums do not depend on scheduling.
  std::vector<std::pair<double, double>> pts;  // (ln eps, ln|v|)
  pts.reserve(grid.size());
  bool saw_zero = false;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = checked_eval(net, grid[i]);
    if (v == 0.0) {
      saw_zero = true;
      continue;
    }
    pts.emplace_back(grid.log_values()[i], std::log(std::abs(v)));
  }
  if (saw_zero) est.min_log_value = -kInf;
  for (auto& p : pts) est.min_log_value = std::min(est.min_log_value, p.second);

  est.points_used = static_cast<int>(pts.size());
  if (pts.empty()) {
    est.exact_zero = true;
    est.slope = kInf;
    est.residual = 0.0;
    return est;
  }
  if (pts.size() < 2) {
    // Not enough nonzero points to fit a slope; treat as faster than any power.
    est.slope = kInf;
    est.residual = 0.0;
    return est;
  }

  double sx = 0, sy = 0;
  for (auto& p : pts) {
    sx += p.first;
    sy += p.second;
  }
  const double n = static_cast<double>(pts.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (auto& p : pts) {
    sxx += (p.first - mx) * (p.first - mx);
    sxy += (p.first - mx) * (p.second - my);
  }
  est.slope = sxy / sxx;
  double ss = 0;
  for (auto& p : pts) {
    const double r = p.second - (my + est.slope * (p.first - mx));
    ss += r * r;
  }
  est.residual = std::sqrt(ss / n);
  return est;
}

bool is_O_eps_power(const ScalarNet& net, double p, const EpsGrid& grid, double slack,
                    double tail_fraction) {
  if (!(slack >= 0.0)) throw DomainError("is_O_eps_power: slack must be >= 0");
  const double log_slack = slack == 0.0 ? -kInf : std::log(slack);
  for (std::size_t i = grid.tail_begin(tail_fraction); i < grid.size(); ++i) {
    const double v = checked_eval(net, grid[i]);
    if (v == 0.0) continue;  // |0| <= anything
    if (std::log(std::abs(v)) > log_slack + p * grid.log_values()[i]) return false;
  }
  return true;
}

bool is_negligible_net(const ScalarNet& net, const EpsGrid& grid, const Thresholds& thr) {
  const OrderEstimate est = estimate_order(net, grid);
  if (est.exact_zero) return true;
  for (int p = 0; p <= thr.p_max; ++p)
    if (!is_O_eps_power(net, p, grid, thr.slack_estimate, thr.tail_fraction)) return false;
  return est.slope >= static_cast<double>(thr.p_max) - 1e-9;
}

std::optional<int> moderate_exponent(const ScalarNet& net, const EpsGrid& grid,
                                     const Thresholds& thr) {
  for (int N = 0; N <= thr.n_max; ++N)
    if (is_O_eps_power(net, -static_cast<double>(N), grid, thr.slack_estimate, thr.tail_fraction))
      return N;
  return std::nullopt;
}

ScalarNet net_const(double c) {
  return {[c](double) { return c; }, std::to_string(c)};
}

ScalarNet net_add(ScalarNet a, ScalarNet b) {
  auto fa = a.eval, fb = b.eval;
  return {[fa, fb](double eps) { return fa(eps) + fb(eps); }, "(" + a.label + "+" + b.label + ")"};
}

ScalarNet net_sub(ScalarNet a, ScalarNet b) {
  auto fa = a.eval, fb = b.eval;
  return {[fa, fb](double eps) { return fa(eps) - fb(eps); }, "(" + a.label + "-" + b.label + ")"};
}

ScalarNet net_mul(ScalarNet a, ScalarNet b) {
  auto fa = a.eval, fb = b.eval;
  return {[fa, fb](double eps) { return fa(eps) * fb(eps); }, "(" + a.label + "*" + b.label + ")"};
}

ScalarNet net_neg(ScalarNet a) {
  auto fa = a.eval;
  return {[fa](double eps) { return -fa(eps); }, "(-" + a.label + ")"};
}

ScalarNet net_abs(ScalarNet a) {
  auto fa = a.eval;
  return {[fa](double eps) { return std::abs(fa(eps)); }, "|" + a.label + "|"};
}

ScalarNet net_min(std::vector<ScalarNet> nets) {
  if (nets.empty()) throw DomainError("net_min: empty list");
  std::string label = "min(";
  for (std::size_t i = 0; i < nets.size(); ++i)
    label += (i ? "," : "") + nets[i].label;
  label += ")";
  std::vector<std::function<double(double)>> evals;
  evals.reserve(nets.size());
  for (auto& n : nets) evals.push_back(n.eval);
  return {[evals](double eps) {
            double m = evals[0](eps);
            for (std::size_t i = 1; i < evals.size(); ++i) m = std::min(m, evals[i](eps));
            return m;
          },
          std::move(label)};
}

}  // namespace taunets
