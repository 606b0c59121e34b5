#include "taunets/gpoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace taunets {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTrueMin = std::numeric_limits<double>::denorm_min();

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// exp(-1/eps) floored at the smallest positive double, so hugger coordinates
// stay strictly inside an open interval even after underflow.
double subpower_offset(double eps) { return std::max(std::exp(-1.0 / eps), kTrueMin); }
}  // namespace

Box::Box(std::vector<Interval> intervals) : iv_(std::move(intervals)) {
  if (iv_.empty()) throw DomainError("Box: dimension must be >= 1");
  for (const auto& it : iv_) {
    if (std::isnan(it.lo) || std::isnan(it.hi) || !(it.lo < it.hi))
      throw DomainError("Box: each interval needs lo < hi");
  }
}

Box Box::whole_space(int dim) {
  if (dim < 1) throw DomainError("Box: dimension must be >= 1");
  return Box(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{-kInf, kInf}));
}

Box Box::cube(double lo, double hi, int dim) {
  if (dim < 1) throw DomainError("Box: dimension must be >= 1");
  return Box(std::vector<Interval>(static_cast<std::size_t>(dim), Interval{lo, hi}));
}

bool Box::contains(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) return false;
  for (int j = 0; j < dim(); ++j) {
    const auto& it = iv_[static_cast<std::size_t>(j)];
    if (!(x[j] > it.lo && x[j] < it.hi)) return false;
  }
  return true;
}

bool Box::has_finite_endpoint() const {
  for (const auto& it : iv_)
    if (std::isfinite(it.lo) || std::isfinite(it.hi)) return true;
  return false;
}

bool Box::bounded() const {
  for (const auto& it : iv_)
    if (!std::isfinite(it.lo) || !std::isfinite(it.hi)) return false;
  return true;
}

Eigen::VectorXd Box::clip(const Eigen::VectorXd& x, double margin) const {
  Eigen::VectorXd y = x;
  for (int j = 0; j < dim(); ++j) {
    const auto& it = iv_[static_cast<std::size_t>(j)];
    double lo = it.lo, hi = it.hi;
    if (std::isfinite(lo) && std::isfinite(hi)) {
      const double m = std::min(margin, (hi - lo) / 4.0);
      y[j] = std::clamp(y[j], lo + m, hi - m);
    } else if (std::isfinite(lo)) {
      y[j] = std::max(y[j], lo + margin);
    } else if (std::isfinite(hi)) {
      y[j] = std::min(y[j], hi - margin);
    }
  }
  return y;
}

Eigen::VectorXd Box::center() const {
  Eigen::VectorXd c(dim());
  for (int j = 0; j < dim(); ++j) {
    const auto& it = iv_[static_cast<std::size_t>(j)];
    if (std::isfinite(it.lo) && std::isfinite(it.hi))
      c[j] = 0.5 * (it.lo + it.hi);
    else if (std::isfinite(it.lo))
      c[j] = it.lo + 1.0;
    else if (std::isfinite(it.hi))
      c[j] = it.hi - 1.0;
    else
      c[j] = 0.0;
  }
  return c;
}

void validate_point(const GeneralizedPoint& x, const EpsGrid& grid, const Thresholds& thr) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Eigen::VectorXd v = x.rep(grid[i]);
    if (v.size() != x.box.dim())
      throw EvaluationError("point '" + x.label + "': wrong dimension", grid[i]);
    if (!v.allFinite())
      throw EvaluationError("point '" + x.label + "': non-finite coordinate", grid[i]);
    if (!x.box.contains(v))
      throw EvaluationError("point '" + x.label + "': left the open box", grid[i]);
  }
  ScalarNet norm_net{[rep = x.rep](double eps) { return rep(eps).stableNorm(); },
                     "|" + x.label + "|"};
  if (!moderate_exponent(norm_net, grid, thr))
    throw ModerationError("point '" + x.label + "' is not moderate at N_max=" +
                          std::to_string(thr.n_max));
}

bool equivalent(const GeneralizedPoint& x, const GeneralizedPoint& y, const EpsGrid& grid,
                const Thresholds& thr) {
  if (x.box.dim() != y.box.dim()) throw DomainError("equivalent: boxes must share a dimension");
  ScalarNet diff{[rx = x.rep, ry = y.rep](double eps) { return (rx(eps) - ry(eps)).stableNorm(); },
                 "|" + x.label + "-" + y.label + "|"};
  return is_negligible_net(diff, grid, thr);
}

GeneralizedNumber distance_to_boundary(const GeneralizedPoint& x, const EpsGrid& grid,
                                       const Thresholds& thr) {
  if (!x.box.has_finite_endpoint())
    throw DomainError("distance_to_boundary: box has no finite endpoint");
  std::vector<GeneralizedNumber> terms;
  for (int j = 0; j < x.box.dim(); ++j) {
    const auto& it = x.box.interval(j);
    if (std::isfinite(it.lo)) {
      ScalarNet n{[rep = x.rep, j, lo = it.lo](double eps) { return std::abs(rep(eps)[j] - lo); },
                  "|" + x.label + "_" + std::to_string(j + 1) + "-lo|"};
      terms.push_back(make_generalized(std::move(n), grid, thr));
    }
    if (std::isfinite(it.hi)) {
      ScalarNet n{[rep = x.rep, j, hi = it.hi](double eps) { return std::abs(rep(eps)[j] - hi); },
                  "|" + x.label + "_" + std::to_string(j + 1) + "-hi|"};
      terms.push_back(make_generalized(std::move(n), grid, thr));
    }
  }
  return inf_min(terms, grid, thr);
}

bool has_positive_boundary_distance(const GeneralizedPoint& x, const EpsGrid& grid,
                                    const Thresholds& thr) {
  return is_strictly_positive(distance_to_boundary(x, grid, thr), grid, thr).found;
}

std::vector<GeneralizedPoint> sample_moderate_points(const Box& box, const EpsGrid& grid,
                                                     int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("sample_moderate_points: count must be >= 1");
  const int d = box.dim();
  std::mt19937_64 rng(seed);
  std::vector<GeneralizedPoint> out;
  out.reserve(static_cast<std::size_t>(count));

  std::vector<int> finite_sides;   // coordinate j, side encoded as 2j (lo) / 2j+1 (hi)
  std::vector<int> unbounded_dirs; // coordinates open toward +inf or -inf
  for (int j = 0; j < d; ++j) {
    const auto& it = box.interval(j);
    if (std::isfinite(it.lo)) finite_sides.push_back(2 * j);
    if (std::isfinite(it.hi)) finite_sides.push_back(2 * j + 1);
    if (!std::isfinite(it.lo) || !std::isfinite(it.hi)) unbounded_dirs.push_back(j);
  }

  const Eigen::VectorXd base = box.center();
  const double eps_floor = grid.values().back();

  int emitted = 0;
  while (emitted < count) {
    const int kind = emitted % 4;
    if (kind == 0) {
      // constant interior point
      Eigen::VectorXd c(d);
      for (int j = 0; j < d; ++j) {
        const auto& it = box.interval(j);
        if (std::isfinite(it.lo) && std::isfinite(it.hi))
          c[j] = it.lo + (0.1 + 0.8 * u01(rng)) * (it.hi - it.lo);
        else
          c[j] = base[j] + (u01(rng) - 0.5) * 6.0;
      }
      c = box.clip(c, eps_floor);
      out.push_back({[c](double) { return c; }, box, "const"});
    } else if (kind == 1 && !unbounded_dirs.empty()) {
      // power-law escape c*eps^-m along an unbounded coordinate
      const int j = unbounded_dirs[rng() % unbounded_dirs.size()];
      const int m = 1 + static_cast<int>(rng() % 4);
      const double c = 0.5 + 1.5 * u01(rng);
      const auto& it = box.interval(j);
      const double sgn = !std::isfinite(it.hi) ? 1.0 : -1.0;
      Eigen::VectorXd b = base;
      out.push_back({[b, j, m, c, sgn, box](double eps) {
                       Eigen::VectorXd v = b;
                       v[j] = sgn * c * std::exp(-static_cast<double>(m) * std::log(eps));
                       return box.clip(v, eps);
                     },
                     box, "escape:eps^-" + std::to_string(m)});
    } else if (kind == 2 && !finite_sides.empty()) {
      // boundary hugger: a_j + eps^m or a_j + exp(-1/eps) (resp. b_j - ...)
      const int side = finite_sides[rng() % finite_sides.size()];
      const int j = side / 2;
      const bool low = (side % 2) == 0;
      const bool sub_power = (rng() % 4) == 0;
      const int m = 1 + static_cast<int>(rng() % 3);
      const auto& it = box.interval(j);
      const double endpoint = low ? it.lo : it.hi;
      const double width_cap =
          std::isfinite(it.lo) && std::isfinite(it.hi) ? (it.hi - it.lo) / 2.0 : 1.0;
      Eigen::VectorXd b = base;
      out.push_back({[b, j, low, sub_power, m, endpoint, width_cap](double eps) {
                       double off = sub_power
                                        ? subpower_offset(eps)
                                        : std::exp(static_cast<double>(m) * std::log(eps));
                       off = std::min(off, width_cap / 2.0);
                       Eigen::VectorXd v = b;
                       v[j] = low ? endpoint + off : endpoint - off;
                       return v;
                     },
                     box,
                     sub_power ? "hugger:exp(-1/eps)" : "hugger:eps^" + std::to_string(m)});
    } else {
      // counterexample witness eps^-j along the first unbounded direction,
      // or a constant fallback for bounded boxes
      if (!unbounded_dirs.empty()) {
        const int j = unbounded_dirs.front();
        const int jj = 1 + static_cast<int>(rng() % 4);
        const auto& it = box.interval(j);
        const double sgn = !std::isfinite(it.hi) ? 1.0 : -1.0;
        Eigen::VectorXd b = base;
        out.push_back({[b, j, jj, sgn, box](double eps) {
                         Eigen::VectorXd v = b;
                         v[j] = sgn * std::exp(-static_cast<double>(jj) * std::log(eps));
                         return box.clip(v, eps);
                       },
                       box, "witness:eps^-" + std::to_string(jj)});
      } else {
        Eigen::VectorXd c = box.clip(base, eps_floor);
        out.push_back({[c](double) { return c; }, box, "const:center"});
      }
    }
    ++emitted;
  }
  return out;
}

}  // namespace taunets
