#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "taunets/gnumber.hpp"

namespace taunets {

// Cartesian product of open intervals; endpoints may be +-inf.
class Box {
 public:
  struct Interval {
    double lo;
    double hi;
  };

  explicit Box(std::vector<Interval> intervals);
  static Box whole_space(int dim);
  static Box cube(double lo, double hi, int dim);

  int dim() const { return static_cast<int>(iv_.size()); }
  const Interval& interval(int j) const { return iv_[static_cast<std::size_t>(j)]; }
  bool contains(const Eigen::VectorXd& x) const;  // strictly inside the open box
  bool has_finite_endpoint() const;
  bool bounded() const;

  // Clamps x into the box with the given margin on finite sides.
  Eigen::VectorXd clip(const Eigen::VectorXd& x, double margin) const;

  // A fixed interior reference point (midpoint on bounded coordinates).
  Eigen::VectorXd center() const;

 private:
  std::vector<Interval> iv_;
};

// A moderate generalized point of a box: a pure net eps -> Omega.
struct GeneralizedPoint {
  std::function<Eigen::VectorXd(double)> rep;
  Box box;
  std::string label;
};

// Enforces the two invariants at grid points: strict containment in the open
// box and moderate growth |rep(eps)| = O(eps^-N), N <= n_max. Throws.
void validate_point(const GeneralizedPoint& x, const EpsGrid& grid, const Thresholds& thr);

// Componentwise-negligible difference (checked through the Euclidean norm).
bool equivalent(const GeneralizedPoint& x, const GeneralizedPoint& y, const EpsGrid& grid,
                const Thresholds& thr);

// min over finite endpoints of the coordinate distances, as an element of
// the generalized numbers. Requires at least one finite endpoint.
GeneralizedNumber distance_to_boundary(const GeneralizedPoint& x, const EpsGrid& grid,
                                       const Thresholds& thr);

bool has_positive_boundary_distance(const GeneralizedPoint& x, const EpsGrid& grid,
                                    const Thresholds& thr);

// Deterministic-under-seed family: constants, power-law escapes c*eps^-m
// (clamped into finite intervals with margin eps), boundary huggers
// a_j + eps^m and a_j + exp(-1/eps) on finite sides, and the witness points
// eps^-j along the first unbounded direction.
std::vector<GeneralizedPoint> sample_moderate_points(const Box& box, const EpsGrid& grid,
                                                     int count, std::uint64_t seed);

}  // namespace taunets
