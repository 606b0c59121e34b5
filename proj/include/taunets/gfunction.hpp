#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "taunets/gpoint.hpp"

namespace taunets {

// Representative of a tempered generalized function: a pure map
// (eps, x) -> R, smooth in x. gradient and log_abs are optional extras:
// log_abs makes order comparisons exact far outside double range (power-law
// nets like the counterexample provide it); everything falls back to the
// plain evaluation when they are absent.
struct FunctionNet {
  std::function<double(double, const Eigen::VectorXd&)> eval;
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> gradient;  // may be empty
  std::function<double(double, const Eigen::VectorXd&)> log_abs;            // may be empty
  Box box;
  std::string label;

  bool has_gradient() const { return static_cast<bool>(gradient); }
  double eval_checked(double eps, const Eigen::VectorXd& x) const;
  // ln|f(eps,x)|; -inf encodes an exact zero.
  double log_abs_at(double eps, const Eigen::VectorXd& x) const;
  // Analytic gradient when present, else central differences with
  // step h = 1e-6 * (1 + |x|).
  Eigen::VectorXd gradient_at(double eps, const Eigen::VectorXd& x) const;
};

FunctionNet fn_const(double c, Box box);
FunctionNet fn_add(const FunctionNet& f, const FunctionNet& g);
FunctionNet fn_mul(const FunctionNet& f, const FunctionNet& g);

// Deterministic finite stand-in for sup over Omega: dyadic radial shells
// 2^t, t = t_min..T(eps), scaled so the outermost shell reaches eps^-j_max,
// the anchor radii eps^-j themselves, a fixed direction set, everything
// clipped into the box, plus boundary huggers on finite sides.
struct XSampleSpec {
  int j_max = 6;
  int t_min = -2;
  int dirs_per_shell = 4;
  int hugger_power_max = 8;  // offsets eps^1, eps^2, eps^4, ... up to this
  std::uint64_t seed = 0x53edu;
};

// Resolved sample points, one list per grid index.
struct SamplePlan {
  std::vector<std::vector<Eigen::VectorXd>> points;
};
SamplePlan build_sample_plan(const Box& box, const EpsGrid& grid, const XSampleSpec& spec);

struct SampleRef {
  double eps = 0.0;
  Eigen::VectorXd x;
};

struct ModerationCertificate {
  int N = 0;
  double worst_margin = 0.0;  // max over samples of ln|u| - N*ln((1+|x|)/eps) - ln(slack)
  XSampleSpec spec;
};

struct ModerationOutcome {
  std::optional<ModerationCertificate> certificate;
  std::optional<SampleRef> witness;  // worst sample at N = n_max when no N works
  int skipped_samples = 0;
  bool moderate() const { return certificate.has_value(); }
};

// Whether samples that throw domain/evaluation errors abort the sweep or are
// skipped (counted); the CLI classifier skips, library callers propagate.
enum class SamplePolicy { propagate, skip_errors };

ModerationOutcome check_moderate(const FunctionNet& f, const EpsGrid& grid,
                                 const XSampleSpec& spec, const Thresholds& thr, double slack,
                                 SamplePolicy policy = SamplePolicy::propagate);

struct NegligibilityOutcome {
  bool negligible = false;
  std::optional<int> N;              // weight exponent that works
  std::optional<SampleRef> witness;  // worst violating sample otherwise
  int skipped_samples = 0;
};

NegligibilityOutcome check_negligible(const FunctionNet& f, const EpsGrid& grid,
                                      const XSampleSpec& spec, const Thresholds& thr,
                                      SamplePolicy policy = SamplePolicy::propagate);

// Value net eps -> f(eps, x_eps) with a moderateness certificate.
GeneralizedNumber evaluate_at_point(const FunctionNet& f, const GeneralizedPoint& x,
                                    const EpsGrid& grid, const Thresholds& thr);

// The scaling map: eval'(eps, x) = f(eps, eps^m x). Requires box = R^d.
FunctionNet scale_map(const FunctionNet& f, double m);

// Dyadic radii {0} u {2^-t} covering the closed unit ball.
struct BallSampleSpec {
  int radius_count = 5;
  int dirs_per_shell = 4;
  std::uint64_t seed = 0xba11u;
};

struct UnitBallResult {
  bool found = false;
  std::optional<int> N;  // smallest N with sampled inf |f(eps, eps^m x)| >= eps^N on the tail
};

UnitBallResult unit_ball_strictly_nonzero(const FunctionNet& f, double m, const EpsGrid& grid,
                                          const BallSampleSpec& ball, int n_search_max = 36);

struct DilationResult {
  int dilation = 0;  // tests f on the ball of radius eps^-dilation
  bool pass = false;
  std::optional<int> N;
};

struct SweepResult {
  std::vector<DilationResult> per_dilation;
  bool all_pass = false;
};

SweepResult pointwise_invertibility_sweep(const FunctionNet& f, const std::vector<int>& dilations,
                                          const EpsGrid& grid, const BallSampleSpec& ball,
                                          int n_search_max = 36);

struct ReciprocalOutcome {
  bool invertible = false;
  std::optional<ModerationCertificate> v_certificate;
  bool residual_negligible = false;
  std::optional<SampleRef> zero_witness;        // sample where f vanished
  std::optional<SampleRef> moderation_witness;  // sample/probe where 1/f broke the bound
  std::string detail;
};

// Forms the canonical candidate v = 1/f at the samples, requires v moderate
// and f*v - 1 negligible. After any candidate certificate N is found, probe
// points along e1 at radii eps^-j, j <= 3N+1, are folded into the sample set
// until the certificate stabilizes; this is what defeats nets whose
// reciprocal only blows up beyond the default shell range.
ReciprocalOutcome reciprocal_test(const FunctionNet& f, const EpsGrid& grid,
                                  const XSampleSpec& spec, const Thresholds& thr);

// Searches for grid points eps_k (strictly descending, one per exponent k)
// and samples x_k with |f(eps_k, x_k)| < eps_k^k, k = 1..k_max, and returns
// the piecewise-constant generalized point built from them; none if the
// ladder stalls.
std::optional<GeneralizedPoint> witness_noninvertible_point(const FunctionNet& f,
                                                            const EpsGrid& grid,
                                                            const XSampleSpec& spec,
                                                            const Thresholds& thr,
                                                            int k_max = 24);

struct NudgeReport {
  int m = 0;
  std::vector<int> signs_at_deepest;  // +-1 per coordinate at the deepest grid eps
  bool distance_positive = false;     // has_positive_boundary_distance(y)
  double worst_distance_margin = 0.0; // min over tail of (d(y) - eps^m)/eps^m
  bool bound_holds = false;           // |f(x)| <= |f(y)| + seg_sup * sqrt(d) * eps^m on tail
  double worst_bound_gap = 0.0;       // max of lhs - rhs, log-scale-free
  double certified_slope = 0.0;       // order estimate of the right-hand side net
  int grad_N = 0;                     // moderateness exponent of the segment gradient sup
  int point_N = 0;                    // growth exponent of the segment points
  double exponent_budget = 0.0;       // m - grad_N * (2 + point_N)
};

// Builds the nudged point y_eps = x_eps + sum_i delta_i eps^m e_i (signs flee
// the nearest finite endpoint), checks it keeps strictly positive boundary
// distance, and verifies the mean-value bound
// |f(x_eps)| <= |f(y_eps)| + sup_segment |grad f| * sqrt(d) * eps^m.
NudgeReport interior_nudge_check(const FunctionNet& f, const GeneralizedPoint& x, int m,
                                 const EpsGrid& grid, const Thresholds& thr);

}  // namespace taunets
