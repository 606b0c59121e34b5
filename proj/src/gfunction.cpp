#include "taunets/gfunction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "taunets/parallel.hpp"

namespace taunets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTrueMin = std::numeric_limits<double>::denorm_min();

std::string describe(const Eigen::VectorXd& x) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < x.size() && i < 4; ++i) os << (i ? ", " : "") << x[i];
  if (x.size() > 4) os << ", ...";
  os << "]";
  return os.str();
}

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

// Fixed direction set: axis pairs first, then seeded random units.
std::vector<Eigen::VectorXd> unit_directions(int d, int count, std::uint64_t seed) {
  std::vector<Eigen::VectorXd> dirs;
  if (d == 1) {
    dirs.push_back(Eigen::VectorXd::Constant(1, 1.0));
    dirs.push_back(Eigen::VectorXd::Constant(1, -1.0));
    return dirs;
  }
  for (int i = 0; i < d && static_cast<int>(dirs.size()) < count; ++i) {
    dirs.push_back(Eigen::VectorXd::Unit(d, i));
    if (static_cast<int>(dirs.size()) < count) dirs.push_back(-Eigen::VectorXd::Unit(d, i));
  }
  std::mt19937_64 rng(seed);
  while (static_cast<int>(dirs.size()) < count) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) {
      // Box-Muller; plain std::normal_distribution is avoided so the stream
      // is identical across standard libraries.
      const double a = u01(rng), b = u01(rng);
      v[i] = std::sqrt(-2.0 * std::log(a + 1e-300)) * std::cos(6.283185307179586 * b);
    }
    const double n = v.stableNorm();
    if (n > 1e-12) dirs.push_back(v / n);
  }
  return dirs;
}

struct LogFit {
  double slope = kInf;
  int points = 0;
};

// Least-squares slope of y against x, skipping -inf entries.
LogFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  LogFit out;
  double sx = 0, sy = 0;
  int n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isinf(y[i])) continue;
    sx += x[i];
    sy += y[i];
    ++n;
  }
  out.points = n;
  if (n < 2) return out;
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isinf(y[i])) continue;
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  out.slope = sxy / sxx;
  return out;
}

struct CollectedSamples {
  // One entry per grid index; inner arrays are index-aligned with the plan.
  std::vector<std::vector<double>> log_u;
  std::vector<std::vector<double>> log1p_x;
  int skipped = 0;
};

CollectedSamples collect_samples(const FunctionNet& f, const EpsGrid& grid, const SamplePlan& plan,
                                 SamplePolicy policy) {
  CollectedSamples out;
  out.log_u.resize(grid.size());
  out.log1p_x.resize(grid.size());
  std::vector<int> skipped(grid.size(), 0);
  parallel_for(grid.size(), [&](std::size_t i) {
    const double eps = grid[i];
    const auto& pts = plan.points[i];
    out.log_u[i].reserve(pts.size());
    out.log1p_x[i].reserve(pts.size());
    for (const auto& x : pts) {
      double lu;
      try {
        lu = f.log_abs_at(eps, x);
      } catch (const std::exception&) {
        if (policy == SamplePolicy::propagate) throw;
        ++skipped[i];
        continue;
      }
      out.log_u[i].push_back(lu);
      out.log1p_x[i].push_back(std::log1p(x.stableNorm()));
    }
  });
  for (int s : skipped) out.skipped += s;
  return out;
}

}  // namespace

double FunctionNet::eval_checked(double eps, const Eigen::VectorXd& x) const {
  const double v = eval(eps, x);
  if (std::isnan(v) || std::isinf(v))
    throw EvaluationError("net '" + label + "' returned NaN/inf", eps, describe(x));
  return v;
}

double FunctionNet::log_abs_at(double eps, const Eigen::VectorXd& x) const {
  if (log_abs) {
    const double lv = log_abs(eps, x);
    if (std::isnan(lv) || lv == kInf)
      throw EvaluationError("net '" + label + "': bad log magnitude", eps, describe(x));
    return lv;
  }
  const double v = eval_checked(eps, x);
  return v == 0.0 ? -kInf : std::log(std::abs(v));
}

Eigen::VectorXd FunctionNet::gradient_at(double eps, const Eigen::VectorXd& x) const {
  if (gradient) return gradient(eps, x);
  const double h = 1e-6 * (1.0 + x.stableNorm());
  Eigen::VectorXd g(x.size());
  Eigen::VectorXd xp = x, xm = x;
  for (int i = 0; i < x.size(); ++i) {
    xp[i] = x[i] + h;
    xm[i] = x[i] - h;
    g[i] = (eval_checked(eps, xp) - eval_checked(eps, xm)) / (2.0 * h);
    xp[i] = x[i];
    xm[i] = x[i];
  }
  return g;
}

FunctionNet fn_const(double c, Box box) {
  const int d = box.dim();
  return {[c](double, const Eigen::VectorXd&) { return c; },
          [d](double, const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(d).eval(); },
          [c](double, const Eigen::VectorXd&) { return c == 0.0 ? -kInf : std::log(std::abs(c)); },
          std::move(box), std::to_string(c)};
}

FunctionNet fn_add(const FunctionNet& f, const FunctionNet& g) {
  if (f.box.dim() != g.box.dim()) throw DomainError("fn_add: dimension mismatch");
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> grad;
  if (f.gradient && g.gradient)
    grad = [gf = f.gradient, gg = g.gradient](double eps, const Eigen::VectorXd& x) {
      return (gf(eps, x) + gg(eps, x)).eval();
    };
  return {[ef = f.eval, eg = g.eval](double eps, const Eigen::VectorXd& x) {
            return ef(eps, x) + eg(eps, x);
          },
          grad, nullptr, f.box, "(" + f.label + "+" + g.label + ")"};
}

FunctionNet fn_mul(const FunctionNet& f, const FunctionNet& g) {
  if (f.box.dim() != g.box.dim()) throw DomainError("fn_mul: dimension mismatch");
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> grad;
  if (f.gradient && g.gradient)
    grad = [f, g](double eps, const Eigen::VectorXd& x) {
      return (f.gradient(eps, x) * g.eval(eps, x) + g.gradient(eps, x) * f.eval(eps, x)).eval();
    };
  std::function<double(double, const Eigen::VectorXd&)> labs;
  if (f.log_abs && g.log_abs)
    labs = [lf = f.log_abs, lg = g.log_abs](double eps, const Eigen::VectorXd& x) {
      return lf(eps, x) + lg(eps, x);
    };
  return {[ef = f.eval, eg = g.eval](double eps, const Eigen::VectorXd& x) {
            return ef(eps, x) * eg(eps, x);
          },
          grad, labs, f.box, "(" + f.label + "*" + g.label + ")"};
}

SamplePlan build_sample_plan(const Box& box, const EpsGrid& grid, const XSampleSpec& spec) {
  if (spec.j_max < 1) throw DomainError("XSampleSpec: j_max must be >= 1");
  const int d = box.dim();
  const auto dirs = unit_directions(d, std::max(spec.dirs_per_shell, 2), spec.seed);

  SamplePlan plan;
  plan.points.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid[i];
    const double margin = eps;
    auto& pts = plan.points[i];

    pts.push_back(box.clip(Eigen::VectorXd::Zero(d), margin));
    pts.push_back(box.clip(box.center(), margin));

    // Dyadic shells out to eps^-j_max, plus the anchor radii eps^-j.
    const double log2_inv_eps = -grid.log_values()[i] / std::log(2.0);
    int T = static_cast<int>(std::ceil(spec.j_max * log2_inv_eps));
    if (T > 1020) T = 1020;
    std::vector<double> radii;
    for (int t = spec.t_min; t <= T; ++t) radii.push_back(std::exp2(t));
    for (int j = 1; j <= spec.j_max; ++j) radii.push_back(pow_logspace(eps, -j));
    for (double r : radii)
      for (const auto& dir : dirs) pts.push_back(box.clip(r * dir, margin));

    // Boundary huggers on finite sides.
    const Eigen::VectorXd base = box.clip(box.center(), margin);
    for (int j = 0; j < d; ++j) {
      const auto& it = box.interval(j);
      std::vector<double> offsets;
      for (int p = 1; p <= spec.hugger_power_max; p *= 2) offsets.push_back(pow_logspace(eps, p));
      offsets.push_back(std::max(std::exp(-1.0 / eps), kTrueMin));
      const double width_cap =
          std::isfinite(it.lo) && std::isfinite(it.hi) ? (it.hi - it.lo) / 4.0 : 1.0;
      for (double off : offsets) {
        off = std::min(off, width_cap);
        if (std::isfinite(it.lo)) {
          Eigen::VectorXd v = base;
          v[j] = it.lo + off;
          pts.push_back(v);
        }
        if (std::isfinite(it.hi)) {
          Eigen::VectorXd v = base;
          v[j] = it.hi - off;
          pts.push_back(v);
        }
      }
    }
  }
  return plan;
}

ModerationOutcome check_moderate(const FunctionNet& f, const EpsGrid& grid,
                                 const XSampleSpec& spec, const Thresholds& thr, double slack,
                                 SamplePolicy policy) {
  if (!(slack > 0.0)) throw DomainError("check_moderate: slack must be > 0");
  const SamplePlan plan = build_sample_plan(f.box, grid, spec);
  const CollectedSamples s = collect_samples(f, grid, plan, policy);
  const double log_slack = std::log(slack);
  const std::size_t tb = grid.tail_begin(thr.tail_fraction);

  ModerationOutcome out;
  out.skipped_samples = s.skipped;
  SampleRef worst_at_cap;
  for (int N = 0; N <= thr.n_max; ++N) {
    double worst = -kInf;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = tb; i < grid.size(); ++i) {
      const double le = grid.log_values()[i];
      for (std::size_t j = 0; j < s.log_u[i].size(); ++j) {
        const double margin = s.log_u[i][j] - N * (s.log1p_x[i][j] - le);
        if (margin > worst) {
          worst = margin;
          wi = i;
          wj = j;
        }
      }
    }
    if (worst <= log_slack) {
      out.certificate = ModerationCertificate{N, worst, spec};
      return out;
    }
    if (N == thr.n_max) {
      worst_at_cap.eps = grid[wi];
      // The plan index may differ from the sample index when samples were
      // skipped; recover the point only in the no-skip case.
      if (s.skipped == 0 && wj < plan.points[wi].size()) worst_at_cap.x = plan.points[wi][wj];
    }
  }
  out.witness = worst_at_cap;
  return out;
}

NegligibilityOutcome check_negligible(const FunctionNet& f, const EpsGrid& grid,
                                      const XSampleSpec& spec, const Thresholds& thr,
                                      SamplePolicy policy) {
  const SamplePlan plan = build_sample_plan(f.box, grid, spec);
  const CollectedSamples s = collect_samples(f, grid, plan, policy);
  const double log_slack = std::log(thr.slack_estimate);
  const std::size_t tb = grid.tail_begin(thr.tail_fraction);

  NegligibilityOutcome out;
  out.skipped_samples = s.skipped;

  for (int N = 0; N <= thr.n_max; ++N) {
    // Weighted sup net sup_x |f| / (1+|x|)^N, in log space, over the grid.
    std::vector<double> sup(grid.size(), -kInf);
    for (std::size_t i = 0; i < grid.size(); ++i)
      for (std::size_t j = 0; j < s.log_u[i].size(); ++j)
        sup[i] = std::max(sup[i], s.log_u[i][j] - N * s.log1p_x[i][j]);

    bool ladder_ok = true;
    for (int p = 0; p <= thr.p_max && ladder_ok; ++p)
      for (std::size_t i = tb; i < grid.size(); ++i)
        if (sup[i] > log_slack + p * grid.log_values()[i]) {
          ladder_ok = false;
          break;
        }
    if (!ladder_ok) continue;

    const LogFit fit = fit_slope(grid.log_values(), sup);
    if (fit.points < 2 || fit.slope >= thr.p_max - 1e-9) {
      out.negligible = true;
      out.N = N;
      return out;
    }
  }

  // Worst violating sample at the weight cap, for the report.
  double worst = -kInf;
  SampleRef wref;
  for (std::size_t i = tb; i < grid.size(); ++i)
    for (std::size_t j = 0; j < s.log_u[i].size(); ++j) {
      const double v = s.log_u[i][j] - thr.n_max * s.log1p_x[i][j] -
                       (log_slack + thr.p_max * grid.log_values()[i]);
      if (v > worst) {
        worst = v;
        wref.eps = grid[i];
        if (s.skipped == 0 && j < plan.points[i].size()) wref.x = plan.points[i][j];
      }
    }
  out.witness = wref;
  return out;
}

GeneralizedNumber evaluate_at_point(const FunctionNet& f, const GeneralizedPoint& x,
                                    const EpsGrid& grid, const Thresholds& thr) {
  if (f.box.dim() != x.box.dim()) throw DomainError("evaluate_at_point: dimension mismatch");
  ScalarNet net{[ev = f.eval, rep = x.rep](double eps) { return ev(eps, rep(eps)); },
                f.label + "(" + x.label + ")"};
  return make_generalized(std::move(net), grid, thr);
}

FunctionNet scale_map(const FunctionNet& f, double m) {
  if (f.box.has_finite_endpoint())
    throw DomainError("scale_map: defined on nets over the whole space");
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)> grad;
  if (f.gradient)
    grad = [g = f.gradient, m](double eps, const Eigen::VectorXd& x) {
      const double s = pow_logspace(eps, m);
      return (s * g(eps, (s * x).eval())).eval();
    };
  std::function<double(double, const Eigen::VectorXd&)> labs;
  if (f.log_abs)
    labs = [l = f.log_abs, m](double eps, const Eigen::VectorXd& x) {
      return l(eps, (pow_logspace(eps, m) * x).eval());
    };
  char buf[64];
  std::snprintf(buf, sizeof buf, "s_%g(%s)", m, f.label.size() < 40 ? f.label.c_str() : "f");
  return {[e = f.eval, m](double eps, const Eigen::VectorXd& x) {
            return e(eps, (pow_logspace(eps, m) * x).eval());
          },
          grad, labs, f.box, buf};
}

UnitBallResult unit_ball_strictly_nonzero(const FunctionNet& f, double m, const EpsGrid& grid,
                                          const BallSampleSpec& ball, int n_search_max) {
  if (f.box.has_finite_endpoint())
    throw DomainError("unit_ball_strictly_nonzero: needs a whole-space net");
  const int d = f.box.dim();
  const auto dirs = unit_directions(d, std::max(ball.dirs_per_shell, 2), ball.seed);
  std::vector<Eigen::VectorXd> pts;
  pts.push_back(Eigen::VectorXd::Zero(d));
  for (int t = 0; t < ball.radius_count; ++t)
    for (const auto& dir : dirs) pts.push_back(std::exp2(-t) * dir);

  const std::size_t tb = grid.tail_begin();
  std::vector<double> inf_log(grid.size() - tb, kInf);
  for (std::size_t i = tb; i < grid.size(); ++i) {
    const double s = pow_logspace(grid[i], m);
    for (const auto& x : pts)
      inf_log[i - tb] = std::min(inf_log[i - tb], f.log_abs_at(grid[i], (s * x).eval()));
  }

  UnitBallResult out;
  for (int N = 0; N <= n_search_max; ++N) {
    bool ok = true;
    for (std::size_t i = tb; i < grid.size(); ++i) {
      const double le = grid.log_values()[i];
      // >= with an ulp-scale guard: the counterexample attains the bound
      // exactly at the shell edge.
      if (!(inf_log[i - tb] >= N * le - 1e-9 * (1.0 + std::abs(le)))) {
        ok = false;
        break;
      }
    }
    if (ok) {
      out.found = true;
      out.N = N;
      return out;
    }
  }
  return out;
}

SweepResult pointwise_invertibility_sweep(const FunctionNet& f, const std::vector<int>& dilations,
                                          const EpsGrid& grid, const BallSampleSpec& ball,
                                          int n_search_max) {
  SweepResult out;
  out.all_pass = true;
  for (int dil : dilations) {
    if (dil < 0) throw DomainError("pointwise_invertibility_sweep: dilations must be >= 0");
    const UnitBallResult r =
        unit_ball_strictly_nonzero(f, -static_cast<double>(dil), grid, ball, n_search_max);
    out.per_dilation.push_back({dil, r.found, r.N});
    out.all_pass = out.all_pass && r.found;
  }
  return out;
}

ReciprocalOutcome reciprocal_test(const FunctionNet& f, const EpsGrid& grid,
                                  const XSampleSpec& spec, const Thresholds& thr) {
  const SamplePlan plan = build_sample_plan(f.box, grid, spec);
  const CollectedSamples s = collect_samples(f, grid, plan, SamplePolicy::propagate);
  const double log_slack = std::log(thr.slack_estimate);
  const std::size_t tb = grid.tail_begin(thr.tail_fraction);

  ReciprocalOutcome out;

  // The reciprocal exists only where f never vanishes on the samples.
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < s.log_u[i].size(); ++j)
      if (s.log_u[i][j] == -kInf) {
        out.zero_witness = SampleRef{grid[i], plan.points[i][j]};
        out.detail = "f vanishes at a sample point";
        return out;
      }

  // ln|v| = -ln|f|. Certificate scan over tail samples, then stabilize the
  // candidate with probe points at radii eps^-j, j <= 3N+1, along e1.
  struct Probe {
    std::size_t grid_idx;
    Eigen::VectorXd x;
    double log_v;
    double log1p_x;
  };
  std::vector<Probe> probes;
  const bool can_probe = !f.box.has_finite_endpoint();
  const int d = f.box.dim();

  auto certificate_scan = [&](int& N_out, double& worst_out, SampleRef& witness) -> bool {
    for (int N = 0; N <= thr.n_max; ++N) {
      double worst = -kInf;
      SampleRef w;
      for (std::size_t i = tb; i < grid.size(); ++i) {
        const double le = grid.log_values()[i];
        for (std::size_t j = 0; j < s.log_u[i].size(); ++j) {
          const double margin = -s.log_u[i][j] - N * (s.log1p_x[i][j] - le);
          if (margin > worst) {
            worst = margin;
            w = SampleRef{grid[i], plan.points[i][j]};
          }
        }
      }
      for (const auto& p : probes) {
        const double le = grid.log_values()[p.grid_idx];
        const double margin = p.log_v - N * (p.log1p_x - le);
        if (margin > worst) {
          worst = margin;
          w = SampleRef{grid[p.grid_idx], p.x};
        }
      }
      if (worst <= log_slack) {
        N_out = N;
        worst_out = worst;
        return true;
      }
      if (N == thr.n_max) witness = w;
    }
    return false;
  };

  int N = 0;
  double worst = 0.0;
  SampleRef cap_witness;
  int probed_up_to = 0;
  for (int iter = 0; iter < 9; ++iter) {
    if (!certificate_scan(N, worst, cap_witness)) {
      out.moderation_witness = cap_witness;
      out.detail = "reciprocal breaks the tempered bound";
      return out;
    }
    if (!can_probe || 3 * N + 1 <= probed_up_to) break;
    if (iter == 8) {
      out.moderation_witness = cap_witness;
      out.detail = "reciprocal certificate did not stabilize under probing";
      return out;
    }
    for (int j = probed_up_to + 1; j <= 3 * N + 1; ++j) {
      for (std::size_t i = tb; i < grid.size(); ++i) {
        const double r = pow_logspace(grid[i], -static_cast<double>(j));
        if (!std::isfinite(r)) continue;
        Eigen::VectorXd x = r * Eigen::VectorXd::Unit(d, 0);
        double lu;
        try {
          lu = f.log_abs_at(grid[i], x);
        } catch (const std::exception&) {
          continue;  // probe outside the net's numeric range; inconclusive
        }
        if (lu == -kInf) {
          out.zero_witness = SampleRef{grid[i], x};
          out.detail = "f vanishes at a probe point";
          return out;
        }
        probes.push_back({i, std::move(x), -lu, std::log1p(r)});
      }
    }
    probed_up_to = 3 * N + 1;
  }
  out.v_certificate = ModerationCertificate{N, worst, spec};

  // Residual f*v - 1 with v the pointwise inverse. Where |ln f| is too large
  // for a double the product is exact in log space and the residual is zero;
  // elsewhere the floating-point product is flushed at machine noise.
  std::vector<double> resid(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < plan.points[i].size(); ++j) {
      if (std::abs(s.log_u[i][j]) > 700.0) continue;
      const double u = f.eval_checked(grid[i], plan.points[i][j]);
      if (u == 0.0) continue;  // excluded above; keep guard for skip policies
      double r = std::abs(u * (1.0 / u) - 1.0);
      if (r <= 4.0 * std::numeric_limits<double>::epsilon()) r = 0.0;
      resid[i] = std::max(resid[i], r);
    }
  }
  bool resid_ok = true;
  for (int p = 0; p <= thr.p_max && resid_ok; ++p)
    for (std::size_t i = tb; i < grid.size(); ++i)
      if (resid[i] != 0.0 &&
          std::log(resid[i]) > log_slack + p * grid.log_values()[i]) {
        resid_ok = false;
        break;
      }
  if (resid_ok) {
    std::vector<double> lresid(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
      lresid[i] = resid[i] == 0.0 ? -kInf : std::log(resid[i]);
    const LogFit fit = fit_slope(grid.log_values(), lresid);
    resid_ok = fit.points < 2 || fit.slope >= thr.p_max - 1e-9;
  }
  out.residual_negligible = resid_ok;
  out.invertible = resid_ok;
  if (!resid_ok) out.detail = "residual f*(1/f) - 1 is not negligible";
  return out;
}

std::optional<GeneralizedPoint> witness_noninvertible_point(const FunctionNet& f,
                                                            const EpsGrid& grid,
                                                            const XSampleSpec& spec,
                                                            const Thresholds& thr,
                                                            int k_max) {
  if (k_max < 1) throw DomainError("witness_noninvertible_point: k_max must be >= 1");
  const SamplePlan plan = build_sample_plan(f.box, grid, spec);

  struct Segment {
    double eps;
    Eigen::VectorXd x;
  };
  std::vector<Segment> segs;
  std::size_t next_idx = 0;
  for (int k = 1; k <= k_max; ++k) {
    bool found = false;
    for (std::size_t i = next_idx; i < grid.size() && !found; ++i) {
      const double bound = static_cast<double>(k) * grid.log_values()[i];
      for (const auto& x : plan.points[i]) {
        double lu;
        try {
          lu = f.log_abs_at(grid[i], x);
        } catch (const std::exception&) {
          continue;
        }
        if (lu < bound) {
          segs.push_back({grid[i], x});
          next_idx = i + 1;
          found = true;
          break;
        }
      }
    }
    if (!found) return std::nullopt;
  }

  (void)thr;
  // Piecewise-constant point: x_eps = x_k on [eps_k, eps_{k-1}), continued by
  // the last value below the ladder, so every dip sits on a grid point.
  auto rep = [segs](double eps) {
    std::size_t k = segs.size() - 1;
    for (std::size_t i = 0; i < segs.size(); ++i)
      if (eps >= segs[i].eps) {
        k = i;
        break;
      }
    return segs[k].x;
  };
  return GeneralizedPoint{rep, f.box, "witness-point(" + f.label + ")"};
}

NudgeReport interior_nudge_check(const FunctionNet& f, const GeneralizedPoint& x, int m,
                                 const EpsGrid& grid, const Thresholds& thr) {
  if (!f.box.has_finite_endpoint())
    throw DomainError("interior_nudge_check: box must differ from the whole space");
  if (f.box.dim() != x.box.dim()) throw DomainError("interior_nudge_check: dimension mismatch");
  if (m < 0) throw DomainError("interior_nudge_check: m must be >= 0");
  const int d = f.box.dim();

  auto nudged = [&, m](double eps) -> Eigen::VectorXd {
    const Eigen::VectorXd xv = x.rep(eps);
    const double step = pow_logspace(eps, m);
    Eigen::VectorXd y = xv;
    for (int j = 0; j < d; ++j) {
      const auto& it = f.box.interval(j);
      const double dist_lo = std::isfinite(it.lo) ? xv[j] - it.lo : kInf;
      const double dist_hi = std::isfinite(it.hi) ? it.hi - xv[j] : kInf;
      // Flee the nearest finite endpoint; ties toward +1.
      double sgn = dist_lo < dist_hi ? 1.0 : (dist_hi < dist_lo ? -1.0 : 1.0);
      y[j] = xv[j] + sgn * step;
      if (!(y[j] > it.lo && y[j] < it.hi)) {
        y[j] = xv[j] - sgn * step;
        if (!(y[j] > it.lo && y[j] < it.hi))
          throw ConstructionError("interior_nudge_check: no sign keeps y inside", eps);
      }
    }
    return y;
  };

  NudgeReport rep;
  rep.m = m;
  {
    const double deep = grid.values().back();
    const Eigen::VectorXd xv = x.rep(deep);
    const Eigen::VectorXd yv = nudged(deep);
    for (int j = 0; j < d; ++j) rep.signs_at_deepest.push_back(yv[j] >= xv[j] ? 1 : -1);
  }

  GeneralizedPoint y{nudged, f.box, x.label + "+nudge"};
  rep.distance_positive = has_positive_boundary_distance(y, grid, thr);

  auto boundary_dist = [&](const Eigen::VectorXd& v) {
    double dmin = kInf;
    for (int j = 0; j < d; ++j) {
      const auto& it = f.box.interval(j);
      if (std::isfinite(it.lo)) dmin = std::min(dmin, std::abs(v[j] - it.lo));
      if (std::isfinite(it.hi)) dmin = std::min(dmin, std::abs(v[j] - it.hi));
    }
    return dmin;
  };

  auto segment_sup = [&](double eps, const Eigen::VectorXd& xv, const Eigen::VectorXd& yv) {
    double sup = 0.0;
    for (int t = 0; t <= 8; ++t) {
      const Eigen::VectorXd z = xv + (static_cast<double>(t) / 8.0) * (yv - xv);
      sup = std::max(sup, f.gradient_at(eps, z).stableNorm());
    }
    return sup;
  };

  const std::size_t tb = grid.tail_begin(thr.tail_fraction);
  rep.worst_distance_margin = kInf;
  rep.worst_bound_gap = -kInf;
  rep.bound_holds = true;
  const double sqrt_d = std::sqrt(static_cast<double>(d));
  for (std::size_t i = tb; i < grid.size(); ++i) {
    const double eps = grid[i];
    const double step = pow_logspace(eps, m);
    const Eigen::VectorXd xv = x.rep(eps);
    const Eigen::VectorXd yv = nudged(eps);
    rep.worst_distance_margin =
        std::min(rep.worst_distance_margin, (boundary_dist(yv) - step) / step);
    const double lhs = std::abs(f.eval_checked(eps, xv));
    const double rhs = std::abs(f.eval_checked(eps, yv)) + segment_sup(eps, xv, yv) * sqrt_d * step;
    rep.worst_bound_gap = std::max(rep.worst_bound_gap, lhs - rhs);
    if (lhs > rhs * (1.0 + 1e-9) + kTrueMin) rep.bound_holds = false;
  }

  ScalarNet rhs_net{[&f, &x, nudged, segment_sup, m, sqrt_d](double eps) {
                      const Eigen::VectorXd xv = x.rep(eps);
                      const Eigen::VectorXd yv = nudged(eps);
                      const double step = pow_logspace(eps, m);
                      return std::abs(f.eval(eps, yv)) + segment_sup(eps, xv, yv) * sqrt_d * step;
                    },
                    "nudge-rhs"};
  rep.certified_slope = estimate_order(rhs_net, grid).slope;

  ScalarNet grad_net{[&f, &x, nudged, segment_sup](double eps) {
                       return segment_sup(eps, x.rep(eps), nudged(eps));
                     },
                     "segment-grad-sup"};
  ScalarNet growth_net{[&x, nudged](double eps) {
                         return std::max(x.rep(eps).stableNorm(), nudged(eps).stableNorm());
                       },
                       "segment-growth"};
  rep.grad_N = moderate_exponent(grad_net, grid, thr).value_or(thr.n_max + 1);
  rep.point_N = moderate_exponent(growth_net, grid, thr).value_or(thr.n_max + 1);
  rep.exponent_budget = static_cast<double>(m) - rep.grad_N * (2.0 + rep.point_N);
  return rep;
}

}  // namespace taunets
