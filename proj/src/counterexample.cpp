#include "taunets/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "taunets/parallel.hpp"

namespace taunets {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double phi(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double phi_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

void require_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("eps must lie in (0,1)");
}

// ln(1 + e^s), stable for large s.
double softplus(double s) {
  if (s > 0.0) return s + std::log1p(std::exp(-s));
  return std::log1p(std::exp(s));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double CutoffSigma::operator()(double r) const {
  if (r < 0.0) throw DomainError("sigma: radius must be >= 0");
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  const double a = phi(outer - r);
  const double b = phi(r - inner);
  return a / (a + b);
}

double sigma(double r) { return CutoffSigma{}(r); }

double sigma_prime(double r) {
  if (r < 0.0) throw DomainError("sigma_prime: radius must be >= 0");
  if (r <= 0.5 || r >= 1.0) return 0.0;
  const double a = phi(1.0 - r);
  const double b = phi(r - 0.5);
  const double da = -phi_prime(1.0 - r);
  const double db = phi_prime(r - 0.5);
  const double denom = a + b;
  return (da * b - a * db) / (denom * denom);
}

double log_g_radial(double eps, double log_r) {
  require_eps(eps);
  return log_r * log_r / std::log(eps);
}

double g_eps(double eps, const Eigen::VectorXd& x) {
  require_eps(eps);
  const double r = x.stableNorm();
  if (!(r > 0.0)) throw DomainError("g_eps: undefined at x = 0");
  return std::exp(log_g_radial(eps, std::log(r)));
}

Eigen::VectorXd grad_g_eps(double eps, const Eigen::VectorXd& x) {
  require_eps(eps);
  const double r = x.stableNorm();
  if (!(r >= 0.5)) throw DomainError("grad_g_eps: valid for |x| >= 1/2");
  const double g = std::exp(log_g_radial(eps, std::log(r)));
  // 2 g x_i ln r / (r^2 ln eps), evaluated as (x/r) * (2 g ln r / (r ln eps))
  // so huge radii cannot overflow the intermediate r^2.
  const double scale = 2.0 * g * std::log(r) / (r * std::log(eps));
  return (x / r) * scale;
}

double u_radial(double eps, double r) {
  require_eps(eps);
  if (!(r >= 0.0)) throw DomainError("u_radial: radius must be >= 0");
  if (r <= 0.5) return 1.0;  // the cutoff branch; g is never touched here
  if (r < 1.0) {
    const double s = sigma(r);
    const double g = std::exp(log_g_radial(eps, std::log(r)));
    return (1.0 - s) * g + s;
  }
  return std::exp(log_g_radial(eps, std::log(r)));
}

double log_u_radial(double eps, double log_r) {
  require_eps(eps);
  if (log_r <= std::log(0.5)) return 0.0;
  if (log_r >= 0.0) return log_g_radial(eps, log_r);
  const double r = std::exp(log_r);
  const double s = sigma(r);
  const double g = std::exp(log_g_radial(eps, log_r));
  return std::log((1.0 - s) * g + s);  // value lies in (1/2, 1]
}

double u_eps(double eps, const Eigen::VectorXd& x) { return u_radial(eps, x.stableNorm()); }

double u1_eps(double eps, double x1) {
  if (!(x1 > 0.0)) throw DomainError("u1_eps: x1 must be positive");
  return u_radial(eps, x1);
}

FunctionNet counterexample_net(int dim) {
  Box box = Box::whole_space(dim);
  auto grad = [](double eps, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    const double r = x.stableNorm();
    if (r <= 0.5) return Eigen::VectorXd::Zero(x.size());
    if (r >= 1.0) return grad_g_eps(eps, x);
    const double s = sigma(r);
    const double ds = sigma_prime(r);
    const double g = std::exp(log_g_radial(eps, std::log(r)));
    return ((ds * (1.0 - g) / r) * x + (1.0 - s) * grad_g_eps(eps, x)).eval();
  };
  auto labs = [](double eps, const Eigen::VectorXd& x) {
    const double r = x.stableNorm();
    return log_u_radial(eps, r > 0.0 ? std::log(r) : -kInf);
  };
  return {[](double eps, const Eigen::VectorXd& x) { return u_eps(eps, x); }, grad, labs,
          std::move(box), "u"};
}

FunctionNet halfspace_net(int dim) {
  std::vector<Box::Interval> iv(static_cast<std::size_t>(dim), Box::Interval{-kInf, kInf});
  iv[0] = Box::Interval{0.0, kInf};
  Box box{std::move(iv)};
  auto grad = [dim](double eps, const Eigen::VectorXd& x) -> Eigen::VectorXd {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(dim);
    const double x1 = x[0];
    if (x1 <= 0.5 || !(x1 > 0.0)) return g;
    const double gg = std::exp(log_g_radial(eps, std::log(x1)));
    const double dg = 2.0 * gg * std::log(x1) / (x1 * std::log(eps));
    if (x1 >= 1.0) {
      g[0] = dg;
    } else {
      g[0] = sigma_prime(x1) * (1.0 - gg) + (1.0 - sigma(x1)) * dg;
    }
    return g;
  };
  auto labs = [](double eps, const Eigen::VectorXd& x) {
    if (!(x[0] > 0.0)) throw DomainError("u1: x1 must be positive");
    return log_u_radial(eps, std::log(x[0]));
  };
  return {[](double eps, const Eigen::VectorXd& x) { return u1_eps(eps, x[0]); }, grad, labs,
          std::move(box), "u1"};
}

VerificationReport verify_estimate_61(const RunConfig& cfg, int radii_per_shell) {
  if (radii_per_shell < 2) throw DomainError("verify_estimate_61: need >= 2 radii per shell");
  VerificationReport rep;
  rep.suite = "estimate-61";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const int j_max = cfg.j_max;

  struct Worst {
    double lower = kInf;        // min over samples of (ln u - (j+1)^2 ln eps)/|ln eps|
    double upper = kInf;        // min over samples of (j^2 ln eps - ln u)/|ln eps|
    double edge_abs = 0.0;      // max |upper margin| at the shell left edges
    double eps_lower = 0.0, eps_upper = 0.0;
    bool positive = true;
  };
  std::vector<Worst> per_eps(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    const double eps = grid[i];
    const double le = grid.log_values()[i];
    Worst w;
    for (int j = 0; j <= j_max; ++j) {
      for (int t = 0; t < radii_per_shell; ++t) {
        // ln r spans [j |ln eps|, (j+1)|ln eps|); the left edge is included.
        const double frac = static_cast<double>(t) / radii_per_shell;
        const double log_r = -(static_cast<double>(j) + frac) * le;
        const double lu = log_u_radial(eps, log_r);
        if (!std::isfinite(lu)) w.positive = false;
        const double lower = (lu - (j + 1.0) * (j + 1.0) * le) / std::abs(le);
        const double upper = (static_cast<double>(j) * j * le - lu) / std::abs(le);
        if (lower < w.lower) {
          w.lower = lower;
          w.eps_lower = eps;
        }
        if (upper < w.upper) {
          w.upper = upper;
          w.eps_upper = eps;
        }
        if (t == 0) w.edge_abs = std::max(w.edge_abs, std::abs(upper));
      }
    }
    per_eps[i] = w;
  });

  Worst w;
  for (const auto& p : per_eps) {
    if (p.lower < w.lower) {
      w.lower = p.lower;
      w.eps_lower = p.eps_lower;
    }
    if (p.upper < w.upper) {
      w.upper = p.upper;
      w.eps_upper = p.eps_upper;
    }
    w.edge_abs = std::max(w.edge_abs, p.edge_abs);
    w.positive = w.positive && p.positive;
  }

  rep.add({"61.lower_strict", w.lower > 0.0, w.lower, w.eps_lower, "",
           "min scale-free margin of ln u against (j+1)^2 ln eps"});
  rep.add({"61.upper", w.upper >= -1e-12, w.upper, w.eps_upper, "",
           "min scale-free margin of j^2 ln eps against ln u"});
  rep.add({"61.upper_tight_at_left_edges", w.edge_abs <= 1e-12, w.edge_abs, std::nullopt, "",
           "|margin| at |x| = eps^-j"});
  rep.add({"61.positivity", w.positive, 0.0, std::nullopt, "", "ln u finite on all shells"});

  // Cross-check the log path against direct evaluation where doubles reach.
  double worst_rel = 0.0;
  for (std::size_t i = 0; i < grid.size(); i += 5) {
    const double eps = grid[i];
    const double le = grid.log_values()[i];
    for (int j = 0; j <= j_max; ++j) {
      const double log_r = -(j + 0.25) * le;
      const double lu = log_u_radial(eps, log_r);
      if (log_r > 700.0 || lu < -700.0) continue;
      Eigen::VectorXd x(1);
      x[0] = std::exp(log_r);
      const double direct = u_eps(eps, x);
      worst_rel = std::max(worst_rel, std::abs(direct - std::exp(lu)) /
                                          std::max(std::abs(direct), 1e-300));
    }
  }
  rep.add({"61.log_path_consistency", worst_rel <= 1e-12, worst_rel, std::nullopt, "",
           "exp(log_u_radial) against direct evaluation"});
  return rep;
}

VerificationReport verify_estimate_62(const RunConfig& cfg, int mesh_points) {
  VerificationReport rep;
  rep.suite = "estimate-62";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const int d = cfg.dim;

  std::mt19937_64 rng(cfg.seed ^ 0x62u);
  std::vector<Eigen::VectorXd> mesh;
  mesh.reserve(static_cast<std::size_t>(mesh_points));
  mesh.push_back(Eigen::VectorXd::Zero(d));
  {
    Eigen::VectorXd edge = Eigen::VectorXd::Zero(d);
    edge[0] = 0.5;
    mesh.push_back(edge);  // |x| = 1/2 is inside the closed cutoff region
  }
  while (static_cast<int>(mesh.size()) < mesh_points) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = 2.0 * u01(rng) - 1.0;
    const double n = v.stableNorm();
    if (n > 1e-9) mesh.push_back((v / n) * (0.5 * u01(rng)));
  }

  bool exact = true;
  double worst = 0.0;
  std::optional<double> bad_eps;
  std::string bad_x;
  for (std::size_t i = 0; i < grid.size() && exact; ++i)
    for (const auto& x : mesh) {
      const double v = u_eps(grid[i], x);
      if (v != 1.0) {
        exact = false;
        worst = std::abs(v - 1.0);
        bad_eps = grid[i];
        bad_x = fmt(x.stableNorm());
        break;
      }
    }
  rep.add({"62.identity_one", exact, worst, bad_eps, bad_x,
           "u == 1 bit-exactly on |x| <= 1/2, " + std::to_string(mesh.size()) + " mesh points"});
  return rep;
}

VerificationReport verify_band_63(const RunConfig& cfg, int mesh_points) {
  VerificationReport rep;
  rep.suite = "band-63";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();

  double g_min = kInf, g_max = -kInf, u_min = kInf, u_max = -kInf;
  double g_min_eps = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid[i];
    for (int t = 0; t < mesh_points; ++t) {
      const double r = 0.5 + 0.5 * static_cast<double>(t) / (mesh_points - 1);
      const double g = std::exp(log_g_radial(eps, std::log(r)));
      const double u = u_radial(eps, r);
      if (g < g_min) {
        g_min = g;
        g_min_eps = eps;
      }
      g_max = std::max(g_max, g);
      u_min = std::min(u_min, u);
      u_max = std::max(u_max, u);
    }
  }

  rep.add({"63.g_band_derived", g_min > 0.5 + 1e-12 && g_max <= 1.0, g_min - 0.5, g_min_eps, "",
           "derived band 1/2 < g <= 1; attained [" + fmt(g_min) + ", " + fmt(g_max) + "]"});
  rep.add({"63.u_band_derived", u_min > 0.5 && u_max <= 1.0, u_min - 0.5, std::nullopt, "",
           "derived band 1/2 < u <= 1; attained [" + fmt(u_min) + ", " + fmt(u_max) + "]"});
  // The printed band claims g >= 1 on the whole annulus; the attained minimum
  // sits strictly below 1, so that claim does not hold as stated. This check
  // passes when the discrepancy is observed, keeping it on the record.
  rep.add({"63.printed_band_not_attained", g_min < 1.0, g_min - 1.0, g_min_eps, "",
           "printed claim '1 <= g < 2' not attained; g_min = " + fmt(g_min)});
  rep.add({"63.used_consequence", u_min > 0.0 && u_max < 3.0, 3.0 - u_max, std::nullopt, "",
           "0 < u < 3 on the band"});
  return rep;
}

VerificationReport verify_noninvertibility(const RunConfig& cfg, int n_list_max) {
  VerificationReport rep;
  rep.suite = "noninvertibility";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const std::size_t tb = grid.tail_begin();

  for (int N = 0; N <= n_list_max; ++N) {
    const long long j = 3LL * N + 1;
    const long long lhs = j * j - static_cast<long long>(N) * (1 + 2 * j);
    const long long identity = 3LL * N * N + 3 * N + 1;
    rep.add({"exponent_identity.N" + std::to_string(N), lhs == identity && identity >= 1,
             static_cast<double>(lhs - identity), std::nullopt, "",
             "j^2 - N(1+2j) == 3N^2+3N+1 with j = 3N+1"});

    // Reciprocal value at |x| = eps^-j, compared in log space.
    double worst_anchor = 0.0;
    double prev_factor = -kInf;
    bool monotone = true;
    bool diverges = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double le = grid.log_values()[i];
      const double log_r = -static_cast<double>(j) * le;
      const double log_v = -log_u_radial(grid[i], log_r);
      const double expect = -static_cast<double>(j) * j * le;
      worst_anchor = std::max(worst_anchor, std::abs(log_v - expect) / std::abs(expect));
      // log of v / (eps^-N (1+eps^-j)^N)
      const double log_bound = -N * le + N * softplus(log_r);
      const double factor = log_v - log_bound;
      if (factor <= prev_factor) monotone = false;
      prev_factor = factor;
      if (i >= tb && !(factor > 0.0) && N > 0) diverges = false;
      if (i >= tb && N == 0 && !(factor > 0.0)) diverges = false;
    }
    rep.add({"anchor_value.N" + std::to_string(N), worst_anchor <= 1e-12, worst_anchor,
             std::nullopt, "", "1/u(eps^-j) == eps^-j^2 in log space, j = " + std::to_string(j)});
    rep.add({"bound_violation.N" + std::to_string(N), diverges && monotone, prev_factor,
             std::nullopt, "",
             "v/(eps^-N (1+|x|)^N) at |x| = eps^-j grows monotonically as eps decreases"});
  }
  return rep;
}

VerificationReport verify_pointwise_invertibility(const RunConfig& cfg, int dilation_max,
                                                  int point_count) {
  VerificationReport rep;
  rep.suite = "pointwise-invertibility";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const Thresholds thr = cfg.thresholds();
  const FunctionNet u = counterexample_net(cfg.dim);

  std::vector<int> dilations;
  for (int m = 0; m <= dilation_max; ++m) dilations.push_back(m);
  const SweepResult sweep = pointwise_invertibility_sweep(u, dilations, grid, BallSampleSpec{},
                                                          dilation_max * dilation_max + 8);
  bool n_matches = true;
  std::string detail = "N(m) =";
  for (const auto& r : sweep.per_dilation) {
    n_matches = n_matches && r.pass && r.N && *r.N == r.dilation * r.dilation;
    detail += " " + (r.N ? std::to_string(*r.N) : std::string("-"));
  }
  rep.add({"dilation_sweep", sweep.all_pass && n_matches, 0.0, std::nullopt, "",
           detail + " for m = 0.." + std::to_string(dilation_max)});

  const auto points = sample_moderate_points(u.box, grid, point_count, cfg.seed);
  int failures = 0;
  std::string first_fail;
  for (const auto& p : points) {
    const GeneralizedNumber value = evaluate_at_point(u, p, grid, thr);
    if (!is_strictly_nonzero(value, grid, thr).found) {
      ++failures;
      if (first_fail.empty()) first_fail = p.label;
    }
  }
  rep.add({"moderate_points_strictly_nonzero", failures == 0, static_cast<double>(failures),
           std::nullopt, first_fail,
           std::to_string(points.size()) + " seeded moderate points"});
  return rep;
}

}  // namespace taunets
