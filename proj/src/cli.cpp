#include "taunets/cli.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "taunets/counterexample.hpp"
#include "taunets/netdsl.hpp"

namespace taunets {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

void print_summary(const VerificationReport& rep, std::ostream& err) {
  for (const auto& c : rep.checks)
    err << (c.pass ? "  pass  " : "  FAIL  ") << c.id
        << (c.details.empty() ? "" : "  [" + c.details + "]") << "\n";
  err << rep.suite << ": " << (rep.overall() ? "pass" : "FAIL") << " (" << fmt(rep.wall_ms)
      << " ms)\n";
}

int finish(VerificationReport& rep, Clock::time_point t0, std::ostream& out, std::ostream& err) {
  rep.wall_ms = ms_since(t0);
  write_report(rep, out);
  print_summary(rep, err);
  return rep.overall() ? 0 : 1;
}

std::string witness_string(const std::optional<SampleRef>& w) {
  if (!w) return "";
  std::ostringstream os;
  os << "eps=" << w->eps << " x=[";
  for (int i = 0; i < w->x.size() && i < 4; ++i) os << (i ? ", " : "") << w->x[i];
  os << "]";
  return os.str();
}

// Parses expr against the config dimension, reporting DSL errors in a stable
// one-line form.
bool parse_expr_or_report(const RunConfig& cfg, const std::string& expr,
                          netdsl::CompiledNet& compiled, std::ostream& err) {
  const auto parsed = netdsl::parse(expr, cfg.dim);
  if (!parsed.ok()) {
    err << "parse error at offset " << parsed.error->offset << ": expected "
        << parsed.error->expected << " near '" << parsed.error->excerpt << "'\n";
    return false;
  }
  compiled = netdsl::compile(*parsed.expr, cfg.dim);
  return true;
}

}  // namespace

int cmd_verify_counterexample(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  VerificationReport rep;
  rep.suite = "verify-counterexample";
  rep.config = cfg;

  for (const auto& sub :
       {verify_estimate_61(cfg), verify_estimate_62(cfg), verify_band_63(cfg),
        verify_noninvertibility(cfg), verify_pointwise_invertibility(cfg)})
    for (const auto& c : sub.checks) rep.add(c);

  const EpsGrid grid = cfg.make_grid();
  const Thresholds thr = cfg.thresholds();
  const FunctionNet u = counterexample_net(cfg.dim);
  const XSampleSpec spec{cfg.j_max};

  const auto mod = check_moderate(u, grid, spec, thr, 3.0);
  rep.add({"u_moderate_order_zero", mod.moderate() && mod.certificate->N == 0,
           mod.moderate() ? mod.certificate->worst_margin : 0.0, std::nullopt, "",
           "0 < u < 3 certifies N = 0"});

  const auto neg = check_negligible(u, grid, spec, thr);
  rep.add({"u_not_negligible", !neg.negligible, 0.0,
           neg.witness ? std::optional<double>(neg.witness->eps) : std::nullopt,
           witness_string(neg.witness), "expected failure of the negligibility ladder"});

  const auto recip = reciprocal_test(u, grid, spec, thr);
  rep.add({"global_invertibility_expected_fail", !recip.invertible, 0.0,
           recip.moderation_witness ? std::optional<double>(recip.moderation_witness->eps)
                                    : std::nullopt,
           witness_string(recip.moderation_witness ? recip.moderation_witness
                                                   : recip.zero_witness),
           recip.detail.empty() ? "reciprocal test" : recip.detail});

  return finish(rep, t0, out, err);
}

int cmd_classify(const RunConfig& cfg, const std::string& expr, std::ostream& out,
                 std::ostream& err) {
  const auto t0 = Clock::now();
  netdsl::CompiledNet compiled{FunctionNet{nullptr, nullptr, nullptr, Box::whole_space(1), ""},
                               false, 1};
  if (!parse_expr_or_report(cfg, expr, compiled, err)) return 2;

  VerificationReport rep;
  rep.suite = "classify";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const Thresholds thr = cfg.thresholds();

  bool moderate = false, negligible = false;
  std::string mod_detail, neg_detail;
  if (compiled.uses_x) {
    const XSampleSpec spec{cfg.j_max};
    const auto mod =
        check_moderate(compiled.fn, grid, spec, thr, cfg.slack_estimate, SamplePolicy::skip_errors);
    moderate = mod.moderate();
    mod_detail = moderate ? "N = " + std::to_string(mod.certificate->N)
                          : "witness " + witness_string(mod.witness);
    if (mod.skipped_samples)
      mod_detail += "; skipped " + std::to_string(mod.skipped_samples) + " out-of-domain samples";
    const auto neg = check_negligible(compiled.fn, grid, spec, thr, SamplePolicy::skip_errors);
    negligible = neg.negligible;
    neg_detail = negligible ? "N = " + std::to_string(*neg.N)
                            : "witness " + witness_string(neg.witness);
  } else {
    const ScalarNet net = compiled.scalar();
    const auto N = moderate_exponent(net, grid, thr);
    moderate = N.has_value();
    mod_detail = moderate ? "N = " + std::to_string(*N) : "no N <= n_max works";
    negligible = is_negligible_net(net, grid, thr);
    neg_detail = negligible ? "passes the full p-ladder" : "fails some p <= p_max";
  }

  rep.add({"moderate", moderate, 0.0, std::nullopt, "", "moderate: " + std::string(moderate ? "yes" : "no") + "; " + mod_detail});
  rep.add({"negligible_info", true, 0.0, std::nullopt, "",
           "negligible: " + std::string(negligible ? "yes" : "no") + "; " + neg_detail});
  rep.add({"classification_consistent", !negligible || moderate, 0.0, std::nullopt, "",
           "negligible nets must also be moderate"});
  return finish(rep, t0, out, err);
}

int cmd_invert_check(const RunConfig& cfg, const std::string& expr, std::ostream& out,
                     std::ostream& err) {
  const auto t0 = Clock::now();
  netdsl::CompiledNet compiled{FunctionNet{nullptr, nullptr, nullptr, Box::whole_space(1), ""},
                               false, 1};
  if (!parse_expr_or_report(cfg, expr, compiled, err)) return 2;

  VerificationReport rep;
  rep.suite = "invert-check";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const Thresholds thr = cfg.thresholds();
  const XSampleSpec spec{cfg.j_max};

  const auto recip = reciprocal_test(compiled.fn, grid, spec, thr);
  std::vector<int> dilations{0, 1, 2, 3, 4, 5};
  const auto sweep =
      pointwise_invertibility_sweep(compiled.fn, dilations, grid, BallSampleSpec{}, 36);
  const auto witness = witness_noninvertible_point(compiled.fn, grid, spec, thr, cfg.m_max);

  rep.add({"reciprocal_info", true, 0.0, std::nullopt,
           witness_string(recip.moderation_witness ? recip.moderation_witness : recip.zero_witness),
           std::string("invertible: ") + (recip.invertible ? "yes" : "no") +
               (recip.detail.empty() ? "" : "; " + recip.detail)});
  std::string sweep_detail = "N(m) =";
  for (const auto& r : sweep.per_dilation)
    sweep_detail += " " + (r.N ? std::to_string(*r.N) : std::string("-"));
  rep.add({"pointwise_info", true, 0.0, std::nullopt, "",
           std::string("pointwise: ") + (sweep.all_pass ? "yes" : "no") + "; " + sweep_detail});
  rep.add({"witness_info", true, 0.0, std::nullopt, "",
           std::string("witness: ") + (witness ? "found" : "none")});

  bool consistent = true;
  if (recip.invertible && (!sweep.all_pass || witness.has_value())) consistent = false;
  rep.add({"triangle_consistent", consistent, 0.0, std::nullopt, "",
           "invertible implies pointwise-invertible and no witness"});
  return finish(rep, t0, out, err);
}

int cmd_eval_point(const RunConfig& cfg, const std::string& expr, const std::string& point_spec,
                   std::ostream& out, std::ostream& err) {
  const auto t0 = Clock::now();
  netdsl::CompiledNet compiled{FunctionNet{nullptr, nullptr, nullptr, Box::whole_space(1), ""},
                               false, 1};
  if (!parse_expr_or_report(cfg, expr, compiled, err)) return 2;

  // The point is a comma-separated vector of eps-expressions.
  std::vector<ScalarNet> coords;
  std::stringstream ss{point_spec};
  std::string part;
  while (std::getline(ss, part, ',')) {
    netdsl::CompiledNet coord{FunctionNet{nullptr, nullptr, nullptr, Box::whole_space(1), ""},
                              false, 1};
    if (!parse_expr_or_report(cfg, part, coord, err)) return 2;
    if (coord.uses_x) {
      err << "point coordinates must be eps-expressions (no x variables): " << part << "\n";
      return 2;
    }
    coords.push_back(coord.scalar());
  }
  if (static_cast<int>(coords.size()) != cfg.dim) {
    err << "point has " << coords.size() << " coordinates, --dim is " << cfg.dim << "\n";
    return 2;
  }

  VerificationReport rep;
  rep.suite = "eval-point";
  rep.config = cfg;
  const EpsGrid grid = cfg.make_grid();
  const Thresholds thr = cfg.thresholds();

  GeneralizedPoint x{[coords, d = cfg.dim](double eps) {
                       Eigen::VectorXd v(d);
                       for (int i = 0; i < d; ++i) v[i] = coords[static_cast<std::size_t>(i)](eps);
                       return v;
                     },
                     Box::whole_space(cfg.dim), point_spec};

  bool point_ok = true;
  std::string point_detail = "moderate";
  try {
    validate_point(x, grid, thr);
  } catch (const std::exception& e) {
    point_ok = false;
    point_detail = e.what();
  }
  rep.add({"point_moderate", point_ok, 0.0, std::nullopt, "", point_detail});
  if (!point_ok) return finish(rep, t0, out, err);

  bool value_ok = true;
  try {
    const GeneralizedNumber value = evaluate_at_point(compiled.fn, x, grid, thr);
    const auto scan = is_strictly_nonzero(value, grid, thr);
    rep.add({"value_moderate", true, 0.0, std::nullopt, "",
             "N = " + std::to_string(value.moderate_N)});
    rep.add({"order_estimate", true, value.cert.slope, std::nullopt, "",
             value.cert.exact_zero
                 ? "exact zero net"
                 : "slope " + fmt(value.cert.slope) + ", residual " + fmt(value.cert.residual)});
    rep.add({"strictly_nonzero_info", true, 0.0, std::nullopt, "",
             scan.found ? "yes, m = " + std::to_string(*scan.m) : "not certified at m_max"});
  } catch (const ModerationError& e) {
    value_ok = false;
    rep.add({"value_moderate", false, 0.0, std::nullopt, "", e.what()});
  }
  (void)value_ok;
  return finish(rep, t0, out, err);
}

}  // namespace taunets
