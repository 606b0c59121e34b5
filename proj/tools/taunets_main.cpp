#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "taunets/cli.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"taunets - classification and verification for tempered eps-nets"};
  app.require_subcommand(1);

  taunets::RunConfig cfg;
  std::string expr, expr_file, point_spec;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--dim", cfg.dim, "ambient dimension")->check(CLI::PositiveNumber);
    sub->add_option("--grid-min-exp", cfg.grid_min_exp, "largest grid eps is 2^-K");
    sub->add_option("--grid-points", cfg.grid_points, "number of dyadic grid points");
    sub->add_option("--jmax", cfg.j_max, "sample shells reach |x| = eps^-jmax");
    sub->add_option("--pmax", cfg.p_max, "negligibility power cap");
    sub->add_option("--nmax", cfg.n_max, "moderateness exponent cap");
    sub->add_option("--mmax", cfg.m_max, "strict majorant scan cap");
    sub->add_option("--seed", cfg.seed, "seed for sampled families");
    sub->add_option("--out", cfg.out_path, "report path (default: stdout)");
    sub->add_option("--format", cfg.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--slack-structural", cfg.slack_structural, "slack for structural bounds");
    sub->add_option("--slack-estimate", cfg.slack_estimate, "slack for classification bounds");
  };
  auto add_expr = [&](CLI::App* sub) {
    auto* e = sub->add_option("--expr", expr, "net expression");
    auto* f = sub->add_option("--expr-file", expr_file, "file holding the expression");
    e->excludes(f);
  };

  CLI::App* verify = app.add_subcommand("verify-counterexample",
                                        "run the full verification suite for the built-in net");
  add_common(verify);
  CLI::App* classify = app.add_subcommand("classify", "moderate/negligible classification");
  add_common(classify);
  add_expr(classify);
  CLI::App* invert = app.add_subcommand("invert-check",
                                        "reciprocal, pointwise sweep and witness search");
  add_common(invert);
  add_expr(invert);
  CLI::App* evalp = app.add_subcommand("eval-point", "evaluate a net at a generalized point");
  add_common(evalp);
  add_expr(evalp);
  evalp->add_option("--point", point_spec, "comma-separated eps-expressions, one per coordinate")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  auto expr_text = [&]() -> std::string {
    if (!expr_file.empty()) {
      std::ifstream in(expr_file);
      if (!in) throw taunets::DomainError("cannot read --expr-file " + expr_file);
      std::ostringstream os;
      os << in.rdbuf();
      return os.str();
    }
    return expr;
  };

  try {
    if (verify->parsed()) return taunets::cmd_verify_counterexample(cfg, std::cout, std::cerr);
    if (classify->parsed()) {
      const std::string e = expr_text();
      if (e.empty()) {
        std::cerr << "classify: --expr or --expr-file is required\n";
        return 2;
      }
      return taunets::cmd_classify(cfg, e, std::cout, std::cerr);
    }
    if (invert->parsed()) {
      const std::string e = expr_text();
      if (e.empty()) {
        std::cerr << "invert-check: --expr or --expr-file is required\n";
        return 2;
      }
      return taunets::cmd_invert_check(cfg, e, std::cout, std::cerr);
    }
    if (evalp->parsed()) {
      const std::string e = expr_text();
      if (e.empty()) {
        std::cerr << "eval-point: --expr or --expr-file is required\n";
        return 2;
      }
      return taunets::cmd_eval_point(cfg, e, point_spec, std::cout, std::cerr);
    }
  } catch (const taunets::EvaluationError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return 3;
  } catch (const taunets::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
