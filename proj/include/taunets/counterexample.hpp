#pragma once

#include "taunets/gfunction.hpp"
#include "taunets/report.hpp"

namespace taunets {

// Smooth radial cutoff: 1 exactly on r <= 1/2, 0 exactly on r >= 1, monotone
// non-increasing in between (bump-quotient profile).
struct CutoffSigma {
  double inner = 0.5;
  double outer = 1.0;
  double operator()(double r) const;
};

double sigma(double r);        // the fixed cutoff above; r < 0 is a domain error
double sigma_prime(double r);  // exactly 0 outside (1/2, 1)

// ln g_eps at ln-radius: (ln r)^2 / ln eps. This is the primary evaluation
// path; the direct form eps^((log_eps r)^2) leaves double range already at
// moderate shells.
double log_g_radial(double eps, double log_r);

double g_eps(double eps, const Eigen::VectorXd& x);             // |x| > 0
Eigen::VectorXd grad_g_eps(double eps, const Eigen::VectorXd& x);  // |x| >= 1/2

// u at radius r: 1 on r <= 1/2, (1-sigma) g + sigma on the band, g outside.
double u_radial(double eps, double r);
double log_u_radial(double eps, double log_r);

double u_eps(double eps, const Eigen::VectorXd& x);
double u1_eps(double eps, double x1);  // half-space profile, x1 > 0

// The counterexample as a FunctionNet on R^d, with analytic gradient and the
// exact log-magnitude path.
FunctionNet counterexample_net(int dim);

// The half-space variant on (0, inf) x R^{d-1}, depending on x1 only.
FunctionNet halfspace_net(int dim);

// Verification suites. Margins are reported in log-space units scaled by
// |ln eps|.
VerificationReport verify_estimate_61(const RunConfig& cfg, int radii_per_shell = 16);
VerificationReport verify_estimate_62(const RunConfig& cfg, int mesh_points = 1000);
VerificationReport verify_band_63(const RunConfig& cfg, int mesh_points = 1000);
VerificationReport verify_noninvertibility(const RunConfig& cfg, int n_list_max = 5);
VerificationReport verify_pointwise_invertibility(const RunConfig& cfg, int dilation_max = 5,
                                                  int point_count = 64);

}  // namespace taunets
