#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "taunets/asymptotics.hpp"

namespace taunets {

// A generalized number: a moderate scalar net together with the evidence
// that made it past the moderateness gate. Equality, order and min are only
// meaningful relative to a grid and thresholds.
struct GeneralizedNumber {
  ScalarNet rep;
  OrderEstimate cert;
  int moderate_N = 0;  // smallest N with |rep| <= slack * eps^-N on the tail
};

// Checks moderateness and attaches the certificate; throws ModerationError
// when no N <= n_max works.
GeneralizedNumber make_generalized(ScalarNet net, const EpsGrid& grid, const Thresholds& thr);

GeneralizedNumber gn_add(const GeneralizedNumber& a, const GeneralizedNumber& b,
                         const EpsGrid& grid, const Thresholds& thr);
GeneralizedNumber gn_mul(const GeneralizedNumber& a, const GeneralizedNumber& b,
                         const EpsGrid& grid, const Thresholds& thr);
GeneralizedNumber gn_neg(const GeneralizedNumber& a, const EpsGrid& grid, const Thresholds& thr);

// a == b in the quotient ring: a - b passes operational negligibility.
bool eq_in_Rtilde(const GeneralizedNumber& a, const GeneralizedNumber& b, const EpsGrid& grid,
                  const Thresholds& thr);

// Outcome of the strict-majorant scan: smallest integer exponent that wins
// against the net on the whole grid tail, if any.
struct MajorantScan {
  bool found = false;
  std::optional<int> m;
};

// |rep(eps)| > eps^m strictly at every tail point, for the representative and
// a seeded family of negligibly perturbed representatives (the Definition
// quantifies over representatives; sampling stands in for that quantifier).
MajorantScan is_strictly_nonzero(const GeneralizedNumber& a, const EpsGrid& grid,
                                 const Thresholds& thr);

// Signed variant: rep(eps) > eps^m.
MajorantScan is_strictly_positive(const GeneralizedNumber& a, const EpsGrid& grid,
                                  const Thresholds& thr);

// b - a >= eps^m on the tail (the weak inequality of the strict-less
// definition), perturbation-checked like the predicates above.
bool strict_less(const GeneralizedNumber& a, const GeneralizedNumber& b, const EpsGrid& grid,
                 const Thresholds& thr);

// Pointwise min of the representatives; well defined up to negligible nets.
GeneralizedNumber inf_min(const std::vector<GeneralizedNumber>& list, const EpsGrid& grid,
                          const Thresholds& thr);

// Seeded generator of operationally negligible nets, used by the built-in
// perturbation trials and by the representative-independence property tests.
ScalarNet random_negligible_net(std::uint64_t seed, const Thresholds& thr);

}  // namespace taunets
