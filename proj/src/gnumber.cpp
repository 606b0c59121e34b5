#include "taunets/gnumber.hpp"

#include <cmath>
#include <random>

namespace taunets {

namespace {

double u01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

enum class Sign { absolute, as_is };
enum class Cmp { strict, weak };

// Smallest m in [0, m_max] with value(eps) > eps^m (or >=) at every tail
// point. Comparisons run in log space: value > eps^m <=> ln value > m ln eps.
std::optional<int> majorant_scan_net(const ScalarNet& net, const EpsGrid& grid,
                                     const Thresholds& thr, Sign sign, Cmp cmp) {
  const std::size_t tb = grid.tail_begin(thr.tail_fraction);
  std::vector<double> lv(grid.size() - tb);
  for (std::size_t i = tb; i < grid.size(); ++i) {
    double v = checked_eval(net, grid[i]);
    if (sign == Sign::absolute) v = std::abs(v);
    lv[i - tb] = v > 0.0 ? std::log(v) : -std::numeric_limits<double>::infinity();
  }
  for (int m = 0; m <= thr.m_max; ++m) {
    bool ok = true;
    for (std::size_t i = tb; i < grid.size(); ++i) {
      const double rhs = static_cast<double>(m) * grid.log_values()[i];
      const double lhs = lv[i - tb];
      if (cmp == Cmp::strict ? !(lhs > rhs) : !(lhs >= rhs)) {
        ok = false;
        break;
      }
    }
    if (ok) return m;
  }
  return std::nullopt;
}

MajorantScan scan_with_perturbations(const ScalarNet& net, const EpsGrid& grid,
                                     const Thresholds& thr, Sign sign, Cmp cmp) {
  MajorantScan out;
  const auto base = majorant_scan_net(net, grid, thr, sign, cmp);
  if (!base) return out;
  for (int t = 0; t < thr.perturbation_trials; ++t) {
    ScalarNet n = random_negligible_net(thr.seed + 0x9e3779b97f4a7c15ull * (t + 1), thr);
    if (!majorant_scan_net(net_add(net, n), grid, thr, sign, cmp)) return out;
  }
  out.found = true;
  out.m = base;
  return out;
}

}  // namespace

ScalarNet random_negligible_net(std::uint64_t seed, const Thresholds& thr) {
  std::mt19937_64 rng(seed);
  const int form = static_cast<int>(rng() % 4);
  const double c = (u01(rng) * 1.75 + 0.25) * (rng() % 2 ? 1.0 : -1.0);
  const double p = static_cast<double>(thr.p_max);
  switch (form) {
    case 0: {
      const double q = p + 1.0 + static_cast<double>(rng() % 4);
      return {[c, q](double eps) { return c * std::exp(q * std::log(eps)); },
              "negl:c*eps^q"};
    }
    case 1:
      return {[c](double eps) { return c * std::exp(-1.0 / eps); }, "negl:c*exp(-1/eps)"};
    case 2: {
      const double q = p + 2.0;
      return {[c, q](double eps) { return c * std::exp(q * std::log(eps)) * std::sin(1.0 / eps); },
              "negl:c*eps^q*sin(1/eps)"};
    }
    default:
      return {[](double) { return 0.0; }, "negl:0"};
  }
}

GeneralizedNumber make_generalized(ScalarNet net, const EpsGrid& grid, const Thresholds& thr) {
  auto N = moderate_exponent(net, grid, thr);
  if (!N)
    throw ModerationError("net '" + net.label + "' is not moderate at N_max=" +
                          std::to_string(thr.n_max));
  GeneralizedNumber g;
  g.cert = estimate_order(net, grid);
  g.rep = std::move(net);
  g.moderate_N = *N;
  return g;
}

GeneralizedNumber gn_add(const GeneralizedNumber& a, const GeneralizedNumber& b,
                         const EpsGrid& grid, const Thresholds& thr) {
  return make_generalized(net_add(a.rep, b.rep), grid, thr);
}

GeneralizedNumber gn_mul(const GeneralizedNumber& a, const GeneralizedNumber& b,
                         const EpsGrid& grid, const Thresholds& thr) {
  return make_generalized(net_mul(a.rep, b.rep), grid, thr);
}

GeneralizedNumber gn_neg(const GeneralizedNumber& a, const EpsGrid& grid, const Thresholds& thr) {
  return make_generalized(net_neg(a.rep), grid, thr);
}

bool eq_in_Rtilde(const GeneralizedNumber& a, const GeneralizedNumber& b, const EpsGrid& grid,
                  const Thresholds& thr) {
  return is_negligible_net(net_sub(a.rep, b.rep), grid, thr);
}

MajorantScan is_strictly_nonzero(const GeneralizedNumber& a, const EpsGrid& grid,
                                 const Thresholds& thr) {
  return scan_with_perturbations(a.rep, grid, thr, Sign::absolute, Cmp::strict);
}

MajorantScan is_strictly_positive(const GeneralizedNumber& a, const EpsGrid& grid,
                                  const Thresholds& thr) {
  return scan_with_perturbations(a.rep, grid, thr, Sign::as_is, Cmp::strict);
}

bool strict_less(const GeneralizedNumber& a, const GeneralizedNumber& b, const EpsGrid& grid,
                 const Thresholds& thr) {
  return scan_with_perturbations(net_sub(b.rep, a.rep), grid, thr, Sign::as_is, Cmp::weak).found;
}

GeneralizedNumber inf_min(const std::vector<GeneralizedNumber>& list, const EpsGrid& grid,
                          const Thresholds& thr) {
  if (list.empty()) throw DomainError("inf_min: empty list");
  std::vector<ScalarNet> nets;
  nets.reserve(list.size());
  for (const auto& g : list) nets.push_back(g.rep);
  return make_generalized(net_min(std::move(nets)), grid, thr);
}

}  // namespace taunets
