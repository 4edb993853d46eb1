#include "pjd/csbp.hpp"

#include <cmath>
#include <stdexcept>

#include "pjd/mc.hpp"
#include "pjd/numeric.hpp"
#include "pjd/pjump.hpp"

namespace pjd {

double mechanism_drift(const BranchingMechanism& mech, double x) {
  if (x < 0) throw std::invalid_argument("mechanism_drift: x must be nonnegative");
  double val = mech.b * x - mech.c * x * x;
  for (const auto& [y, mass] : mech.atoms)
    val -= mass * (std::expm1(-x * y) + x * y);
  return val;
}

void validate_mechanism(const BranchingMechanism& mech) {
  if (mech.c < 0) throw std::invalid_argument("mechanism: c must be nonnegative");
  if (!(mech.kappa > 0)) throw std::invalid_argument("mechanism: kappa must be positive");
  if (!(mech.p > 0) || !(mech.p < 1)) throw std::invalid_argument("mechanism: p must lie in (0,1)");
  double moment = 0;
  for (const auto& [y, mass] : mech.atoms) {
    if (!(y > 0) || mass < 0) throw std::invalid_argument("mechanism: atoms need y > 0, mass >= 0");
    moment += mass * std::min(y, y * y);
  }
  if (!std::isfinite(moment)) throw std::invalid_argument("mechanism: jump moment diverges");
  // alpha must go negative eventually (strictly subquadratic growth is ruled
  // out by c > 0 or a nontrivial jump part; pure drift b > 0 has no root)
  if (mech.b > 0) {
    double x = 1.0;
    bool neg = false;
    for (int i = 0; i < 60; ++i) {
      if (mechanism_drift(mech, x) < 0) {
        neg = true;
        break;
      }
      x *= 2;
    }
    if (!neg) throw std::invalid_argument("mechanism: alpha never turns negative (no c, no jumps?)");
  }
}

double largest_root(const BranchingMechanism& mech) {
  validate_mechanism(mech);
  if (mech.b <= 0) return 0.0;
  // concave, alpha(0) = 0, alpha'(0) = b > 0: exactly one positive root
  double lo = 1e-12;
  while (mechanism_drift(mech, lo) <= 0 && lo < 1.0) lo *= 2;
  double hi = std::max(lo * 2, 1.0);
  while (mechanism_drift(mech, hi) > 0) hi *= 2;
  return bisect([&mech](double x) { return mechanism_drift(mech, x); }, lo, hi);
}

DriftSpec mechanism_drift_spec(const BranchingMechanism& mech, double x_max) {
  DriftSpec spec;
  spec.alpha = [mech](double x) { return mechanism_drift(mech, std::max(x, 0.0)); };
  spec.domain_end = kInf;
  spec.alpha0_slope = mech.b;
  spec.alpha_hat = mech.b;  // concave
  spec.concave = true;
  double xi = largest_root(mech);
  if (xi > 0) spec.x_alpha = xi;
  spec.s_alpha = xi;
  (void)x_max;
  return spec;
}

ExtinctionEstimate extinction_probability(const BranchingMechanism& mech,
                                          double z, double t, double x_max,
                                          std::uint64_t n_replicas,
                                          std::uint64_t seed) {
  validate_mechanism(mech);
  if (z < 0) throw std::invalid_argument("extinction_probability: z must be nonnegative");
  double xi = largest_root(mech);
  if (!(x_max >= 10.0 * std::max(xi, 0.1)))
    throw std::invalid_argument("extinction_probability: x_max too small to proxy X_0 = inf");
  struct Partial {
    Accum acc;
    void merge(const Partial& o) { acc.merge(o.acc); }
  };
  auto run = [&](double start) {
    PJumpConfig cfg;
    cfg.drift = mechanism_drift_spec(mech, start);
    cfg.p = mech.p;
    cfg.kappa = mech.kappa;
    cfg.x0 = start;
    cfg.t_end = t + 1.0;
    return chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& pt) {
      RngStream rng(seed, rep);
      auto xs = simulate_pjump_at(cfg, {t}, rng);
      pt.acc.add(std::exp(-z * xs[0]));
    });
  };
  auto base = run(x_max);
  auto doubled = run(2.0 * x_max);
  ExtinctionEstimate est;
  est.value = base.acc.mean;
  est.std_err = base.acc.std_err();
  est.sensitivity = std::abs(base.acc.mean - doubled.acc.mean);
  return est;
}

double csbp_decay_rate(const BranchingMechanism& mech) {
  validate_mechanism(mech);
  double L = std::log(1.0 / mech.p);
  if (!(mech.b <= mech.kappa * L))
    throw RegimeError("csbp_decay_rate: supercritical (b > kappa*log(1/p))");
  if (mech.b <= mech.kappa * mech.p * L) return (1.0 - mech.p) * mech.kappa - mech.b;
  double gamma = mech.kappa * L / mech.b;
  return mech.kappa - (mech.kappa / gamma) * (1.0 + std::log(gamma));
}

}  // namespace pjd
