#include "pjd/analytics.hpp"

#include <cmath>
#include <stdexcept>

#include "pjd/numeric.hpp"

namespace pjd {

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical_weak: return "subcritical-weak";
    case Regime::subcritical_ld: return "subcritical-ld";
    case Regime::supercritical: return "supercritical";
    case Regime::p_zero: return "p-zero";
  }
  return "?";
}

PhaseReport classify_homogeneous(double lambda, const OffspringLaw& law,
                                 double kappa, double p) {
  if (!(lambda > 0) || !(kappa > 0)) throw std::invalid_argument("classify: lambda, kappa must be positive");
  if (p < 0 || p >= 1) throw std::invalid_argument("classify: p must lie in [0,1)");
  PhaseReport rep;
  double mu = law.mean();
  if (p == 0) {
    rep.regime = Regime::p_zero;
    rep.nu = 0;
    rep.decay_rate = kappa + std::max(lambda * (1.0 - mu), 0.0);
    rep.formula_id = "decay.p-zero";
    return rep;
  }
  double L = std::log(1.0 / p);
  rep.nu = lambda * (mu - 1.0) / (kappa * L);
  if (rep.nu <= p) {
    rep.regime = Regime::subcritical_weak;
    rep.decay_rate = (1.0 - p) * kappa - lambda * (mu - 1.0);
    rep.formula_id = "decay.weak-disaster";
  } else if (rep.nu <= 1.0) {
    rep.regime = Regime::subcritical_ld;
    rep.decay_rate = kappa * (1.0 - rep.nu + rep.nu * std::log(rep.nu));
    rep.formula_id = "decay.large-deviation";
  } else {
    rep.regime = Regime::supercritical;
    rep.formula_id = "survival.positive";
  }
  return rep;
}

MuThresholds classify_mu_form(double lambda, double mu, double kappa, double p) {
  if (!(lambda > 0) || !(kappa > 0)) throw std::invalid_argument("classify: lambda, kappa must be positive");
  if (p < 0 || p > 1) throw std::invalid_argument("classify: p outside [0,1]");
  MuThresholds th;
  double L = p > 0 ? std::log(1.0 / p) : kInf;
  th.mu_low = p > 0 ? 1.0 + (kappa * p / lambda) * L : 1.0;
  th.mu_high = p > 0 ? 1.0 + (kappa / lambda) * L : kInf;
  if (p == 1.0) th.mu_low = th.mu_high = 1.0;
  th.position = mu <= th.mu_low ? -1 : (mu > th.mu_high ? 1 : 0);
  return th;
}

std::vector<double> binary_dual_moments(double b, double d, double kappa,
                                        double p, int k_max) {
  if (!(b > 0) || d < 0 || !(kappa > 0)) throw std::invalid_argument("binary_dual_moments: bad rates");
  if (!(p > 0) || p >= 1) throw std::invalid_argument("binary_dual_moments: p must lie in (0,1)");
  if (k_max < 1) throw std::invalid_argument("binary_dual_moments: k_max >= 1");
  double L = std::log(1.0 / p);
  if (!(b - d > kappa * L))
    throw RegimeError("binary_dual_moments: not supercritical (b-d <= kappa*log(1/p))");
  std::vector<double> m(k_max);
  m[0] = 1.0 - (d + kappa * L) / b;
  for (int j = 1; j < k_max; ++j) {
    double k = static_cast<double>(j);
    m[j] = m[j - 1] * (1.0 - (d * k + kappa * (1.0 - std::pow(p, k))) / (b * k));
  }
  return m;
}

double survival_from_moments(std::uint64_t z0, const std::vector<double>& moments) {
  if (z0 > 60) throw std::invalid_argument("survival_from_moments: z0 > 60 loses too much to cancellation");
  if (moments.size() < z0) throw std::invalid_argument("survival_from_moments: need >= z0 moments");
  if (z0 == 0) return 0.0;
  KahanSum sum;
  double binom = 1.0;  // C(z0, l)
  for (std::uint64_t l = 1; l <= z0; ++l) {
    binom *= static_cast<double>(z0 - l + 1) / static_cast<double>(l);
    double sign = (l % 2 == 1) ? 1.0 : -1.0;
    sum.add(sign * binom * moments[l - 1]);
  }
  return sum.value();
}

double bd_survival_probability(std::uint64_t k, double b, double d,
                               double kappa, double p) {
  if (p <= 0 || !(b - d > kappa * std::log(1.0 / p))) return 0.0;
  auto m = binary_dual_moments(b, d, kappa, p, static_cast<int>(k));
  return survival_from_moments(k, m);
}

double bd_decay_rate(double b, double d, double kappa, double p) {
  if (b < 0 || d < 0 || !(kappa > 0)) throw std::invalid_argument("bd_decay_rate: bad rates");
  if (p < 0 || p >= 1) throw std::invalid_argument("bd_decay_rate: p must lie in [0,1)");
  double g = b - d;
  if (p == 0) return kappa + std::max(-g, 0.0);
  double L = std::log(1.0 / p);
  if (!(g <= kappa * L)) throw RegimeError("bd_decay_rate: supercritical (b-d > kappa*log(1/p))");
  if (g <= kappa * p * L) return (1.0 - p) * kappa - g;
  return kappa - (g / L) * (1.0 + std::log(kappa * L / g));
}

}  // namespace pjd
