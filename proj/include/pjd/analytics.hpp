#ifndef PJD_ANALYTICS_HPP
#define PJD_ANALYTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include "pjd/offspring.hpp"

namespace pjd {

enum class Regime { subcritical_weak, subcritical_ld, supercritical, p_zero };

std::string regime_name(Regime r);

struct PhaseReport {
  Regime regime = Regime::subcritical_weak;
  double nu = 0;  // lambda*(mu-1) / (kappa*log(1/p)); 0 when p = 0
  std::optional<double> decay_rate;
  std::optional<double> survival_prob;  // per single initial individual
  std::string formula_id;
};

struct MuThresholds {
  double mu_low = 1;   // 1 + (kappa*p/lambda)*log(1/p)
  double mu_high = 1;  // 1 + (kappa/lambda)*log(1/p)
  int position = 0;    // -1 below mu_low, 0 between, +1 above mu_high
};

// Extinction/survival phase of the homogeneous process with disasters.
// decay_rate is the exponential rate of P(Z_t > 0) in the extinction regimes:
//   (1-p)*kappa - lambda*(mu-1)          when nu <= p
//   kappa*(1 - nu - nu*log(1/nu))        when p < nu <= 1
//   kappa + max(lambda*(1-mu), 0)        when p = 0
PhaseReport classify_homogeneous(double lambda, const OffspringLaw& law,
                                 double kappa, double p);

// Same phase boundaries rearranged as thresholds on the offspring mean.
// p = 1 accepted as the no-disaster limit (both thresholds collapse to 1).
MuThresholds classify_mu_form(double lambda, double mu, double kappa, double p);

// Binary birth-death with disasters: per-capita birth rate b, death rate d.
// Stationary dual moments E[X^k] by the downward product recursion.
std::vector<double> binary_dual_moments(double b, double d, double kappa,
                                        double p, int k_max);

// P(survive | k initial individuals) by the alternating binomial sum over
// dual moments; compensated summation, refused for z0 > 60.
double survival_from_moments(std::uint64_t z0, const std::vector<double>& moments);

// Closed-form survival probability of the binary birth-death case; 0 when
// b - d <= kappa*log(1/p).
double bd_survival_probability(std::uint64_t k, double b, double d,
                               double kappa, double p);

// Closed-form decay rate of P(Z_t > 0) in the binary birth-death extinction
// regime b - d <= kappa*log(1/p).
double bd_decay_rate(double b, double d, double kappa, double p);

}  // namespace pjd

#endif
