#ifndef PJD_DRIFT_HPP
#define PJD_DRIFT_HPP

#include <functional>
#include <optional>

#include "pjd/numeric.hpp"
#include "pjd/offspring.hpp"

namespace pjd {

// Drift field of the multiplicative-jump PDMP, on [0, domain_end]
// (domain_end may be +inf). Characteristics are filled by
// drift_characteristics or supplied directly when known in closed form.
struct DriftSpec {
  std::function<double(double)> alpha;
  double domain_end = kInf;
  double alpha0_slope = 0;   // lim_{x->0} alpha(x)/x, +inf allowed
  double alpha_hat = 0;      // sup_{x>0} alpha(x)/x
  std::optional<double> x_alpha;  // smallest positive zero, if any
  double s_alpha = 0;        // sup{x : alpha(x) > 0}
  bool concave = false;

  double operator()(double x) const { return alpha(x); }
};

// Numerically derive the characteristics of a black-box drift.
// alpha0_slope by extrapolation on x = 2^-j, j = 10..40 (declared +inf when
// the sequence is increasing past 1e8); alpha_hat by grid supremum with local
// refinement; x_alpha and s_alpha by sign-change bisection.
DriftSpec drift_characteristics(std::function<double(double)> alpha,
                                double domain_end);

// delta*x - theta*x^2 on [0, inf).
DriftSpec logistic_drift(double delta, double theta);

// Dual drift of a branching process: lambda*(1 - x - h(1-x)) on [0,1].
DriftSpec dual_drift(double lambda, const OffspringLaw& law);

}  // namespace pjd

#endif
