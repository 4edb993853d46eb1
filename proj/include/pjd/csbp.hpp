#ifndef PJD_CSBP_HPP
#define PJD_CSBP_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pjd/drift.hpp"

namespace pjd {

// Continuous-state branching mechanism (b, c, N) plus the disaster
// parameters, defining the dual drift
//   alpha(x) = b*x - c*x^2 - int (e^{-xy} - 1 + xy) N(dy).
// N is a finite list of atoms (y_i, mass_i); gridded densities enter as
// quadrature atoms.
struct BranchingMechanism {
  double b = 0;
  double c = 0;
  std::vector<std::pair<double, double>> atoms;  // (y, mass)
  double kappa = 1.0;
  double p = 0.5;
};

struct ExtinctionEstimate {
  double value = 0;        // MC mean of exp(-z * X_t), X started at x_max
  double std_err = 0;
  double sensitivity = 0;  // |estimate(x_max) - estimate(2*x_max)|
};

// Checks atom validity, the moment condition int min(y, y^2) N(dy) < inf on
// the finite representation, and eventual negativity of alpha.
void validate_mechanism(const BranchingMechanism& mech);

double mechanism_drift(const BranchingMechanism& mech, double x);

// Largest root xi of alpha; 0 when alpha <= 0 on (0, inf).
double largest_root(const BranchingMechanism& mech);

DriftSpec mechanism_drift_spec(const BranchingMechanism& mech, double x_max);

// P(Z_t = 0 | Z_0 = z) ~= E[exp(-z X_t) | X_0 = x_max] via the dual
// multiplicative-jump PDMP, x_max standing in for X_0 = infinity; the
// sensitivity entry reports the change under doubling x_max.
ExtinctionEstimate extinction_probability(const BranchingMechanism& mech,
                                          double z, double t, double x_max,
                                          std::uint64_t n_replicas,
                                          std::uint64_t seed);

// Closed-form decay rate of P(Z_t > 0) in the extinction regime
// b <= kappa*log(1/p):
//   (1-p)*kappa - b                      when b <= kappa*p*log(1/p)
//   kappa - (kappa/gamma)(1 + log gamma) otherwise, gamma = kappa*log(1/p)/b
double csbp_decay_rate(const BranchingMechanism& mech);

}  // namespace pjd

#endif
