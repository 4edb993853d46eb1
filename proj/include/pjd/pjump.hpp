#ifndef PJD_PJUMP_HPP
#define PJD_PJUMP_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "pjd/drift.hpp"
#include "pjd/path.hpp"
#include "pjd/rng.hpp"

namespace pjd {

// Multiplicative-jump PDMP: flow x' = alpha(x) between Poisson(kappa) jump
// times, at which the state is multiplied by p.
struct PJumpConfig {
  DriftSpec drift;
  double p = 0.5;
  double kappa = 1.0;
  double x0 = 1.0;
  double t_end = 10.0;
  double ode_step = kInf;  // max integrator step
};

struct MomentEstimate {
  int k = 1;
  double t = 0;
  double value = 0;
  double std_err = 0;
  std::uint64_t n_replicas = 0;
};

struct DecayEstimate {
  double rate = 0;
  double std_err = 0;
  double r2 = 0;
};

struct StationaryIdentity {
  int k;
  double lhs;      // E[X^k]
  double rhs;      // (k/(1-p^k)) E[X^{k-1} alpha(X)]
  double rel_err;  // |lhs-rhs| / max(lhs, tiny)
};

void validate_pjump(const PJumpConfig& cfg);

// Simulated path; records the state just before each jump (checkpoint kind,
// at the largest representable time below the jump instant), the post-jump
// state, requested checkpoints, and the endpoint.
PathRecord simulate_pjump(const PJumpConfig& cfg, RngStream& rng,
                          const std::vector<double>& checkpoints = {});

// States of one replica at the given (sorted) times; cheaper than a full
// PathRecord when only marginals are needed.
std::vector<double> simulate_pjump_at(const PJumpConfig& cfg,
                                      const std::vector<double>& times,
                                      RngStream& rng);

std::vector<MomentEstimate> estimate_moment(const PJumpConfig& cfg, int k,
                                            const std::vector<double>& times,
                                            std::uint64_t n_replicas,
                                            std::uint64_t seed);

// Least-squares slope of -log E[X_t^k] over [t_lo, t_hi]. Requires the
// subcritical regime alpha0_slope < kappa*log(1/p).
DecayEstimate estimate_decay_rate(const PJumpConfig& cfg, int k, double t_lo,
                                  double t_hi, std::uint64_t n_replicas,
                                  std::uint64_t seed);

// Long-run time averages (1/T) int f(X_s) ds over [t_burnin, t_end] along a
// single path, for up to 8 functions in one pass. Requires the supercritical
// regime alpha0_slope > kappa*log(1/p).
std::vector<double> ergodic_averages(const PJumpConfig& cfg,
                                     const std::vector<std::function<double(double)>>& fs,
                                     double t_burnin, double t_end,
                                     RngStream& rng);

double ergodic_average(const PJumpConfig& cfg,
                       const std::function<double(double)>& f, double t_burnin,
                       double t_end, RngStream& rng);

// Both sides of the stationary identity
// E[X^k] = (k/(1-p^k)) E[X^{k-1} alpha(X)] for k = 1..k_max.
std::vector<StationaryIdentity> stationary_moment_check(const PJumpConfig& cfg,
                                                        int k_max, double t_end,
                                                        RngStream& rng);

}  // namespace pjd

#endif
