#ifndef PJD_INHOM_HPP
#define PJD_INHOM_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pjd/rng.hpp"
#include "pjd/schedule.hpp"

namespace pjd {

// One realization of the disaster clock: an inhomogeneous Poisson process
// with rate kappa(t), plus the survival factor in force at each hit.
struct DisasterPath {
  std::vector<double> tau;
  std::vector<double> p_at_tau;
};

// State of the conditioned dual at time t:
//   L_t = int_0^t (b-d) ds - sum_{tau_k <= t} log(1/p(tau_k))
//   I_t = int_0^t exp(-L_s) b_s ds
//   1/X_t = (1/x) exp(-L_t) + I_t ... times the exp(-L_t) cancellation below
struct DualState {
  double t = 0;
  double L = 0;
  double I = 0;
  double X = 0;
};

enum class LimitOutcome { extinction_sure, x_independent, x_dependent, inconclusive };

struct LimitReport {
  LimitOutcome outcome = LimitOutcome::inconclusive;
  double limit_value = 0;  // lim (1-X_t)^k where defined
  std::string detail;
};

enum class CriterionVerdict { survival_possible, extinction_sure, inconclusive };

struct CriterionReport {
  CriterionVerdict verdict = CriterionVerdict::inconclusive;
  double iota = 0;  // sign of (1/h(t)) int (b-d-kappa*log(1/p)) at the cutoff
  std::string detail;
};

// Extinction pgf of the disaster-free inhomogeneous birth-death process:
// E[(1-x)^{Z_t} | Z_{t0} = k] with
//   1/s(t,x) = (1/x) e^{v(t0)-v(t)} + e^{v(t0)} int_{t0}^t b_y e^{-v(y)} dy.
double kendall_pgf(const RateSchedule& sched, double x, double t0, double t,
                   std::uint64_t k);

// Inhomogeneous Poisson sample of the disaster clock by thinning.
DisasterPath sample_disaster_path(const RateSchedule& sched, double t_end,
                                  RngStream& rng);

// Dual state along a fixed disaster realization.
DualState dual_state(const RateSchedule& sched, const DisasterPath& path,
                     double x, double t);

// E[(1-x)^{Z_t} | disasters] = (1 - X_t)^k given the realized disaster times.
double conditioned_pgf(const RateSchedule& sched, const DisasterPath& path,
                       double x, double t, std::uint64_t k);

// Classifies lim (1-X_t)^k over a geometric time grid up to t_max:
// extinction-sure when L -> -inf or I -> inf; x-independent when L -> +inf
// with I finite; x-dependent when both int(b+d) and sum log(1/p(tau)) stay
// finite. Numerical tail detection, so "inconclusive" is a possible verdict.
LimitReport classify_limit(const RateSchedule& sched, const DisasterPath& path,
                           double x, std::uint64_t k, double t_max = 1e4);

// P(Z_t > 0 | Z_0 = k) by averaging 1 - conditioned_pgf(x=1) over sampled
// disaster paths; the conditioning integrates the branching noise out.
std::pair<double, double> inhom_survival_mc(const RateSchedule& sched, double t,
                                            std::uint64_t k,
                                            std::uint64_t n_paths,
                                            std::uint64_t seed);

// Survival criterion under a caller-supplied normalization h: checks the
// sign of (1/h(t)) int_0^t (b-d-kappa*log(1/p)) ds on a geometric grid and,
// when positive, the finiteness of int exp(-(1-eps)h(s)) b_s ds up to the
// cutoff.
CriterionReport check_inhom_criterion(const RateSchedule& sched,
                                      const std::function<double(double)>& h,
                                      double eps, double t_cutoff = 1e4);

// Normalized conditional extinction-rate series
// (1/h(t)) max{-L_t, log I_t} along t_grid.
std::vector<std::pair<double, double>> conditional_rate_estimate(
    const RateSchedule& sched, const DisasterPath& path, std::uint64_t k,
    const std::function<double(double)>& h, const std::vector<double>& t_grid);

}  // namespace pjd

#endif
