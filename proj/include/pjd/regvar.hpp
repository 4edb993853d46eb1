#ifndef PJD_REGVAR_HPP
#define PJD_REGVAR_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pjd/rng.hpp"
#include "pjd/schedule.hpp"

namespace pjd {

// Positive function declared regularly varying: f(xt)/f(t) -> x^beta.
struct RegVarFunction {
  std::function<double(double)> f;
  double beta = 0;
  std::string description;
};

enum class LdpEvent { upper, lower, pathwise_lower };

struct LdpEstimate {
  double rate = 0;        // -(1/t) log(empirical frequency)
  double std_err = 0;     // delta-method standard error of the rate
  double frequency = 0;
  std::uint64_t hits = 0;
};

struct DIntegralReport {
  std::vector<double> t_grid;
  // ratio of sum f(tau_j) to int f*kappa, per grid time (when the integral
  // converges at 0, i.e. beta > -1)
  std::vector<double> ratio_mean;
  std::vector<double> ratio_sd;
  std::vector<double> final_ratios;     // per replica, at t_grid.back()
  std::vector<double> tail_increments;  // per replica, sum over the last grid span
  double mc_mean = 0;   // MC mean of the sum at t_grid.back()
  double mc_se = 0;
  double expected = 0;  // int f*kappa at t_grid.back(), NaN when singular
};

struct BetaEstimate {
  double beta = 0;
  double r2 = 0;
  bool good_fit = false;  // r2 >= 0.99
};

// Poisson large-deviation rate 1 - x + x*log(x).
double ldp_rate(double x);

// Empirical rate of the events {P_t >= xt} (upper, x > 1), {P_t <= xt}
// (lower, x < 1) or {P_s <= xs for all s <= t} (pathwise_lower, x < 1)
// for the unit-rate Poisson process.
LdpEstimate ldp_empirical(double x, double t, std::uint64_t n_replicas,
                          LdpEvent event, std::uint64_t seed);

// Cumulative disaster intensity and its generalized inverse as callables.
std::pair<std::function<double(double)>, std::function<double(double)>>
cumulative_intensity(const RateSchedule& sched);

// Compares the random sum over inhomogeneous Poisson points, sum f(tau_j),
// against its compensator int f*kappa along t_grid.
DIntegralReport d_integral_check(const RegVarFunction& f,
                                 const RateSchedule& sched,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t n_replicas, std::uint64_t seed);

// Log-log slope of f over the top two decades of the grid.
BetaEstimate regvar_estimate_beta(const std::function<double(double)>& f,
                                  const std::vector<double>& t_grid);

}  // namespace pjd

#endif
