#include "pjd/regvar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pjd/mc.hpp"
#include "pjd/numeric.hpp"

namespace pjd {

double ldp_rate(double x) {
  if (!(x > 0)) throw std::domain_error("ldp_rate: x must be positive");
  return 1.0 - x + x * std::log(x);
}

LdpEstimate ldp_empirical(double x, double t, std::uint64_t n_replicas,
                          LdpEvent event, std::uint64_t seed) {
  if (event == LdpEvent::upper && !(x > 1))
    throw std::invalid_argument("ldp_empirical: upper event needs x > 1");
  if (event != LdpEvent::upper && !(x > 0 && x < 1))
    throw std::invalid_argument("ldp_empirical: lower events need x in (0,1)");
  struct Partial {
    std::uint64_t hits = 0, n = 0;
    void merge(const Partial& o) {
      hits += o.hits;
      n += o.n;
    }
  };
  auto res = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& pt) {
    RngStream rng(seed, rep);
    bool hit = false;
    switch (event) {
      case LdpEvent::upper:
        hit = static_cast<double>(rng.poisson(t)) >= x * t;
        break;
      case LdpEvent::lower:
        hit = static_cast<double>(rng.poisson(t)) <= x * t;
        break;
      case LdpEvent::pathwise_lower: {
        // P_s <= xs for all s <= t iff j <= x*tau_j at every jump time
        hit = true;
        double s = 0;
        std::uint64_t j = 0;
        while (true) {
          s += rng.exponential(1.0);
          if (s > t) break;
          ++j;
          if (static_cast<double>(j) > x * s) {
            hit = false;
            break;
          }
        }
        break;
      }
    }
    pt.hits += hit ? 1 : 0;
    ++pt.n;
  });
  if (res.hits == 0)
    throw std::runtime_error("ldp_empirical: no replica realized the event; lower t or raise n");
  LdpEstimate est;
  est.hits = res.hits;
  est.frequency = static_cast<double>(res.hits) / static_cast<double>(res.n);
  est.rate = -std::log(est.frequency) / t;
  double se_f = std::sqrt(est.frequency * (1.0 - est.frequency) / static_cast<double>(res.n));
  est.std_err = se_f / (est.frequency * t);
  return est;
}

std::pair<std::function<double(double)>, std::function<double(double)>>
cumulative_intensity(const RateSchedule& sched) {
  return {[sched](double t) { return sched.Lambda(t); },
          [sched](double u) { return sched.Lambda_inv(u); }};
}

DIntegralReport d_integral_check(const RegVarFunction& f,
                                 const RateSchedule& sched,
                                 const std::vector<double>& t_grid,
                                 std::uint64_t n_replicas, std::uint64_t seed) {
  if (t_grid.size() < 2 || !std::is_sorted(t_grid.begin(), t_grid.end()))
    throw std::invalid_argument("d_integral_check: need a sorted grid of >= 2 times");
  double t_end = t_grid.back();
  double total_mass = sched.Lambda(t_end);
  bool ratio_ok = f.beta > -1.0;
  std::vector<double> compensator(t_grid.size(), std::numeric_limits<double>::quiet_NaN());
  if (ratio_ok) {
    auto fk = [&](double s) { return f.f(s) * sched.kappa(s); };
    // dyadic subdivision toward 0 handles the integrable singularity of
    // regularly varying f with beta in (-1, 0)
    double acc = 0;
    double hi = t_grid[0];
    for (int j = 0; j < 52; ++j) {
      double lo = hi * 0.5;
      acc += adaptive_simpson(fk, lo, hi, 1e-9);
      hi = lo;
    }
    compensator[0] = acc;
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
      acc += adaptive_simpson(fk, t_grid[i - 1], t_grid[i], 1e-8);
      compensator[i] = acc;
    }
  }
  struct Partial {
    std::vector<double> sums;  // per replica per grid-time, flattened by replica
    std::vector<double> final_ratio_slots, tail_slots;
    Accum final_sum;
    std::vector<Accum> ratio_acc;
    void merge(const Partial& o) {
      final_ratio_slots.insert(final_ratio_slots.end(), o.final_ratio_slots.begin(), o.final_ratio_slots.end());
      tail_slots.insert(tail_slots.end(), o.tail_slots.begin(), o.tail_slots.end());
      final_sum.merge(o.final_sum);
      if (ratio_acc.empty()) ratio_acc.resize(o.ratio_acc.size());
      for (std::size_t i = 0; i < o.ratio_acc.size(); ++i) ratio_acc[i].merge(o.ratio_acc[i]);
    }
  };
  auto res = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& pt) {
    if (pt.ratio_acc.empty()) pt.ratio_acc.resize(t_grid.size());
    RngStream rng(seed, rep);
    // unit-rate Poisson time-changed through Lambda_inv: exact in distribution
    double u = 0;
    std::size_t gi = 0;
    double running = 0;
    std::vector<double> at_grid(t_grid.size(), 0.0);
    while (true) {
      u += rng.exponential(1.0);
      if (u > total_mass) break;
      double tau = sched.Lambda_inv(u);
      while (gi < t_grid.size() && t_grid[gi] < tau) at_grid[gi++] = running;
      if (tau > t_end) break;
      running += f.f(tau);
    }
    while (gi < t_grid.size()) at_grid[gi++] = running;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
      if (ratio_ok && compensator[i] > 0)
        pt.ratio_acc[i].add(at_grid[i] / compensator[i]);
    }
    if (ratio_ok && compensator.back() > 0)
      pt.final_ratio_slots.push_back(at_grid.back() / compensator.back());
    pt.tail_slots.push_back(at_grid.back() - at_grid[t_grid.size() - 2]);
    pt.final_sum.add(at_grid.back());
  });
  DIntegralReport rep;
  rep.t_grid = t_grid;
  for (auto& a : res.ratio_acc) {
    rep.ratio_mean.push_back(a.n ? a.mean : std::numeric_limits<double>::quiet_NaN());
    rep.ratio_sd.push_back(a.n > 1 ? std::sqrt(a.variance()) : 0.0);
  }
  rep.final_ratios = std::move(res.final_ratio_slots);
  rep.tail_increments = std::move(res.tail_slots);
  rep.mc_mean = res.final_sum.mean;
  rep.mc_se = res.final_sum.std_err();
  rep.expected = ratio_ok ? compensator.back() : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

BetaEstimate regvar_estimate_beta(const std::function<double(double)>& f,
                                  const std::vector<double>& t_grid) {
  if (t_grid.size() < 4) throw std::invalid_argument("regvar_estimate_beta: grid too small");
  double t_max = t_grid.back();
  if (!(t_grid.front() > 0) || !(t_max / t_grid.front() >= 1e4))
    throw std::invalid_argument("regvar_estimate_beta: grid must span >= 4 decades");
  std::vector<double> xs, ys;
  for (double t : t_grid) {
    if (t < t_max / 100.0) continue;  // keep the top two decades
    double v = f(t);
    if (!(v > 0)) throw std::invalid_argument("regvar_estimate_beta: f must be positive");
    xs.push_back(std::log(t));
    ys.push_back(std::log(v));
  }
  auto fit = linear_fit(xs, ys);
  return {fit.slope, fit.r2, fit.r2 >= 0.99};
}

}  // namespace pjd
