#include "pjd/inhom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pjd/mc.hpp"
#include "pjd/numeric.hpp"

namespace pjd {

namespace {

double logaddexp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of I_t = int_0^t exp(-L_s) b_s ds plus the companion quantities,
// accumulated segment-by-segment between disasters; the disaster prefactor
// prod 1/p enters in log space so long horizons cannot overflow.
struct DualCore {
  double L;
  double logI;
};

DualCore dual_core(const RateSchedule& sched, const DisasterPath& path, double t) {
  double c = 0;  // sum log(1/p(tau)) over disasters so far
  double logI = -kInf;
  double prev = 0;
  for (std::size_t i = 0; i < path.tau.size() && path.tau[i] <= t; ++i) {
    double a = sched.int_b_exp_neg_v(prev, path.tau[i]);
    if (a > 0) logI = logaddexp(logI, c + std::log(a));
    double p = path.p_at_tau[i];
    if (!(p > 0)) throw std::invalid_argument("dual state: disaster with p=0");
    c += std::log(1.0 / p);
    prev = path.tau[i];
  }
  double a = sched.int_b_exp_neg_v(prev, t);
  if (a > 0) logI = logaddexp(logI, c + std::log(a));
  return {sched.v(t) - c, logI};
}

double x_from_core(const DualCore& core, double x) {
  if (x <= 0) return 0.0;
  double a = -core.L - std::log(x);  // log of (1/x) exp(-L_t)
  return std::exp(-logaddexp(a, core.logI));
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  std::vector<double> g;
  for (int i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1)));
  return g;
}

// int_0^t kappa*log(1/p) ds
double disaster_cost(const RateSchedule& sched, double t) {
  if (sched.piecewise_constant()) {
    double acc = 0;
    const auto& segs = sched.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      double s0 = segs[i].t_start;
      if (s0 >= t) break;
      double s1 = (i + 1 < segs.size()) ? std::min(segs[i + 1].t_start, t) : t;
      if (segs[i].kappa > 0)
        acc += segs[i].kappa * std::log(1.0 / segs[i].p) * (s1 - s0);
    }
    return acc;
  }
  return adaptive_simpson(
      [&sched](double s) {
        double k = sched.kappa(s);
        return k > 0 ? k * std::log(1.0 / sched.p(s)) : 0.0;
      },
      0, t);
}

}  // namespace

double kendall_pgf(const RateSchedule& sched, double x, double t0, double t,
                   std::uint64_t k) {
  if (x < 0 || x > 1) throw std::invalid_argument("kendall_pgf: x outside [0,1]");
  if (t < t0) throw std::invalid_argument("kendall_pgf: t < t0");
  if (x == 0) return 1.0;
  double inv = (1.0 / x) * std::exp(sched.v(t0) - sched.v(t)) +
               std::exp(sched.v(t0)) * sched.int_b_exp_neg_v(t0, t);
  return std::pow(1.0 - 1.0 / inv, static_cast<double>(k));
}

DisasterPath sample_disaster_path(const RateSchedule& sched, double t_end,
                                  RngStream& rng) {
  DisasterPath path;
  double bound = sched.kappa_bound(t_end);
  if (bound <= 0) return path;
  double t = 0;
  while (true) {
    t += rng.exponential(bound);
    if (t > t_end) break;
    double k = sched.kappa(t);
    if (k > bound * (1.0 + 1e-12))
      throw std::runtime_error("sample_disaster_path: kappa exceeds its declared bound");
    if (rng.u01() * bound < k) {
      path.tau.push_back(t);
      path.p_at_tau.push_back(sched.p(t));
    }
  }
  return path;
}

DualState dual_state(const RateSchedule& sched, const DisasterPath& path,
                     double x, double t) {
  if (x < 0 || x > 1) throw std::invalid_argument("dual_state: x outside [0,1]");
  auto core = dual_core(sched, path, t);
  DualState st;
  st.t = t;
  st.L = core.L;
  st.I = std::exp(core.logI);
  st.X = x_from_core(core, x);
  return st;
}

double conditioned_pgf(const RateSchedule& sched, const DisasterPath& path,
                       double x, double t, std::uint64_t k) {
  if (x < 0 || x > 1) throw std::invalid_argument("conditioned_pgf: x outside [0,1]");
  if (x == 0) return 1.0;
  auto core = dual_core(sched, path, t);
  return std::pow(1.0 - x_from_core(core, x), static_cast<double>(k));
}

LimitReport classify_limit(const RateSchedule& sched, const DisasterPath& path,
                           double x, std::uint64_t k, double t_max) {
  LimitReport rep;
  auto grid = geometric_grid(1.0, t_max, 120);
  std::vector<double> Ls, logIs;
  for (double t : grid) {
    auto core = dual_core(sched, path, t);
    Ls.push_back(core.L);
    logIs.push_back(core.logI);
  }
  // last decade of the grid
  std::size_t tail_start = 0;
  while (grid[tail_start] < t_max / 10.0) ++tail_start;
  double tv_L = 0, tv_I = 0;
  bool L_down = true, L_up = true;
  for (std::size_t i = tail_start + 1; i < grid.size(); ++i) {
    double dL = Ls[i] - Ls[i - 1];
    tv_L += std::abs(dL);
    L_down = L_down && dL <= 1e-12;
    L_up = L_up && dL >= -1e-12;
    double Ia = std::exp(logIs[i - 1]), Ib = std::exp(logIs[i]);
    tv_I += std::abs(Ib - Ia);
  }
  double L_end = Ls.back(), logI_end = logIs.back();
  bool L_finite = tv_L < 1e-6;
  bool I_finite = std::isfinite(std::exp(logI_end)) && tv_I < 1e-6;
  if ((L_down && L_end < -50.0) || logI_end > 50.0) {
    rep.outcome = LimitOutcome::extinction_sure;
    rep.limit_value = 1.0;
    rep.detail = L_end < -50.0 ? "L diverges to -inf" : "I diverges";
    return rep;
  }
  if (L_up && L_end > 50.0 && I_finite) {
    rep.outcome = LimitOutcome::x_independent;
    double I = std::exp(logI_end);
    rep.limit_value = std::pow(1.0 - 1.0 / I, static_cast<double>(k));
    rep.detail = "L diverges to +inf, I finite";
    return rep;
  }
  if (L_finite && I_finite) {
    // the x-dependent branch additionally needs finite total activity and a
    // nonvanishing disaster product; both follow from the tails settling
    double activity_tail = adaptive_simpson(
        [&sched](double s) { return sched.b(s) + sched.d(s); }, t_max / 10.0,
        t_max, 1e-8);
    bool no_late_disasters =
        path.tau.empty() || path.tau.back() < t_max / 10.0;
    if (activity_tail < 1e-6 && no_late_disasters) {
      rep.outcome = LimitOutcome::x_dependent;
      auto core = dual_core(sched, path, t_max);
      rep.limit_value = std::pow(1.0 - x_from_core(core, x), static_cast<double>(k));
      rep.detail = "L and I converge, activity integrable";
      return rep;
    }
  }
  rep.outcome = LimitOutcome::inconclusive;
  rep.detail = "tail behavior of L_t not resolved on the grid";
  return rep;
}

std::pair<double, double> inhom_survival_mc(const RateSchedule& sched, double t,
                                            std::uint64_t k,
                                            std::uint64_t n_paths,
                                            std::uint64_t seed) {
  struct Partial {
    Accum acc;
    void merge(const Partial& o) { acc.merge(o.acc); }
  };
  auto res = chunked_reduce<Partial>(n_paths, [&](std::uint64_t rep, Partial& p) {
    RngStream rng(seed, rep);
    auto path = sample_disaster_path(sched, t, rng);
    p.acc.add(1.0 - conditioned_pgf(sched, path, 1.0, t, k));
  });
  return {res.acc.mean, res.acc.std_err()};
}

CriterionReport check_inhom_criterion(const RateSchedule& sched,
                                      const std::function<double(double)>& h,
                                      double eps, double t_cutoff) {
  if (eps <= 0 || eps >= 1) throw std::invalid_argument("check_inhom_criterion: eps in (0,1)");
  CriterionReport rep;
  auto grid = geometric_grid(1.0, t_cutoff, 40);
  std::vector<double> ratio;
  for (double t : grid) {
    double g = sched.v(t) - disaster_cost(sched, t);
    double ht = h(t);
    if (!(ht > 0)) throw std::invalid_argument("check_inhom_criterion: h must be positive on the grid");
    ratio.push_back(g / ht);
  }
  std::size_t tail_start = 0;
  while (grid[tail_start] < t_cutoff / 10.0) ++tail_start;
  bool all_pos = true, all_neg = true;
  for (std::size_t i = tail_start; i < ratio.size(); ++i) {
    all_pos = all_pos && ratio[i] > 0.1;
    all_neg = all_neg && ratio[i] < -0.1;
  }
  rep.iota = ratio.back();
  if (all_neg) {
    rep.verdict = CriterionVerdict::extinction_sure;
    rep.detail = "normalized drift integral stabilizes negative";
    return rep;
  }
  if (all_pos) {
    auto integrand = [&](double s) {
      return std::exp(-(1.0 - eps) * h(s)) * sched.b(s);
    };
    double head = adaptive_simpson(integrand, 0, t_cutoff / 10.0, 1e-9);
    double tail = adaptive_simpson(integrand, t_cutoff / 10.0, t_cutoff, 1e-9);
    if (tail < 1e-8 * std::max(head, 1.0)) {
      rep.verdict = CriterionVerdict::survival_possible;
      rep.detail = "positive normalized drift and integrable damped births";
      return rep;
    }
    rep.verdict = CriterionVerdict::inconclusive;
    rep.detail = "damped-birth integral not settled at the cutoff";
    return rep;
  }
  rep.verdict = CriterionVerdict::inconclusive;
  rep.detail = "normalized drift integral does not stabilize in sign";
  return rep;
}

std::vector<std::pair<double, double>> conditional_rate_estimate(
    const RateSchedule& sched, const DisasterPath& path, std::uint64_t k,
    const std::function<double(double)>& h, const std::vector<double>& t_grid) {
  (void)k;
  std::vector<std::pair<double, double>> out;
  for (double t : t_grid) {
    if (t < 1.0) throw std::invalid_argument("conditional_rate_estimate: grid starts at t >= 1");
    auto core = dual_core(sched, path, t);
    double val = std::max(-core.L, core.logI) / h(t);
    out.emplace_back(t, val);
  }
  return out;
}

}  // namespace pjd
