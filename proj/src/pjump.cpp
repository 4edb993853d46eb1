#include "pjd/pjump.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pjd/mc.hpp"
#include "pjd/numeric.hpp"

namespace pjd {

namespace {

constexpr double kDomainSlack = 1e-7;
constexpr double kAbsorb = 1e-300;

double confine(double x, double bound, const char* where) {
  if (x < 0.0) {
    if (x < -kDomainSlack) throw IntegrationError(std::string("pjump: state escaped below 0 in ") + where);
    return 0.0;
  }
  if (x > bound + kDomainSlack)
    throw IntegrationError(std::string("pjump: state escaped above its bound in ") + where);
  return std::min(x, bound);
}

double flow(const PJumpConfig& cfg, double x, double dt, double bound) {
  if (dt <= 0.0 || x < kAbsorb) return x < kAbsorb ? 0.0 : x;
  auto f = [&cfg, bound](const std::array<double, 1>& y, std::array<double, 1>& dy) {
    dy[0] = cfg.drift.alpha(std::clamp(y[0], 0.0, bound));
  };
  auto y = rk45_integrate<1>(f, {x}, 0.0, dt, 1e-9, 1e-12, cfg.ode_step);
  return confine(y[0], bound, "flow");
}

double crit_gap(const PJumpConfig& cfg) {
  // alpha0_slope - kappa*log(1/p); sign classifies the regime
  double lg = cfg.p > 0 ? std::log(1.0 / cfg.p) : kInf;
  if (std::isinf(cfg.drift.alpha0_slope) && std::isinf(lg)) return 0.0;
  if (std::isinf(cfg.drift.alpha0_slope)) return kInf;
  if (std::isinf(lg)) return -kInf;
  return cfg.drift.alpha0_slope - cfg.kappa * lg;
}

}  // namespace

void validate_pjump(const PJumpConfig& cfg) {
  if (!(cfg.kappa > 0)) throw std::invalid_argument("pjump: kappa must be positive");
  if (cfg.p < 0 || cfg.p > 1) throw std::invalid_argument("pjump: p outside [0,1]");
  if (cfg.x0 < 0 || cfg.x0 > cfg.drift.domain_end)
    throw std::invalid_argument("pjump: x0 outside the drift domain");
  if (cfg.drift.alpha(0.0) < 0) throw std::invalid_argument("pjump: alpha(0) < 0");
  if (std::isfinite(cfg.drift.domain_end) && cfg.drift.alpha(cfg.drift.domain_end) > 1e-12)
    throw std::invalid_argument("pjump: alpha(domain_end) > 0");
  if (!std::isfinite(cfg.drift.s_alpha))
    throw std::invalid_argument("pjump: s_alpha must be finite");
}

PathRecord simulate_pjump(const PJumpConfig& cfg, RngStream& rng,
                          const std::vector<double>& checkpoints) {
  validate_pjump(cfg);
  double bound = std::max(cfg.x0, cfg.drift.s_alpha);
  PathRecord rec;
  rec.seed = rng.seed();
  rec.stream = rng.stream_id();
  double t = 0, x = cfg.x0;
  rec.push(0.0, x, EventKind::checkpoint);
  auto cp = checkpoints.begin();
  while (cp != checkpoints.end() && *cp <= 0.0) ++cp;
  double t_jump = rng.exponential(cfg.kappa);
  while (t < cfg.t_end) {
    double t_next = std::min(t_jump, cfg.t_end);
    while (cp != checkpoints.end() && *cp < t_next) {
      x = flow(cfg, x, *cp - t, bound);
      t = *cp++;
      rec.push(t, x, EventKind::checkpoint);
    }
    x = flow(cfg, x, t_next - t, bound);
    t = t_next;
    if (t_jump <= cfg.t_end) {
      // pre-jump state, stamped just below the jump instant
      rec.push(std::nextafter(t, 0.0), x, EventKind::checkpoint);
      x *= cfg.p;
      rec.push(t, x, EventKind::jump);
      t_jump = t + rng.exponential(cfg.kappa);
    } else {
      rec.push(t, x, EventKind::checkpoint);
      break;
    }
  }
  return rec;
}

std::vector<double> simulate_pjump_at(const PJumpConfig& cfg,
                                      const std::vector<double>& times,
                                      RngStream& rng) {
  validate_pjump(cfg);
  double bound = std::max(cfg.x0, cfg.drift.s_alpha);
  std::vector<double> out;
  out.reserve(times.size());
  double t = 0, x = cfg.x0;
  double t_jump = rng.exponential(cfg.kappa);
  for (double tq : times) {
    while (t_jump <= tq) {
      x = flow(cfg, x, t_jump - t, bound) * cfg.p;
      t = t_jump;
      t_jump = t + rng.exponential(cfg.kappa);
    }
    x = flow(cfg, x, tq - t, bound);
    t = tq;
    out.push_back(x);
  }
  return out;
}

std::vector<MomentEstimate> estimate_moment(const PJumpConfig& cfg, int k,
                                            const std::vector<double>& times,
                                            std::uint64_t n_replicas,
                                            std::uint64_t seed) {
  if (n_replicas < 100) throw std::invalid_argument("estimate_moment: need >= 100 replicas");
  if (k < 1) throw std::invalid_argument("estimate_moment: k >= 1");
  std::vector<double> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  struct Partial {
    std::vector<Accum> acc;
    void merge(const Partial& o) {
      if (acc.empty()) acc.resize(o.acc.size());
      for (std::size_t i = 0; i < o.acc.size(); ++i) acc[i].merge(o.acc[i]);
    }
  };
  auto res = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& p) {
    if (p.acc.empty()) p.acc.resize(sorted.size());
    RngStream rng(seed, rep);
    auto xs = simulate_pjump_at(cfg, sorted, rng);
    for (std::size_t i = 0; i < xs.size(); ++i)
      p.acc[i].add(std::pow(xs[i], k));
  });
  std::vector<MomentEstimate> out;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out.push_back(MomentEstimate{k, sorted[i], res.acc[i].mean, res.acc[i].std_err(), n_replicas});
  }
  return out;
}

DecayEstimate estimate_decay_rate(const PJumpConfig& cfg, int k, double t_lo,
                                  double t_hi, std::uint64_t n_replicas,
                                  std::uint64_t seed) {
  if (!(t_hi > t_lo) || t_lo < 0) throw std::invalid_argument("estimate_decay_rate: bad window");
  if (crit_gap(cfg) >= 0)
    throw RegimeError("estimate_decay_rate: not subcritical (alpha0_slope >= kappa*log(1/p))");
  const int n_pts = 13;
  std::vector<double> ts;
  for (int i = 0; i < n_pts; ++i)
    ts.push_back(t_lo + (t_hi - t_lo) * i / (n_pts - 1));
  PJumpConfig c = cfg;
  c.t_end = t_hi;
  auto ms = estimate_moment(c, k, ts, n_replicas, seed);
  std::vector<double> xs, ys;
  for (const auto& m : ms) {
    if (m.value < 1e-300) continue;
    xs.push_back(m.t);
    ys.push_back(-std::log(m.value));
  }
  if (xs.size() < 3)
    throw IntegrationError("estimate_decay_rate: moments underflow; use a smaller horizon");
  auto fit = linear_fit(xs, ys);
  return {fit.slope, fit.slope_se, fit.r2};
}

std::vector<double> ergodic_averages(const PJumpConfig& cfg,
                                     const std::vector<std::function<double(double)>>& fs,
                                     double t_burnin, double t_end,
                                     RngStream& rng) {
  validate_pjump(cfg);
  if (fs.empty() || fs.size() > 8) throw std::invalid_argument("ergodic_averages: 1..8 functions");
  if (!(t_end >= 10.0 * t_burnin)) throw std::invalid_argument("ergodic_averages: t_end < 10*t_burnin");
  if (crit_gap(cfg) <= 0)
    throw RegimeError("ergodic_averages: not supercritical (stationary limit is degenerate)");
  double bound = std::max(cfg.x0, cfg.drift.s_alpha);
  constexpr std::size_t M = 9;
  std::array<double, M> y{};
  y[0] = cfg.x0;
  auto deriv = [&](const std::array<double, M>& v, std::array<double, M>& dv) {
    double x = std::clamp(v[0], 0.0, bound);
    dv[0] = cfg.drift.alpha(x);
    for (std::size_t i = 0; i < fs.size(); ++i) dv[1 + i] = fs[i](x);
    for (std::size_t i = fs.size(); i + 1 < M; ++i) dv[1 + i] = 0.0;
  };
  std::vector<double> at_burnin(fs.size(), 0.0);
  double t = 0;
  bool burnin_done = t_burnin <= 0;
  double t_jump = rng.exponential(cfg.kappa);
  while (t < t_end) {
    double t_next = std::min(t_jump, t_end);
    if (!burnin_done && t_burnin < t_next) {
      y = rk45_integrate<M>(deriv, y, t, t_burnin, 1e-9, 1e-12, cfg.ode_step);
      t = t_burnin;
      for (std::size_t i = 0; i < fs.size(); ++i) at_burnin[i] = y[1 + i];
      burnin_done = true;
    }
    y = rk45_integrate<M>(deriv, y, t, t_next, 1e-9, 1e-12, cfg.ode_step);
    y[0] = confine(y[0], bound, "ergodic_averages");
    t = t_next;
    if (t_jump <= t_end) {
      y[0] *= cfg.p;
      t_jump = t + rng.exponential(cfg.kappa);
    }
  }
  std::vector<double> out(fs.size());
  double span = t_end - t_burnin;
  for (std::size_t i = 0; i < fs.size(); ++i)
    out[i] = (y[1 + i] - at_burnin[i]) / span;
  return out;
}

double ergodic_average(const PJumpConfig& cfg,
                       const std::function<double(double)>& f, double t_burnin,
                       double t_end, RngStream& rng) {
  return ergodic_averages(cfg, {f}, t_burnin, t_end, rng)[0];
}

std::vector<StationaryIdentity> stationary_moment_check(const PJumpConfig& cfg,
                                                        int k_max, double t_end,
                                                        RngStream& rng) {
  if (k_max < 1 || k_max > 4) throw std::invalid_argument("stationary_moment_check: k_max in 1..4");
  std::vector<std::function<double(double)>> fs;
  for (int k = 1; k <= k_max; ++k)
    fs.push_back([k](double x) { return std::pow(x, k); });
  for (int k = 1; k <= k_max; ++k)
    fs.push_back([k, &cfg](double x) {
      return std::pow(x, k - 1) * cfg.drift.alpha(x);
    });
  auto avg = ergodic_averages(cfg, fs, t_end / 100.0, t_end, rng);
  std::vector<StationaryIdentity> out;
  for (int k = 1; k <= k_max; ++k) {
    double lhs = avg[k - 1];
    double rhs = k / (1.0 - std::pow(cfg.p, k)) * avg[k_max + k - 1] / cfg.kappa;
    out.push_back({k, lhs, rhs, std::abs(lhs - rhs) / std::max(lhs, 1e-12)});
  }
  return out;
}

}  // namespace pjd
