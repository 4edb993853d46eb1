#include "pjd/branching.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pjd/drift.hpp"
#include "pjd/mc.hpp"
#include "pjd/numeric.hpp"
#include "pjd/pjump.hpp"

namespace pjd {

void validate_branching(const BranchingConfig& cfg) {
  if (!(cfg.lambda > 0)) throw std::invalid_argument("branching: lambda must be positive");
  if (!(cfg.kappa > 0)) throw std::invalid_argument("branching: kappa must be positive");
  if (cfg.p < 0 || cfg.p > 1) throw std::invalid_argument("branching: p outside [0,1]");
  if (cfg.pop_cap == 0) throw std::invalid_argument("branching: pop_cap must be positive");
}

BranchingPath simulate_branching(const BranchingConfig& cfg, RngStream& rng) {
  validate_branching(cfg);
  BranchingPath out;
  out.record.seed = rng.seed();
  out.record.stream = rng.stream_id();
  std::uint64_t z = cfg.z0;
  double t = 0;
  out.record.push(0.0, static_cast<double>(z), EventKind::checkpoint);
  while (z > 0 && t < cfg.t_end) {
    double total = cfg.lambda * static_cast<double>(z) + cfg.kappa;
    t += rng.exponential(total);
    if (t >= cfg.t_end) break;
    if (rng.u01() * total < cfg.lambda * static_cast<double>(z)) {
      std::uint64_t k = cfg.law.sample(rng);
      z = z - 1 + k;
      out.record.push(t, static_cast<double>(z),
                      k == 0 ? EventKind::death : EventKind::birth);
    } else {
      z = static_cast<std::uint64_t>(rng.binomial(static_cast<long>(z), cfg.p));
      out.record.push(t, static_cast<double>(z), EventKind::disaster);
    }
    if (z >= cfg.pop_cap) {
      out.exploded = true;
      break;
    }
  }
  return out;
}

std::vector<std::uint64_t> branching_state_at(const BranchingConfig& cfg,
                                              const std::vector<double>& times,
                                              RngStream& rng) {
  validate_branching(cfg);
  std::vector<std::uint64_t> out;
  out.reserve(times.size());
  std::uint64_t z = cfg.z0;
  double t = 0;
  for (double tq : times) {
    while (z > 0) {
      if (z >= cfg.pop_cap) {
        // capped: for p > 0 the population is pinned alive (extinction from
        // pop_cap individuals is negligible); for p = 0 only the disaster
        // clock matters, and the first hit kills everything
        if (cfg.p > 0) break;
        double dt = rng.exponential(cfg.kappa);
        if (t + dt > tq) break;
        t += dt;
        z = 0;
        break;
      }
      double total = cfg.lambda * static_cast<double>(z) + cfg.kappa;
      double dt = rng.exponential(total);
      if (t + dt > tq) {
        t = tq;
        break;
      }
      t += dt;
      if (rng.u01() * total < cfg.lambda * static_cast<double>(z)) {
        z = z - 1 + cfg.law.sample(rng);
        if (z >= cfg.pop_cap) z = cfg.pop_cap;
      } else {
        z = static_cast<std::uint64_t>(rng.binomial(static_cast<long>(z), cfg.p));
      }
    }
    t = std::max(t, tq);
    out.push_back(z);
  }
  return out;
}

std::pair<double, double> survival_probability_mc(const BranchingConfig& cfg,
                                                  double t,
                                                  std::uint64_t n_replicas,
                                                  std::uint64_t seed) {
  if (n_replicas < 1000) throw std::invalid_argument("survival_probability_mc: need >= 1000 replicas");
  struct Partial {
    std::uint64_t alive = 0;
    std::uint64_t n = 0;
    void merge(const Partial& o) {
      alive += o.alive;
      n += o.n;
    }
  };
  auto res = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& p) {
    RngStream rng(seed, rep);
    auto zs = branching_state_at(cfg, {t}, rng);
    p.alive += zs[0] > 0 ? 1 : 0;
    ++p.n;
  });
  double est = static_cast<double>(res.alive) / static_cast<double>(res.n);
  double se = std::sqrt(est * (1.0 - est) / static_cast<double>(res.n));
  return {est, se};
}

std::vector<std::pair<double, double>> survival_curve_splitting(
    const BranchingConfig& cfg, const std::vector<double>& checkpoints,
    std::uint64_t n_particles, std::uint64_t seed) {
  validate_branching(cfg);
  if (n_particles < 100) throw std::invalid_argument("survival_curve_splitting: need >= 100 particles");
  if (checkpoints.empty() || checkpoints.front() <= 0)
    throw std::invalid_argument("survival_curve_splitting: checkpoints must start above 0");
  std::vector<std::uint64_t> states(n_particles, cfg.z0);
  double log_p = 0;
  double t_prev = 0;
  std::vector<std::pair<double, double>> curve;
  RngStream resampler(seed, ~0ULL);
  struct Partial {
    std::vector<std::uint64_t> survivors;
    std::uint64_t n = 0;
    void merge(const Partial& o) {
      survivors.insert(survivors.end(), o.survivors.begin(), o.survivors.end());
      n += o.n;
    }
  };
  for (std::size_t stage = 0; stage < checkpoints.size(); ++stage) {
    double t_next = checkpoints[stage];
    BranchingConfig seg = cfg;
    seg.t_end = t_next - t_prev + 1.0;
    auto res = chunked_reduce<Partial>(n_particles, [&](std::uint64_t i, Partial& p) {
      ++p.n;
      std::uint64_t z0 = states[i];
      if (z0 == 0) return;
      if (z0 >= cfg.pop_cap && cfg.p > 0) {  // exploded: alive forever
        p.survivors.push_back(z0);
        return;
      }
      BranchingConfig c = seg;
      c.z0 = z0;
      RngStream rng(seed, stage * n_particles + i);
      auto zs = branching_state_at(c, {t_next - t_prev}, rng);
      if (zs[0] > 0) p.survivors.push_back(zs[0]);
    });
    double f = static_cast<double>(res.survivors.size()) / static_cast<double>(n_particles);
    if (res.survivors.empty()) {
      curve.emplace_back(t_next, -kInf);
      break;
    }
    log_p += std::log(f);
    curve.emplace_back(t_next, log_p);
    for (auto& s : states) {
      std::size_t pick = static_cast<std::size_t>(resampler.u01() * res.survivors.size());
      s = res.survivors[std::min(pick, res.survivors.size() - 1)];
    }
    t_prev = t_next;
  }
  return curve;
}

DualityReport duality_check(const BranchingConfig& cfg, double x, double t,
                            std::uint64_t n_replicas, std::uint64_t seed) {
  validate_branching(cfg);
  if (x < 0 || x > 1) throw std::invalid_argument("duality_check: x outside [0,1]");
  // rescale onto a unit-rate disaster clock
  BranchingConfig bc = cfg;
  bc.lambda = cfg.lambda / cfg.kappa;
  bc.kappa = 1.0;
  double tt = t * cfg.kappa;
  bc.t_end = tt + 1.0;

  struct Partial {
    Accum acc;
    void merge(const Partial& o) { acc.merge(o.acc); }
  };
  auto lhs = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& p) {
    RngStream rng(seed, rep);
    auto zs = branching_state_at(bc, {tt}, rng);
    p.acc.add(zs[0] >= bc.pop_cap && x > 0
                  ? 0.0
                  : std::pow(1.0 - x, static_cast<double>(zs[0])));
  });

  PJumpConfig pc;
  pc.drift = dual_drift(bc.lambda, bc.law);
  pc.p = bc.p;
  pc.kappa = 1.0;
  pc.x0 = x;
  pc.t_end = tt + 1.0;
  auto rhs = chunked_reduce<Partial>(n_replicas, [&](std::uint64_t rep, Partial& p) {
    RngStream rng(seed ^ 0x5851f42d4c957f2dULL, rep);
    auto xs = simulate_pjump_at(pc, {tt}, rng);
    p.acc.add(std::pow(1.0 - xs[0], static_cast<double>(cfg.z0)));
  });

  DualityReport rep;
  rep.x = x;
  rep.t = t;
  rep.lhs = lhs.acc.mean;
  rep.lhs_se = lhs.acc.std_err();
  rep.rhs = rhs.acc.mean;
  rep.rhs_se = rhs.acc.std_err();
  double denom = std::sqrt(rep.lhs_se * rep.lhs_se + rep.rhs_se * rep.rhs_se);
  rep.z_score = denom > 0 ? (rep.lhs - rep.rhs) / denom : 0.0;
  return rep;
}

}  // namespace pjd
