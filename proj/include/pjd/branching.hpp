#ifndef PJD_BRANCHING_HPP
#define PJD_BRANCHING_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "pjd/offspring.hpp"
#include "pjd/path.hpp"
#include "pjd/rng.hpp"

namespace pjd {

// Population of exchangeable individuals branching at per-capita rate lambda
// (one individual replaced by k ~ law offspring) and hit by global disasters
// at rate kappa, each individual surviving a disaster independently with
// probability p.
struct BranchingConfig {
  double lambda = 1.0;
  OffspringLaw law = OffspringLaw::binary(0.5, 0.5);
  double kappa = 1.0;
  double p = 0.5;
  std::uint64_t z0 = 1;
  double t_end = 10.0;
  std::uint64_t pop_cap = 10000000;  // explosion guard
};

struct BranchingPath {
  PathRecord record;
  bool exploded = false;
};

struct DualityReport {
  double x = 0;
  double t = 0;
  double lhs = 0;  // E[(1-x)^{Z_t}] from the branching side
  double lhs_se = 0;
  double rhs = 0;  // E[(1-X_t)^{z0}] from the dual PDMP side
  double rhs_se = 0;
  double z_score = 0;
};

void validate_branching(const BranchingConfig& cfg);

BranchingPath simulate_branching(const BranchingConfig& cfg, RngStream& rng);

// Population size at each of the (sorted) times; once the explosion guard
// trips the population is pinned at pop_cap and treated as alive forever.
std::vector<std::uint64_t> branching_state_at(const BranchingConfig& cfg,
                                              const std::vector<double>& times,
                                              RngStream& rng);

std::pair<double, double> survival_probability_mc(const BranchingConfig& cfg,
                                                  double t,
                                                  std::uint64_t n_replicas,
                                                  std::uint64_t seed);

// Survival curve by fixed-effort splitting: the particle population is
// resampled from survivors at each checkpoint, so deep tails are reachable
// with fixed cost per stage. Returns (t, log P(Z_t > 0)) pairs.
std::vector<std::pair<double, double>> survival_curve_splitting(
    const BranchingConfig& cfg, const std::vector<double>& checkpoints,
    std::uint64_t n_particles, std::uint64_t seed);

// Two-sided Monte Carlo check of E[(1-x)^{Z_t}] = E[(1-X_t)^{z0}], the dual
// PDMP having drift lambda*(1 - x - h(1-x)) and jump factor p. General kappa
// handled by time rescaling onto a unit-rate disaster clock.
DualityReport duality_check(const BranchingConfig& cfg, double x, double t,
                            std::uint64_t n_replicas, std::uint64_t seed);

}  // namespace pjd

#endif
