#ifndef PJD_OFFSPRING_HPP
#define PJD_OFFSPRING_HPP

#include <cstdint>
#include <vector>

#include "pjd/rng.hpp"

namespace pjd {

// Offspring distribution with finite support: probs[k] = P(k children).
class OffspringLaw {
 public:
  explicit OffspringLaw(std::vector<double> probs);

  static OffspringLaw binary(double q0, double q2);

  const std::vector<double>& probs() const { return probs_; }
  double mean() const { return mean_; }
  double second_factorial_moment() const { return fact2_; }
  std::size_t max_offspring() const { return probs_.size() - 1; }

  // Probability generating function h(s) = sum_k q_k s^k, Horner form.
  double pgf(double s) const;
  double pgf_derivative(double s) const;

  // Smallest fixed point of h on [0,1]. Equals 1 iff mean <= 1 (with the
  // convention that the degenerate law q1 = 1 maps to 0).
  double smallest_fixed_point() const { return fixed_point_; }

  std::uint64_t sample(RngStream& rng) const;

 private:
  std::vector<double> probs_;
  std::vector<double> cdf_;
  double mean_ = 0;
  double fact2_ = 0;
  double fixed_point_ = 1;
};

}  // namespace pjd

#endif
