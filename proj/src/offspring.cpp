#include "pjd/offspring.hpp"

#include <cmath>
#include <stdexcept>

#include "pjd/numeric.hpp"

namespace pjd {

OffspringLaw::OffspringLaw(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw std::invalid_argument("offspring law: empty");
  double total = 0;
  for (double& q : probs_) {
    if (q < -1e-12) throw std::invalid_argument("offspring law: negative probability");
    if (q < 0) q = 0;  // roundoff from expressions like 1 - q0 - q2
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("offspring law: probabilities sum to " + std::to_string(total));
  // renormalize the residual so pgf(1) == 1 exactly
  for (double& q : probs_) q /= total;

  cdf_.resize(probs_.size());
  double c = 0;
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    c += probs_[k];
    cdf_[k] = c;
    mean_ += static_cast<double>(k) * probs_[k];
    if (k >= 2) fact2_ += static_cast<double>(k) * static_cast<double>(k - 1) * probs_[k];
  }
  cdf_.back() = 1.0;

  // Smallest fixed point of the pgf on [0,1].
  if (probs_.size() == 2 && probs_[1] == 1.0) {
    fixed_point_ = 0.0;  // identity pgf: every point is fixed, take the least
  } else if (mean_ <= 1.0) {
    fixed_point_ = 1.0;
  } else {
    // h(x)-x is positive at 0 (when q0>0) and negative just below 1.
    auto g = [this](double x) { return pgf(x) - x; };
    if (probs_[0] <= 0.0) {
      fixed_point_ = 0.0;
    } else {
      fixed_point_ = bisect(g, 0.0, 1.0 - 1e-9, 1e-13);
      if (std::abs(pgf(fixed_point_) - fixed_point_) > 1e-10)
        throw std::runtime_error("offspring law: fixed point verification failed");
    }
  }
}

OffspringLaw OffspringLaw::binary(double q0, double q2) {
  return OffspringLaw({q0, 1.0 - q0 - q2, q2});
}

double OffspringLaw::pgf(double s) const {
  if (s < 0.0 || s > 1.0) throw std::domain_error("pgf: argument outside [0,1]");
  double acc = 0;
  for (std::size_t k = probs_.size(); k-- > 0;) acc = acc * s + probs_[k];
  return acc;
}

double OffspringLaw::pgf_derivative(double s) const {
  if (s < 0.0 || s > 1.0) throw std::domain_error("pgf: argument outside [0,1]");
  double acc = 0;
  for (std::size_t k = probs_.size(); k-- > 1;)
    acc = acc * s + static_cast<double>(k) * probs_[k];
  return acc;
}

std::uint64_t OffspringLaw::sample(RngStream& rng) const {
  double u = rng.u01();
  for (std::size_t k = 0; k < cdf_.size(); ++k)
    if (u <= cdf_[k]) return k;
  return cdf_.size() - 1;
}

}  // namespace pjd
