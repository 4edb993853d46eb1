#include "pjd/drift.hpp"

#include <cmath>
#include <vector>

namespace pjd {

namespace {

// Grid on (0, end]: geometric below 1, linear refinement above.
std::vector<double> probe_grid(double end) {
  std::vector<double> xs;
  double hi = std::isfinite(end) ? end : 1e6;
  for (int j = 40; j >= -30; --j) {
    double x = std::ldexp(1.0, -j);  // 2^-40 .. 2^30
    if (x > hi) break;
    xs.push_back(x);
  }
  if (std::isfinite(end)) xs.push_back(end);
  return xs;
}

}  // namespace

DriftSpec drift_characteristics(std::function<double(double)> alpha,
                                double domain_end) {
  DriftSpec spec;
  spec.alpha = alpha;
  spec.domain_end = domain_end;

  // slope at 0 by extrapolation on x = 2^-j; divergence is declared when the
  // ratios keep increasing without settling (threshold 1e8, or no sign of a
  // Cauchy tail over the last decade of the grid)
  double prev = alpha(std::ldexp(1.0, -10)) * std::ldexp(1.0, 10);
  double slope = prev;
  double r_mid = prev;
  bool increasing_tail = true;
  for (int j = 11; j <= 40; ++j) {
    double x = std::ldexp(1.0, -j);
    double r = alpha(x) / x;
    if (std::isnan(r)) throw std::runtime_error("drift_characteristics: NaN at x=2^-" + std::to_string(j));
    increasing_tail = r >= prev - 1e-12 * std::abs(prev);
    prev = r;
    if (j == 30) r_mid = r;
    slope = r;
  }
  bool diverging = increasing_tail &&
                   (slope > 1e8 || (slope > 0 && r_mid > 0 && slope > 2.0 * r_mid));
  spec.alpha0_slope = diverging ? kInf : slope;

  auto grid = probe_grid(domain_end);
  double sup_ratio = -kInf;
  double arg_sup = grid.front();
  double last_pos = 0;     // largest grid x with alpha(x) > 0
  double first_zero = -1;  // bracket lo for the smallest positive zero
  double prev_x = 0, prev_a = alpha(0.0);
  bool seen_pos = false;
  std::optional<double> zero_bracket_lo, zero_bracket_hi;
  std::optional<double> spos_lo, spos_hi;
  for (double x : grid) {
    double a = alpha(x);
    if (std::isnan(a)) throw std::runtime_error("drift_characteristics: NaN drift value");
    double r = a / x;
    if (r > sup_ratio) {
      sup_ratio = r;
      arg_sup = x;
    }
    if (a > 0) {
      seen_pos = true;
      last_pos = x;
    }
    if (!zero_bracket_lo && prev_a > 0 && a <= 0) {
      zero_bracket_lo = prev_x;
      zero_bracket_hi = x;
    }
    if (a <= 0 && prev_a > 0) {
      spos_lo = prev_x;
      spos_hi = x;
    }
    prev_x = x;
    prev_a = a;
  }
  (void)first_zero;
  spec.alpha_hat = std::isinf(spec.alpha0_slope) ? kInf
                                                 : std::max(sup_ratio, slope);
  // refine the sup of alpha(x)/x locally around the grid argmax
  if (std::isfinite(spec.alpha_hat)) {
    double lo = arg_sup / 2, hi = std::min(arg_sup * 2, std::isfinite(domain_end) ? domain_end : arg_sup * 2);
    for (int it = 0; it < 60; ++it) {
      double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
      if (alpha(m1) / m1 < alpha(m2) / m2)
        lo = m1;
      else
        hi = m2;
    }
    double mid = 0.5 * (lo + hi);
    spec.alpha_hat = std::max(spec.alpha_hat, alpha(mid) / mid);
  }

  if (zero_bracket_lo) {
    spec.x_alpha = bisect(alpha, *zero_bracket_lo, *zero_bracket_hi);
  }
  if (!seen_pos) {
    spec.s_alpha = 0;
  } else if (spos_lo) {
    // last positive-to-nonpositive crossing seen on the grid
    spec.s_alpha = bisect(alpha, *spos_lo, *spos_hi);
  } else {
    spec.s_alpha = std::isfinite(domain_end) ? domain_end : last_pos;
  }

  // concavity by second differences on the grid
  spec.concave = true;
  for (std::size_t i = 2; i < grid.size(); ++i) {
    double x0 = grid[i - 2], x1 = grid[i - 1], x2 = grid[i];
    double d1 = (alpha(x1) - alpha(x0)) / (x1 - x0);
    double d2 = (alpha(x2) - alpha(x1)) / (x2 - x1);
    if (d2 > d1 + 1e-9 * (1.0 + std::abs(d1))) {
      spec.concave = false;
      break;
    }
  }
  return spec;
}

DriftSpec logistic_drift(double delta, double theta) {
  DriftSpec spec;
  spec.alpha = [delta, theta](double x) { return delta * x - theta * x * x; };
  spec.domain_end = kInf;
  spec.alpha0_slope = delta;
  spec.alpha_hat = delta;
  spec.concave = true;
  if (delta > 0 && theta > 0) {
    spec.x_alpha = delta / theta;
    spec.s_alpha = delta / theta;
  } else {
    spec.s_alpha = 0;
  }
  return spec;
}

DriftSpec dual_drift(double lambda, const OffspringLaw& law) {
  DriftSpec spec;
  // pgf(1) can miss 1 by a few ulp when the probabilities do not sum to 1
  // exactly in binary; anchor the drift so alpha(0) = 0 holds exactly.
  double h1 = law.pgf(1.0);
  spec.alpha = [lambda, law, h1](double x) {
    return lambda * (h1 - x - law.pgf(1.0 - x));
  };
  spec.domain_end = 1.0;
  double mu = law.mean();
  spec.alpha0_slope = lambda * (mu - 1.0);  // d/dx at 0: lambda*(h'(1) - 1)
  spec.alpha_hat = spec.alpha0_slope;       // concave since h is convex
  spec.concave = true;
  if (mu > 1.0) {
    double xs = law.smallest_fixed_point();
    spec.x_alpha = 1.0 - xs;
    spec.s_alpha = 1.0 - xs;
  } else {
    spec.s_alpha = 0;
  }
  return spec;
}

}  // namespace pjd
