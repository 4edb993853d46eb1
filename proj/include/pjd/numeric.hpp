#ifndef PJD_NUMERIC_HPP
#define PJD_NUMERIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace pjd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Thrown when adaptive step control cannot meet its tolerance.
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown when an operation is invoked outside its admissible regime.
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = sum_ + y;
    c_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double c_ = 0.0;
};

// Bisection on [lo, hi]; requires f(lo) and f(hi) of opposite sign (or zero).
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double tol = 1e-12, int max_iter = 200);

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol = 1e-10);

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double slope_se = 0;
  double r2 = 0;
};
LinearFit linear_fit(const std::vector<double>& xs, const std::vector<double>& ys);

// Streaming mean/variance with associative merge (Chan et al.), so replica
// results can be reduced in a fixed order independent of thread count.
struct Accum {
  std::size_t n = 0;
  double mean = 0;
  double m2 = 0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  void merge(const Accum& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    double d = o.mean - mean;
    std::size_t tot = n + o.n;
    mean += d * static_cast<double>(o.n) / static_cast<double>(tot);
    m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) /
                     static_cast<double>(tot);
    n = tot;
  }
  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_err() const {
    return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0;
  }
};

// Dormand-Prince RK4(5) with adaptive step control. Integrates y' = f(y)
// (autonomous) from t0 to t1 and returns y(t1). Error is controlled on all
// components against atol + rtol*|y|.
template <std::size_t N, class F>
std::array<double, N> rk45_integrate(F&& f, std::array<double, N> y, double t0,
                                     double t1, double rtol = 1e-9,
                                     double atol = 1e-12,
                                     double max_step = kInf) {
  if (!(t1 > t0)) return y;
  using Vec = std::array<double, N>;
  auto axpy = [](const Vec& y0, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
    Vec r = y0;
    for (auto& [c, k] : terms)
      for (std::size_t i = 0; i < N; ++i) r[i] += h * c * (*k)[i];
    return r;
  };

  double t = t0;
  double h = std::min({(t1 - t0) / 10.0, max_step, 0.1});
  Vec k1, k2, k3, k4, k5, k6, k7;
  f(y, k1);
  std::size_t steps = 0;
  while (t < t1) {
    if (++steps > 100000000) throw IntegrationError("rk45: step budget exceeded");
    if (t1 - t <= 1e-14 * (std::abs(t1) + 1.0)) break;  // roundoff remainder
    h = std::min({h, t1 - t, max_step});
    Vec y2 = axpy(y, h, {{1. / 5, &k1}});
    f(y2, k2);
    Vec y3 = axpy(y, h, {{3. / 40, &k1}, {9. / 40, &k2}});
    f(y3, k3);
    Vec y4 = axpy(y, h, {{44. / 45, &k1}, {-56. / 15, &k2}, {32. / 9, &k3}});
    f(y4, k4);
    Vec y5 = axpy(y, h, {{19372. / 6561, &k1}, {-25360. / 2187, &k2}, {64448. / 6561, &k3}, {-212. / 729, &k4}});
    f(y5, k5);
    Vec y6 = axpy(y, h, {{9017. / 3168, &k1}, {-355. / 33, &k2}, {46732. / 5247, &k3}, {49. / 176, &k4}, {-5103. / 18656, &k5}});
    f(y6, k6);
    Vec ynew = axpy(y, h, {{35. / 384, &k1}, {500. / 1113, &k3}, {125. / 192, &k4}, {-2187. / 6784, &k5}, {11. / 84, &k6}});
    f(ynew, k7);
    // embedded 4th-order difference
    static constexpr double e1 = 35. / 384 - 5179. / 57600;
    static constexpr double e3 = 500. / 1113 - 7571. / 16695;
    static constexpr double e4 = 125. / 192 - 393. / 640;
    static constexpr double e5 = -2187. / 6784 + 92097. / 339200;
    static constexpr double e6 = 11. / 84 - 187. / 2100;
    static constexpr double e7 = -1. / 40;
    double err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err = std::max(err, std::abs(e) / sc);
    }
    if (err <= 1.0) {
      t += h;
      y = ynew;
      k1 = k7;  // FSAL
    }
    double fac = 0.9 * std::pow(std::max(err, 1e-300), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (err > 1.0 && !(h > 1e-14 * (std::abs(t) + 1.0)))
      throw IntegrationError("rk45: step size underflow");
  }
  return y;
}

}  // namespace pjd

#endif
