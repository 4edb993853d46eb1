#include <cmath>
#include <vector>

#include "doctest.h"
#include "pjd/drift.hpp"
#include "pjd/numeric.hpp"
#include "pjd/offspring.hpp"
#include "pjd/rng.hpp"

using namespace pjd;

TEST_CASE("pgf evaluation") {
  OffspringLaw crit = OffspringLaw::binary(0.5, 0.5);
  CHECK(crit.pgf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(crit.pgf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(crit.pgf(0.5) == doctest::Approx(0.625).epsilon(1e-14));
  OffspringLaw other({0.2, 0.3, 0.0, 0.5});
  CHECK(other.pgf(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(crit.pgf(1.5), std::domain_error);
  CHECK_THROWS_AS(crit.pgf(-0.1), std::domain_error);
}

TEST_CASE("pgf is convex on a grid") {
  OffspringLaw law({0.2, 0.3, 0.0, 0.5});
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(i / 20.0);
  for (double x : grid)
    for (double y : grid)
      for (double t : {0.25, 0.5, 0.75}) {
        double mid = law.pgf(t * x + (1 - t) * y);
        CHECK(mid <= t * law.pgf(x) + (1 - t) * law.pgf(y) + 1e-12);
      }
}

TEST_CASE("smallest fixed point") {
  CHECK(OffspringLaw({0.0, 1.0}).smallest_fixed_point() == 0.0);
  CHECK(OffspringLaw::binary(0.5, 0.5).smallest_fixed_point() == 1.0);
  OffspringLaw super = OffspringLaw::binary(1.0 / 3.0, 2.0 / 3.0);
  CHECK(super.smallest_fixed_point() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::abs(super.pgf(super.smallest_fixed_point()) -
                 super.smallest_fixed_point()) < 1e-10);
  // subcritical means the fixed point sits at 1
  CHECK(OffspringLaw::binary(0.7, 0.3).smallest_fixed_point() == 1.0);
  // no q0: extinction impossible, fixed point 0
  CHECK(OffspringLaw({0.0, 0.0, 1.0}).smallest_fixed_point() == 0.0);
}

TEST_CASE("offspring law validation") {
  CHECK_THROWS(OffspringLaw({0.5, 0.4}));           // does not sum to 1
  CHECK_THROWS(OffspringLaw({1.2, -0.2}));          // negative entry
  CHECK(OffspringLaw({0.5, 0.5}).mean() == doctest::Approx(0.5));
  CHECK(OffspringLaw({0.0, 0.0, 0.0, 1.0}).mean() == doctest::Approx(3.0));
}

TEST_CASE("offspring sampling matches the law") {
  OffspringLaw law({0.2, 0.3, 0.0, 0.5});
  RngStream rng(7, 0);
  std::vector<std::uint64_t> counts(4, 0);
  const int n = 200000;
  for (int i = 0; i < n; ++i) ++counts[law.sample(rng)];
  for (int k = 0; k < 4; ++k) {
    double freq = counts[k] / static_cast<double>(n);
    double se = std::sqrt(law.probs()[k] * (1 - law.probs()[k]) / n);
    CHECK(std::abs(freq - law.probs()[k]) < 4 * se + 1e-9);
  }
}

TEST_CASE("drift characteristics: logistic") {
  auto spec = drift_characteristics([](double x) { return x - x * x; }, 1.0);
  CHECK(spec.alpha0_slope == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(spec.alpha_hat == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(spec.x_alpha.has_value());
  CHECK(*spec.x_alpha == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spec.s_alpha == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(spec.concave);
}

TEST_CASE("drift characteristics: linear decay") {
  auto spec = drift_characteristics([](double x) { return -x; }, 1.0);
  CHECK(spec.alpha0_slope == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(spec.alpha_hat == doctest::Approx(-1.0).epsilon(1e-6));
  CHECK(!spec.x_alpha.has_value());
  CHECK(spec.s_alpha == 0.0);
}

TEST_CASE("drift characteristics: infinite slope at zero") {
  auto spec = drift_characteristics([](double x) { return std::sqrt(x) - x; }, 1.0);
  CHECK(std::isinf(spec.alpha0_slope));
  REQUIRE(spec.x_alpha.has_value());
  CHECK(*spec.x_alpha == doctest::Approx(1.0).epsilon(1e-9));
  // the returned spec must keep the callable itself, not just the summary
  REQUIRE(static_cast<bool>(spec.alpha));
  CHECK(spec(0.25) == doctest::Approx(0.25));
}

TEST_CASE("dual drift vanishes exactly at zero for inexact probability sums") {
  // 0.1 + 0.3 + 0.2 + 0.4 lands a few ulp away from 1 in binary
  auto spec = dual_drift(1.0, OffspringLaw({0.1, 0.3, 0.2, 0.4}));
  CHECK(spec(0.0) == 0.0);
  CHECK(spec(0.5) > 0.0);
}

TEST_CASE("concave drift: ratio sup is attained at the smallest grid point") {
  auto alpha = [](double x) { return 2 * x - 3 * x * x; };
  double x0 = std::ldexp(1.0, -20);
  double r0 = alpha(x0) / x0;
  for (int j = 19; j >= 0; --j) {
    double x = std::ldexp(1.0, -j);
    CHECK(alpha(x) / x <= r0 + 1e-9);
  }
  auto spec = drift_characteristics(alpha, 1.0);
  CHECK(spec.concave);
  CHECK(spec.alpha_hat == doctest::Approx(spec.alpha0_slope).epsilon(1e-6));
}

TEST_CASE("bisect and simpson") {
  double r = bisect([](double x) { return x * x - 2.0; }, 0, 2);
  CHECK(r == doctest::Approx(std::sqrt(2.0)).epsilon(1e-11));
  CHECK_THROWS(bisect([](double x) { return x * x + 1.0; }, 0, 2));
  double I = adaptive_simpson([](double x) { return std::exp(x); }, 0, 1);
  CHECK(I == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
  double J = adaptive_simpson([](double x) { return std::sin(x); }, 0, M_PI);
  CHECK(J == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("linear fit recovers slope and intercept") {
  std::vector<double> xs, ys;
  for (int i = 0; i < 30; ++i) {
    xs.push_back(i);
    ys.push_back(3.5 - 0.25 * i);
  }
  auto fit = linear_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(-0.25).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(3.5).epsilon(1e-12));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("accumulator merge is order independent") {
  RngStream rng(11, 0);
  std::vector<double> xs;
  for (int i = 0; i < 1000; ++i) xs.push_back(rng.u01());
  Accum whole;
  for (double x : xs) whole.add(x);
  Accum a, b, c;
  for (int i = 0; i < 300; ++i) a.add(xs[i]);
  for (int i = 300; i < 700; ++i) b.add(xs[i]);
  for (int i = 700; i < 1000; ++i) c.add(xs[i]);
  Accum merged = a;
  merged.merge(b);
  merged.merge(c);
  CHECK(merged.n == whole.n);
  CHECK(merged.mean == doctest::Approx(whole.mean).epsilon(1e-13));
  CHECK(merged.variance() == doctest::Approx(whole.variance()).epsilon(1e-12));
}

TEST_CASE("rk45 against closed forms") {
  // y' = -2y
  auto y = rk45_integrate<1>(
      [](const std::array<double, 1>& v, std::array<double, 1>& dv) { dv[0] = -2.0 * v[0]; },
      {1.0}, 0.0, 3.0);
  CHECK(y[0] == doctest::Approx(std::exp(-6.0)).epsilon(1e-8));
  // logistic y' = y(1-y)
  auto z = rk45_integrate<1>(
      [](const std::array<double, 1>& v, std::array<double, 1>& dv) { dv[0] = v[0] * (1 - v[0]); },
      {0.1}, 0.0, 5.0);
  double expect = 0.1 * std::exp(5.0) / (1.0 + 0.1 * (std::exp(5.0) - 1.0));
  CHECK(z[0] == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("rng streams: determinism and independence") {
  RngStream a(42, 3), b(42, 3), c(42, 4);
  bool identical = true, differs = false;
  for (int i = 0; i < 100; ++i) {
    double ua = a.u01(), ub = b.u01(), uc = c.u01();
    identical = identical && ua == ub;
    differs = differs || ua != uc;
  }
  CHECK(identical);
  CHECK(differs);
}

TEST_CASE("binomial sampler: exact mean and variance, both regimes") {
  RngStream rng(5, 0);
  for (long n : {10L, 200L}) {
    double p = 0.3;
    Accum acc;
    for (int i = 0; i < 100000; ++i) acc.add(static_cast<double>(rng.binomial(n, p)));
    double mean = n * p, var = n * p * (1 - p);
    CHECK(std::abs(acc.mean - mean) < 4 * std::sqrt(var / 100000.0));
    CHECK(acc.variance() == doctest::Approx(var).epsilon(0.05));
  }
  CHECK(rng.binomial(10, 0.0) == 0);
  CHECK(rng.binomial(10, 1.0) == 10);
}
