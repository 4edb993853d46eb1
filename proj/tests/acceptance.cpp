// Acceptance gate: ten end-to-end criteria, each printing one PASS/FAIL line.
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "pjd/analytics.hpp"
#include "pjd/branching.hpp"
#include "pjd/csbp.hpp"
#include "pjd/drift.hpp"
#include "pjd/inhom.hpp"
#include "pjd/numeric.hpp"
#include "pjd/pjump.hpp"
#include "pjd/regvar.hpp"
#include "pjd/rng.hpp"
#include "pjd/schedule.hpp"

using namespace pjd;

namespace {

const double kInvE = std::exp(-1.0);

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("CRITERION %2d: %s — %s\n", criterion, pass ? "PASS" : "FAIL",
              detail.c_str());
  std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion-01 homogeneous decay rates, all branches") {
  struct Set {
    double lambda, q0, q2, kappa, p;
    std::uint64_t pop_cap;
    double expect;
  };
  // six parameter sets spanning weak-disaster, large-deviation, and p=0; the
  // large-deviation sets use rates >> 1.5/t (survival carries a polynomial
  // prefactor there, biasing any fixed-window slope up by about 1.5/t)
  std::vector<Set> sets = {
      {1.0, 0.5, 0.5, 1.0, 0.5, 10000000, 0.5},
      {0.3, 0.0, 1.0, 1.0, std::exp(-3.0), 10000000,
       1.0 - 0.1 + 0.1 * std::log(0.1)},
      {0.2, 0.0, 1.0, 1.0, kInvE, 10000000, 1.0 - kInvE - 0.2},
      {1.0, 0.0, 1.0, 1.0, 0.0, 100, 1.0},
      {1.0, 1.0, 0.0, 1.0, 0.0, 10000000, 2.0},
      {1.0, 0.0, 1.0, 2.0, std::exp(-2.0), 10000000,
       2.0 * (1.0 - 0.25 + 0.25 * std::log(0.25))},
  };
  std::vector<double> cps;
  for (int i = 1; i <= 80; ++i) cps.push_back(i);
  bool all_pass = true;
  std::ostringstream detail;
  for (std::size_t s = 0; s < sets.size(); ++s) {
    const auto& st = sets[s];
    BranchingConfig cfg;
    cfg.lambda = st.lambda;
    cfg.law = OffspringLaw::binary(st.q0, st.q2);
    cfg.kappa = st.kappa;
    cfg.p = st.p;
    cfg.z0 = 1;
    cfg.pop_cap = st.pop_cap;
    double closed = st.p == 0.0
                        ? bd_decay_rate(st.lambda * st.q2, st.lambda * st.q0, st.kappa, 0.0)
                        : bd_decay_rate(st.lambda * st.q2, st.lambda * st.q0, st.kappa, st.p);
    auto curve = survival_curve_splitting(cfg, cps, 10000, 271828 + s);
    std::vector<double> ts, ls;
    for (const auto& [t, logp] : curve) {
      if (t < 20.0 || !std::isfinite(logp)) continue;
      ts.push_back(t);
      ls.push_back(-logp);
    }
    double slope = ts.size() >= 3 ? linear_fit(ts, ls).slope : kInf;
    double rel = std::abs(slope - st.expect) / st.expect;
    bool ok = rel < 0.10 && std::abs(closed - st.expect) < 1e-9;
    all_pass = all_pass && ok;
    detail << "set" << s + 1 << " slope=" << slope << "/" << st.expect
           << " rel=" << rel << (ok ? " ok; " : " BAD; ");
    CHECK(rel < 0.10);
  }
  report(1, all_pass, detail.str());
}

TEST_CASE("criterion-02 birth-death survival probability") {
  const double b = 2.0, d = 0.0, kappa = 1.0, p = kInvE, t = 100.0;
  BranchingConfig cfg;
  cfg.lambda = b + d;
  cfg.law = OffspringLaw::binary(d / (b + d), b / (b + d));
  cfg.kappa = kappa;
  cfg.p = p;
  cfg.t_end = t;
  cfg.pop_cap = 2000;
  bool all_pass = std::abs(bd_survival_probability(1, b, d, kappa, p) - 0.5) < 1e-12;
  std::ostringstream detail;
  detail << "closed(k=1)=" << bd_survival_probability(1, b, d, kappa, p) << "; ";
  for (std::uint64_t k : {1, 2, 5}) {
    cfg.z0 = k;
    auto [mc, se] = survival_probability_mc(cfg, t, 100000, 314159 + k);
    double closed = bd_survival_probability(k, b, d, kappa, p);
    bool ok = std::abs(mc - closed) < 3.0 * se;
    all_pass = all_pass && ok;
    detail << "k=" << k << " mc=" << mc << " closed=" << closed
           << " se=" << se << (ok ? " ok; " : " BAD; ");
    CHECK(std::abs(mc - closed) < 3.0 * se);
  }
  report(2, all_pass, detail.str());
}

TEST_CASE("criterion-03 pgf duality across the grid") {
  const std::uint64_t n = 100000;
  std::vector<OffspringLaw> laws = {OffspringLaw::binary(0.5, 0.5),
                                    OffspringLaw::binary(0.25, 0.75),
                                    OffspringLaw({0.1, 0.3, 0.2, 0.4})};
  std::vector<double> ps = {0.3, 0.7};
  std::vector<double> times = {0.5, 1.0, 2.0, 4.0};
  std::vector<double> xs;
  for (int i = 1; i <= 9; ++i) xs.push_back(0.1 * i);
  int cells = 0, over3 = 0, over4 = 0;
  double worst = 0;
  std::uint64_t seed = 141421;
  for (std::size_t li = 0; li < laws.size(); ++li) {
    for (double p : ps) {
      BranchingConfig bc;
      bc.lambda = 1.0;
      bc.law = laws[li];
      bc.kappa = 1.0;
      bc.p = p;
      bc.z0 = 1;
      bc.t_end = times.back() + 1.0;
      // one set of population samples reused across every x
      std::vector<std::vector<std::uint32_t>> z(times.size());
      for (auto& v : z) v.reserve(n);
      for (std::uint64_t r = 0; r < n; ++r) {
        RngStream rng(seed, r);
        auto zs = branching_state_at(bc, times, rng);
        for (std::size_t ti = 0; ti < times.size(); ++ti)
          z[ti].push_back(static_cast<std::uint32_t>(zs[ti]));
      }
      ++seed;
      for (double x : xs) {
        std::vector<Accum> lhs(times.size());
        for (std::uint64_t r = 0; r < n; ++r)
          for (std::size_t ti = 0; ti < times.size(); ++ti)
            lhs[ti].add(std::pow(1.0 - x, static_cast<double>(z[ti][r])));
        PJumpConfig pc;
        pc.drift = dual_drift(1.0, laws[li]);
        pc.p = p;
        pc.kappa = 1.0;
        pc.x0 = x;
        pc.t_end = times.back() + 1.0;
        std::vector<Accum> rhs(times.size());
        for (std::uint64_t r = 0; r < n; ++r) {
          RngStream rng(seed ^ 0x9e3779b97f4a7c15ULL, r);
          auto xv = simulate_pjump_at(pc, times, rng);
          for (std::size_t ti = 0; ti < times.size(); ++ti)
            rhs[ti].add(1.0 - xv[ti]);
        }
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
          double se = std::hypot(lhs[ti].std_err(), rhs[ti].std_err());
          double zscore = se > 0 ? (lhs[ti].mean - rhs[ti].mean) / se : 0.0;
          ++cells;
          worst = std::max(worst, std::abs(zscore));
          if (std::abs(zscore) > 3.0) ++over3;
          if (std::abs(zscore) > 4.0) ++over4;
        }
      }
    }
  }
  bool pass = over4 == 0 && over3 < cells / 20;
  std::ostringstream detail;
  detail << cells << " cells, worst |z|=" << worst << ", " << over3
         << " cells above |z|=3, " << over4 << " above 4";
  CHECK(over4 == 0);
  CHECK(over3 < cells / 20);
  report(3, pass, detail.str());
}

TEST_CASE("criterion-04 stationary identities of the multiplicative-jump dual") {
  struct Drift {
    DriftSpec spec;
    std::function<double(double)> slope;  // alpha(x)/x in closed form
    double p;
    const char* name;
  };
  DriftSpec root = drift_characteristics(
      [](double x) { return std::sqrt(x) - x; }, 10.0);
  std::vector<Drift> drifts = {
      {logistic_drift(2.0, 2.0), [](double x) { return 2.0 - 2.0 * x; }, kInvE, "logistic(2,2)"},
      {logistic_drift(3.0, 3.0), [](double x) { return 3.0 - 3.0 * x; }, 0.5, "logistic(3,3)"},
      {root, [](double x) { return 1.0 / std::sqrt(x) - 1.0; }, 0.5, "sqrt(x)-x"},
  };
  bool all_pass = true;
  std::ostringstream detail;
  for (std::size_t di = 0; di < drifts.size(); ++di) {
    auto& dr = drifts[di];
    PJumpConfig cfg;
    cfg.drift = dr.spec;
    cfg.p = dr.p;
    cfg.x0 = 0.5;
    const DriftSpec& a = dr.spec;
    RngStream rng(577215, di);
    auto avg = ergodic_averages(
        cfg,
        {dr.slope,
         [](double x) { return x; },
         [](double x) { return x * x; },
         [](double x) { return x * x * x; },
         [&a](double x) { return a.alpha(x); },
         [&a](double x) { return x * a.alpha(x); },
         [&a](double x) { return x * x * a.alpha(x); }},
        1e3, 1e5, rng);
    double logq = std::log(1.0 / dr.p);
    double err0 = std::abs(avg[0] - logq) / logq;
    bool ok = err0 < 0.05;
    detail << dr.name << " slope-avg rel=" << err0;
    for (int k = 1; k <= 3; ++k) {
      double lhs = avg[k];
      double rhs = k / (1.0 - std::pow(dr.p, k)) * avg[3 + k];
      double rel = std::abs(lhs - rhs) / lhs;
      ok = ok && rel < 0.05;
      detail << " m" << k << "=" << rel;
      CHECK(rel < 0.05);
    }
    CHECK(err0 < 0.05);
    detail << (ok ? " ok; " : " BAD; ");
    all_pass = all_pass && ok;
  }
  report(4, all_pass, detail.str());
}

TEST_CASE("criterion-05 explicit logistic solution on realized jump times") {
  const double delta = 0.7, theta = 1.5, p = 0.4, x0 = 0.3;
  PJumpConfig cfg;
  cfg.drift = logistic_drift(delta, theta);
  cfg.p = p;
  cfg.x0 = x0;
  cfg.t_end = 12.0;
  double worst = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    RngStream rng(161803, s);
    auto rec = simulate_pjump(cfg, rng, {1.0, 5.0, 9.0});
    std::vector<double> taus;
    for (std::size_t i = 0; i < rec.size(); ++i)
      if (rec.kinds[i] == EventKind::jump) taus.push_back(rec.times[i]);
    for (std::size_t i = 0; i < rec.size(); ++i) {
      double t = rec.times[i];
      double integral = 0, prev = 0, pk = 1.0;
      for (double tau : taus) {
        if (tau > t) break;
        integral += pk * (std::exp(delta * tau) - std::exp(delta * prev)) / delta;
        prev = tau;
        pk *= p;
      }
      integral += pk * (std::exp(delta * t) - std::exp(delta * prev)) / delta;
      double w = pk * std::exp(delta * t) / (1.0 / x0 + theta * integral);
      worst = std::max(worst, std::abs(rec.values[i] - w));
    }
  }
  bool pass = worst < 1e-8;
  std::ostringstream detail;
  detail << "sup-norm over 100 seeds = " << worst;
  CHECK(worst < 1e-8);
  report(5, pass, detail.str());
}

TEST_CASE("criterion-06 Poisson large deviations at t = 10") {
  const double t = 10.0;
  const std::uint64_t n = 1000000;
  auto low = ldp_empirical(0.5, t, n, LdpEvent::lower, 662607);
  auto up = ldp_empirical(2.0, t, n, LdpEvent::upper, 662608);
  auto pw = ldp_empirical(0.5, t, n, LdpEvent::pathwise_lower, 662609);
  double err_low = std::abs(low.rate - ldp_rate(0.5));
  double err_up = std::abs(up.rate - ldp_rate(2.0));
  double ci = 3.0 * std::hypot(low.std_err, pw.std_err);
  bool pw_ok = std::abs(pw.rate - low.rate) < ci;
  bool pass = err_low <= 0.05 && err_up <= 0.05 && pw_ok;
  std::ostringstream detail;
  detail << "x=0.5 empirical=" << low.rate << " limit=" << ldp_rate(0.5)
         << " |err|=" << err_low << "; x=2 empirical=" << up.rate
         << " limit=" << ldp_rate(2.0) << " |err|=" << err_up
         << "; pathwise=" << pw.rate << " vs pointwise=" << low.rate
         << " ci=" << ci
         << " (finite-t prefactor bias dominates at t=10)";
  CHECK(err_low <= 0.05);
  CHECK(err_up <= 0.05);
  CHECK(pw_ok);
  report(6, pass, detail.str());
}

TEST_CASE("criterion-07 random sums over disaster times, regular variation") {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(std::pow(1e4, i / 9.0));
  bool all_pass = true;
  std::ostringstream detail;
  struct Case {
    RegVarFunction f;
    RateSchedule sched;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({{[](double) { return 1.0; }, 0.0, "1"},
                   RateSchedule::constant(0, 0, 2.0, 0.5), "beta=0,const"});
  cases.push_back({{[](double s) { return std::sqrt(s); }, 0.5, "sqrt"},
                   RateSchedule::constant(0, 0, 1.0, 0.5), "beta=1/2,const"});
  cases.push_back({{[](double s) { return s; }, 1.0, "s"},
                   RateSchedule::callables_with_intensity(
                       [](double) { return 0.0; }, [](double) { return 0.0; },
                       [](double s) { return 0.001 * s; }, [](double) { return 0.5; },
                       [](double t) { return 0.0005 * t * t; },
                       [](double u) { return std::sqrt(u / 0.0005); }),
                   "beta=1,linear"});
  for (std::size_t ci = 0; ci < cases.size(); ++ci) {
    auto rep = d_integral_check(cases[ci].f, cases[ci].sched, grid, 100, 173205 + ci);
    int in_band = 0;
    for (double r : rep.final_ratios)
      if (r >= 0.95 && r <= 1.05) ++in_band;
    bool ok = in_band >= 95;
    all_pass = all_pass && ok;
    detail << cases[ci].name << " in-band=" << in_band << "/100"
           << (ok ? " ok; " : " BAD; ");
    CHECK(in_band >= 95);
  }
  RegVarFunction sing{[](double s) { return 0.01 / (s * s); }, -2.0, "0.01 s^-2"};
  auto rep = d_integral_check(sing, RateSchedule::constant(0, 0, 1.0, 0.5), grid,
                              100, 173209);
  int settled = 0;
  for (double inc : rep.tail_increments)
    if (inc < 1e-4) ++settled;
  bool ok = settled >= 99;
  all_pass = all_pass && ok;
  detail << "beta=-2 settled=" << settled << "/100";
  CHECK(settled >= 99);
  report(7, all_pass, detail.str());
}

TEST_CASE("criterion-08 inhomogeneous reduction and tower property") {
  std::vector<RateSegment> segs = {{0.0, 1.2, 0.4, 0.0, 1.0},
                                   {2.0, 0.3, 1.1, 0.0, 1.0},
                                   {5.0, 0.9, 0.9, 0.0, 1.0}};
  auto sched = RateSchedule::piecewise(segs);
  DisasterPath empty;
  double worst = 0;
  for (int xi = 0; xi < 10; ++xi) {
    for (int ti = 0; ti < 10; ++ti) {
      double x = 0.05 + 0.1 * xi;
      double t = 0.5 + ti;
      worst = std::max(worst, std::abs(conditioned_pgf(sched, empty, x, t, 2) -
                                       kendall_pgf(sched, x, 0.0, t, 2)));
    }
  }
  bool reduction_ok = worst < 1e-10;

  auto constant = RateSchedule::constant(2.0, 0.0, 1.0, kInvE);
  auto [mc, se] = inhom_survival_mc(constant, 100.0, 1, 4000, 628318);
  double closed = bd_survival_probability(1, 2.0, 0.0, 1.0, kInvE);
  bool tower_ok = std::abs(mc - closed) < 3.0 * se;
  bool pass = reduction_ok && tower_ok;
  std::ostringstream detail;
  detail << "empty-path sup-err=" << worst << "; survival mc=" << mc
         << " closed=" << closed << " se=" << se;
  CHECK(worst < 1e-10);
  CHECK(std::abs(mc - closed) < 3.0 * se);
  report(8, pass, detail.str());
}

TEST_CASE("criterion-09 continuous-state extinction rates via the dual") {
  bool all_pass = true;
  std::ostringstream detail;
  for (double b : {0.2, 0.6}) {
    BranchingMechanism m;
    m.b = b;
    m.c = 1.0;
    m.kappa = 1.0;
    m.p = kInvE;
    // weak-disaster branch: survival ~ C e^{-rt}, plain slope. Large-deviation
    // branch: survival carries a t^{-3/2} prefactor (weakly subcritical
    // regime), so remove 1.5*log(t) before fitting and fit deeper in t.
    bool ld = b > m.kappa * m.p * std::log(1.0 / m.p);
    std::vector<double> ts;
    if (ld)
      ts = {25.0, 30.0, 35.0, 40.0, 45.0};
    else
      ts = {15.0, 20.0, 25.0, 30.0, 35.0, 40.0};
    std::uint64_t n = ld ? 300000 : 150000;
    std::uint64_t seed0 = ld ? 5602 : 5501;
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      auto est = extinction_probability(m, 3.0, ts[i], 10.0, n, seed0 + i);
      xs.push_back(ts[i]);
      ys.push_back(-std::log(1.0 - est.value) -
                   (ld ? 1.5 * std::log(ts[i]) : 0.0));
    }
    double slope = linear_fit(xs, ys).slope;
    double rel = std::abs(slope - csbp_decay_rate(m)) / csbp_decay_rate(m);
    bool ok = rel < 0.10;
    all_pass = all_pass && ok;
    detail << "b=" << b << " slope=" << slope << "/" << csbp_decay_rate(m)
           << " rel=" << rel << (ok ? " ok; " : " BAD; ");
    CHECK(rel < 0.10);
  }
  BranchingMechanism sup;
  sup.b = 2.0;
  sup.c = 1.0;
  sup.kappa = 1.0;
  sup.p = kInvE;
  double xi = largest_root(sup);
  auto est = extinction_probability(sup, 1.0, 30.0, 20.0, 20000, 577100);
  bool bounds_ok = est.value > std::exp(-1.0 * xi) && est.value < 1.0 &&
                   est.sensitivity < 3.0 * est.std_err;
  all_pass = all_pass && bounds_ok;
  detail << "supercritical est=" << est.value << " in (" << std::exp(-xi)
         << ",1) sens=" << est.sensitivity << " se=" << est.std_err;
  CHECK(est.value > std::exp(-xi));
  CHECK(est.value < 1.0);
  CHECK(est.sensitivity < 3.0 * est.std_err);
  report(9, all_pass, detail.str());
}

TEST_CASE("criterion-10 byte-identical reproducibility") {
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  std::string args = " duality-check --lambda 1 --q0 0.25 --q2 0.75 --x 0.4"
                     " --t 2 --replicas 20000 --seed 271";
  int rc1 = std::system((std::string(PJD_CLI_PATH) + args +
                         " --output acc_repro_a.json > /dev/null").c_str());
  int rc2 = std::system((std::string(PJD_CLI_PATH) + args +
                         " --output acc_repro_b.json > /dev/null").c_str());
  std::string a = slurp("acc_repro_a.json");
  std::string b = slurp("acc_repro_b.json");
  bool pass = rc1 == 0 && rc2 == 0 && !a.empty() && a == b;
  std::ostringstream detail;
  detail << "two runs, " << a.size() << " bytes each, "
         << (a == b ? "identical" : "DIFFER");
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(a == b);
  CHECK_FALSE(a.empty());
  report(10, pass, detail.str());
}
