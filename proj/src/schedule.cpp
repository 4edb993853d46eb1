#include "pjd/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

#include "pjd/numeric.hpp"

namespace pjd {

namespace {

// int exp(-a*u) du over [0, len], stable near a = 0
double exp_integral(double a, double len) {
  if (std::abs(a * len) < 1e-12) return len;
  return -std::expm1(-a * len) / a;
}

}  // namespace

void RateSchedule::validate() const {
  if (!segments_.empty()) {
    double prev = -kInf;
    for (const auto& s : segments_) {
      if (s.t_start <= prev) throw std::invalid_argument("schedule: segment starts not increasing");
      prev = s.t_start;
      if (s.b < 0 || s.d < 0 || s.kappa < 0) throw std::invalid_argument("schedule: negative rate");
      if (s.p < 0 || s.p > 1) throw std::invalid_argument("schedule: p outside [0,1]");
      if (s.p == 0 && s.kappa > 0)
        throw std::invalid_argument("schedule: p=0 where kappa>0 (terminal disasters not allowed)");
    }
    if (segments_.front().t_start != 0) throw std::invalid_argument("schedule: first segment must start at 0");
  } else {
    for (double t : {0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 50.0, 100.0}) {
      if (p_(t) == 0 && kappa_(t) > 0)
        throw std::invalid_argument("schedule: p=0 where kappa>0");
    }
  }
}

RateSchedule RateSchedule::constant(double b, double d, double kappa, double p) {
  return piecewise({RateSegment{0, b, d, kappa, p}});
}

RateSchedule RateSchedule::piecewise(std::vector<RateSegment> segments) {
  RateSchedule s;
  s.segments_ = std::move(segments);
  auto at = [segs = s.segments_](double t) -> const RateSegment& {
    std::size_t i = segs.size() - 1;
    while (i > 0 && segs[i].t_start > t) --i;
    return segs[i];
  };
  s.b_ = [at](double t) { return at(t).b; };
  s.d_ = [at](double t) { return at(t).d; };
  s.kappa_ = [at](double t) { return at(t).kappa; };
  s.p_ = [at](double t) { return at(t).p; };
  s.validate();
  return s;
}

RateSchedule RateSchedule::callables(std::function<double(double)> b,
                                     std::function<double(double)> d,
                                     std::function<double(double)> kappa,
                                     std::function<double(double)> p) {
  RateSchedule s;
  s.b_ = std::move(b);
  s.d_ = std::move(d);
  s.kappa_ = std::move(kappa);
  s.p_ = std::move(p);
  s.validate();
  return s;
}

double RateSchedule::v(double t) const {
  if (segments_.empty())
    return adaptive_simpson([this](double s) { return b_(s) - d_(s); }, 0, t);
  double acc = 0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    double s0 = segments_[i].t_start;
    if (s0 >= t) break;
    double s1 = (i + 1 < segments_.size()) ? std::min(segments_[i + 1].t_start, t) : t;
    acc += (segments_[i].b - segments_[i].d) * (s1 - s0);
  }
  return acc;
}

RateSchedule RateSchedule::callables_with_intensity(
    std::function<double(double)> b, std::function<double(double)> d,
    std::function<double(double)> kappa, std::function<double(double)> p,
    std::function<double(double)> Lambda,
    std::function<double(double)> Lambda_inv) {
  RateSchedule s = callables(std::move(b), std::move(d), std::move(kappa), std::move(p));
  s.Lambda_cf_ = std::move(Lambda);
  s.Lambda_inv_cf_ = std::move(Lambda_inv);
  return s;
}

double RateSchedule::Lambda(double t) const {
  if (Lambda_cf_) return Lambda_cf_(t);
  if (segments_.empty())
    return adaptive_simpson(kappa_, 0, t);
  double acc = 0;
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    double s0 = segments_[i].t_start;
    if (s0 >= t) break;
    double s1 = (i + 1 < segments_.size()) ? std::min(segments_[i + 1].t_start, t) : t;
    acc += segments_[i].kappa * (s1 - s0);
  }
  return acc;
}

double RateSchedule::Lambda_inv(double u) const {
  if (u <= 0) return 0;
  if (Lambda_inv_cf_) return Lambda_inv_cf_(u);
  if (!segments_.empty()) {
    double acc = 0;
    for (std::size_t i = 0; i < segments_.size(); ++i) {
      double s0 = segments_[i].t_start;
      double k = segments_[i].kappa;
      bool last = i + 1 == segments_.size();
      double s1 = last ? kInf : segments_[i + 1].t_start;
      double seg_mass = k * (s1 - s0);
      if (!last && acc + seg_mass < u) {
        acc += seg_mass;
        continue;
      }
      if (k == 0) {
        if (last) throw std::invalid_argument("Lambda_inv: level beyond total intensity");
        continue;  // flat stretch; inverse sits at the next active segment
      }
      return s0 + (u - acc) / k;
    }
    throw std::invalid_argument("Lambda_inv: level beyond total intensity");
  }
  double hi = 1.0;
  while (Lambda(hi) < u) {
    hi *= 2;
    if (hi > 1e12) throw std::invalid_argument("Lambda_inv: level beyond reachable intensity");
  }
  return bisect([this, u](double t) { return Lambda(t) - u; }, 0, hi, 1e-10);
}

double RateSchedule::int_b_exp_neg_v(double t0, double t1) const {
  if (t1 <= t0) return 0;
  if (segments_.empty())
    return adaptive_simpson([this](double y) { return b_(y) * std::exp(-v(y)); }, t0, t1);
  double acc = 0;
  double v_acc = v(t0);
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    double s0 = std::max(segments_[i].t_start, t0);
    double s1 = (i + 1 < segments_.size()) ? std::min(segments_[i + 1].t_start, t1) : t1;
    if (s1 <= s0) continue;
    double g = segments_[i].b - segments_[i].d;
    acc += segments_[i].b * std::exp(-v_acc) * exp_integral(g, s1 - s0);
    v_acc += g * (s1 - s0);
  }
  return acc;
}

double RateSchedule::kappa_bound(double t_end) const {
  if (!segments_.empty()) {
    double m = 0;
    for (const auto& s : segments_) {
      if (s.t_start > t_end) break;
      m = std::max(m, s.kappa);
    }
    return m;
  }
  double m = 0;
  for (int i = 0; i <= 1000; ++i) m = std::max(m, kappa_(t_end * i / 1000.0));
  return m * 1.01;
}

RateSchedule RateSchedule::from_json_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  if (j.contains("segments")) {
    std::vector<RateSegment> segs;
    for (const auto& s : j["segments"]) {
      segs.push_back(RateSegment{s.value("t_start", 0.0), s.at("b").get<double>(),
                                 s.at("d").get<double>(), s.at("kappa").get<double>(),
                                 s.at("p").get<double>()});
    }
    return piecewise(std::move(segs));
  }
  std::string family = j.at("family").get<std::string>();
  if (family == "constant") {
    return constant(j.at("b").get<double>(), j.at("d").get<double>(),
                    j.at("kappa").get<double>(), j.at("p").get<double>());
  }
  if (family == "exp-decay") {
    double b0 = j.at("b").get<double>(), rb = j.value("rate_b", 0.0);
    double d0 = j.at("d").get<double>(), rd = j.value("rate_d", 0.0);
    double k = j.at("kappa").get<double>(), p = j.at("p").get<double>();
    return callables([b0, rb](double t) { return b0 * std::exp(-rb * t); },
                     [d0, rd](double t) { return d0 * std::exp(-rd * t); },
                     [k](double) { return k; }, [p](double) { return p; });
  }
  if (family == "periodic") {
    double b0 = j.at("b").get<double>(), amp = j.value("amplitude", 0.5);
    double om = j.value("omega", 1.0);
    double d0 = j.at("d").get<double>();
    double k = j.at("kappa").get<double>(), p = j.at("p").get<double>();
    return callables(
        [b0, amp, om](double t) { return b0 * (1.0 + amp * std::sin(om * t)); },
        [d0](double) { return d0; }, [k](double) { return k; },
        [p](double) { return p; });
  }
  throw std::invalid_argument("schedule: unknown family '" + family + "'");
}

}  // namespace pjd
