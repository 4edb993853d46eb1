#ifndef PJD_SCHEDULE_HPP
#define PJD_SCHEDULE_HPP

#include <functional>
#include <string>
#include <vector>

namespace pjd {

// One piecewise-constant span; the last one extends to +inf.
struct RateSegment {
  double t_start = 0;
  double b = 0;
  double d = 0;
  double kappa = 0;
  double p = 1;
};

// Time-dependent birth/death/disaster rates b, d, kappa and disaster
// survival probability p, with the cumulative integrals the duality
// formulas need. Piecewise-constant schedules get closed-form cumulatives;
// schedules built from callables fall back to adaptive quadrature.
class RateSchedule {
 public:
  static RateSchedule constant(double b, double d, double kappa, double p);
  static RateSchedule piecewise(std::vector<RateSegment> segments);
  // Generic callables; integrals by quadrature.
  static RateSchedule callables(std::function<double(double)> b,
                                std::function<double(double)> d,
                                std::function<double(double)> kappa,
                                std::function<double(double)> p);
  // Same, with a closed-form cumulative intensity and inverse, so event
  // sampling by time change stays O(1) per event.
  static RateSchedule callables_with_intensity(
      std::function<double(double)> b, std::function<double(double)> d,
      std::function<double(double)> kappa, std::function<double(double)> p,
      std::function<double(double)> Lambda,
      std::function<double(double)> Lambda_inv);
  // {"family":"constant",...} | {"family":"exp-decay",...} |
  // {"family":"periodic",...} | {"segments":[{t_start,b,d,kappa,p},...]}
  static RateSchedule from_json_text(const std::string& text);

  double b(double t) const { return b_(t); }
  double d(double t) const { return d_(t); }
  double kappa(double t) const { return kappa_(t); }
  double p(double t) const { return p_(t); }

  double v(double t) const;           // int_0^t (b - d) ds
  double Lambda(double t) const;      // int_0^t kappa ds
  double Lambda_inv(double u) const;  // generalized inverse of Lambda
  // int_{t0}^{t1} b(y) exp(-v(y)) dy
  double int_b_exp_neg_v(double t0, double t1) const;
  double kappa_bound(double t_end) const;

  bool piecewise_constant() const { return !segments_.empty(); }
  const std::vector<RateSegment>& segments() const { return segments_; }

 private:
  RateSchedule() = default;
  void validate() const;  // p == 0 only where kappa == 0

  std::vector<RateSegment> segments_;
  std::function<double(double)> b_, d_, kappa_, p_;
  std::function<double(double)> Lambda_cf_, Lambda_inv_cf_;  // optional
};

}  // namespace pjd

#endif
