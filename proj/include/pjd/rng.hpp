#ifndef PJD_RNG_HPP
#define PJD_RNG_HPP

#include <cstdint>
#include <random>

namespace pjd {

// splitmix64 step, used only to decorrelate (seed, stream_id) pairs.
inline std::uint64_t splitmix64(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random stream. Same (seed, stream_id) gives a bit-identical
// sequence; distinct stream_ids give statistically independent streams,
// so replicas can be simulated concurrently without coordination.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= 0xd1b54a32d192ed03ULL + stream_id * 0x9e3779b97f4a7c15ULL;
    std::uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b << 32 | b >> 32));
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform on (0,1); never returns 0 so -log is safe.
  double u01() {
    double u = (engine_() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * u01(); }

  double exponential(double rate) { return -std::log(u01()) / rate; }

  bool bernoulli(double p) { return u01() < p; }

  long poisson(double mean) {
    std::poisson_distribution<long> d(mean);
    return d(engine_);
  }

  // Exact binomial sampling: CDF inversion for small n, otherwise the
  // (exact) library rejection sampler. Never a normal approximation.
  long binomial(long n, double p) {
    if (n <= 0) return 0;
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    if (n < 50) {
      double u = u01();
      double q = 1.0 - p;
      double pk = std::pow(q, static_cast<double>(n));  // P(k=0)
      double cdf = pk;
      long k = 0;
      while (u > cdf && k < n) {
        pk *= (static_cast<double>(n - k) / static_cast<double>(k + 1)) * (p / q);
        ++k;
        cdf += pk;
      }
      return k;
    }
    std::binomial_distribution<long> d(n, p);
    return d(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace pjd

#endif
