#ifndef PJD_MC_HPP
#define PJD_MC_HPP

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace pjd {

inline unsigned mc_thread_count() {
  if (const char* env = std::getenv("PJD_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? hc : 1;
}

// Splits replica indices [0, n_rep) into a fixed number of chunks and merges
// per-chunk partials in chunk order, so the result does not depend on how many
// threads actually ran. Each replica must draw only from its own stream.
//
// Partial: default-constructible, with merge(const Partial&).
// Work: void(std::uint64_t replica_index, Partial&).
template <class Partial, class Work>
Partial chunked_reduce(std::uint64_t n_rep, Work&& work,
                       std::uint64_t n_chunks = 256) {
  if (n_chunks == 0) n_chunks = 1;
  if (n_chunks > n_rep && n_rep > 0) n_chunks = n_rep;
  std::vector<Partial> partials(n_chunks);
  std::atomic<std::uint64_t> next{0};
  auto runner = [&] {
    for (;;) {
      std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) break;
      std::uint64_t lo = n_rep * c / n_chunks;
      std::uint64_t hi = n_rep * (c + 1) / n_chunks;
      for (std::uint64_t i = lo; i < hi; ++i) work(i, partials[c]);
    }
  };
  unsigned nt = mc_thread_count();
  if (nt <= 1 || n_rep < 2) {
    runner();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(nt);
    for (unsigned t = 0; t < nt; ++t) pool.emplace_back(runner);
    for (auto& th : pool) th.join();
  }
  Partial out;
  for (auto& p : partials) out.merge(p);
  return out;
}

}  // namespace pjd

#endif
