#ifndef PJD_PATH_HPP
#define PJD_PATH_HPP

#include <cstdint>
#include <vector>

namespace pjd {

enum class EventKind : std::uint8_t { birth, death, disaster, jump, checkpoint };

// Time-stamped trajectory of a single simulated path. `values` holds the
// state immediately after the event at the matching time.
struct PathRecord {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<EventKind> kinds;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  void push(double t, double v, EventKind k) {
    times.push_back(t);
    values.push_back(v);
    kinds.push_back(k);
  }
  std::size_t size() const { return times.size(); }
};

}  // namespace pjd

#endif
