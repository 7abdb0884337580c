#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "fbguard/time.hpp"

namespace fbguard::fb {

/// Single-threaded virtual-time event queue. Entries run in (time, lane,
/// insertion) order; lane 0 is the default and sorts first, so with one lane
/// the queue is FIFO within a timestamp.
class Scheduler {
 public:
  using Action = std::function<void()>;

  Tick now() const { return now_; }

  /// Throws std::logic_error if `at` lies in the past.
  void post(Tick at, Action action, std::uint32_t lane = 0);

  /// Runs entries with time <= until. Afterwards now() == until.
  /// Throws std::logic_error if until < now(). Returns entries processed.
  std::size_t run_until(Tick until);

  bool empty() const { return heap_.empty(); }
  std::size_t pending() const { return heap_.size(); }

 private:
  struct Entry {
    Tick time;
    std::uint32_t lane;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.time != b.time) return a.time > b.time;
      if (a.lane != b.lane) return a.lane > b.lane;
      return a.seq > b.seq;
    }
  };

  Tick now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::vector<Entry> heap_;
};

}  // namespace fbguard::fb
