#include "fbguard/runtime/scheduler.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace fbguard::fb {

void Scheduler::post(Tick at, Action action, std::uint32_t lane) {
  if (at < now_) {
    throw std::logic_error("post at t=" + std::to_string(at) + " before now t=" + std::to_string(now_));
  }
  heap_.push_back({at, lane, next_seq_++, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
}

std::size_t Scheduler::run_until(Tick until) {
  if (until < now_) {
    throw std::logic_error("run_until t=" + std::to_string(until) + " before now t=" + std::to_string(now_));
  }
  std::size_t processed = 0;
  while (!heap_.empty() && heap_.front().time <= until) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry entry = std::move(heap_.back());
    heap_.pop_back();
    now_ = entry.time;
    entry.action();
    ++processed;
  }
  now_ = until;
  return processed;
}

}  // namespace fbguard::fb
