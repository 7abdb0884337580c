#include "fbguard/net/device.hpp"

#include <algorithm>

namespace fbguard::net {

std::string_view to_string(DeviceState state) {
  switch (state) {
    case DeviceState::Responsive: return "RESPONSIVE";
    case DeviceState::Degraded: return "DEGRADED";
    case DeviceState::Unresponsive: return "UNRESPONSIVE";
  }
  return "?";
}

std::string_view to_string(IngestResult result) {
  switch (result) {
    case IngestResult::Ingested: return "INGESTED";
    case IngestResult::DroppedCapacity: return "DROPPED_CAPACITY";
    case IngestResult::DroppedUnresponsive: return "DROPPED_UNRESPONSIVE";
  }
  return "?";
}

DeviceModel::DeviceModel(std::string name, DeviceConfig config, std::uint64_t rng_seed)
    : name_(std::move(name)), config_(config), rng_(rng_seed) {}

void DeviceModel::transition(Tick at, DeviceState to) {
  transitions_.push_back({at, state_, to});
  state_ = to;
}

void DeviceModel::refresh(Tick now) {
  if (state_ == DeviceState::Degraded && now >= last_over_ + kMicrosPerSecond) {
    transition(last_over_ + kMicrosPerSecond, DeviceState::Responsive);
  }
}

IngestResult DeviceModel::ingest(Tick now) {
  ++counters_.offered;
  if (config_.unlimited) {
    ++counters_.ingested;
    return IngestResult::Ingested;
  }
  if (state_ == DeviceState::Unresponsive) {
    ++counters_.dropped_unresponsive;
    return IngestResult::DroppedUnresponsive;
  }
  refresh(now);
  window_.push_back(now);
  while (now >= kMicrosPerSecond && window_.front() <= now - kMicrosPerSecond) window_.pop_front();
  const auto lambda = static_cast<double>(window_.size());
  if (lambda >= config_.critical_rate) {
    transition(now, DeviceState::Unresponsive);
    window_.clear();
    ++counters_.dropped_unresponsive;
    return IngestResult::DroppedUnresponsive;
  }
  if (lambda > config_.capacity) {
    last_over_ = now;
    if (state_ == DeviceState::Responsive) transition(now, DeviceState::Degraded);
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    if (u < 1.0 - config_.capacity / lambda) {
      ++counters_.dropped_capacity;
      return IngestResult::DroppedCapacity;
    }
  }
  ++counters_.ingested;
  return IngestResult::Ingested;
}

std::uint64_t DeviceModel::rate(Tick now) const {
  if (state_ == DeviceState::Unresponsive) return 0;
  auto first = now >= kMicrosPerSecond
                   ? std::upper_bound(window_.begin(), window_.end(), now - kMicrosPerSecond)
                   : window_.begin();
  auto last = std::upper_bound(window_.begin(), window_.end(), now);
  return static_cast<std::uint64_t>(std::max<std::ptrdiff_t>(0, last - first));
}

DeviceSnapshot DeviceModel::snapshot(Tick now) const {
  DeviceState s = state_;
  if (s == DeviceState::Degraded && now >= last_over_ + kMicrosPerSecond) s = DeviceState::Responsive;
  return {s, rate(now), counters_};
}

}  // namespace fbguard::net
