#pragma once

#include <cstdint>
#include <deque>
#include <random>
#include <string>
#include <vector>

#include "fbguard/time.hpp"

namespace fbguard::net {

struct DeviceConfig {
  double capacity = 10'000;
  double critical_rate = 1'000'000;
  std::size_t halfopen_capacity = 128;
  Tick halfopen_timeout = seconds(3);
  /// Never degrades or collapses (attacker hosts).
  bool unlimited = false;
};

enum class DeviceState : std::uint8_t { Responsive, Degraded, Unresponsive };
enum class IngestResult : std::uint8_t { Ingested, DroppedCapacity, DroppedUnresponsive };

std::string_view to_string(DeviceState state);
std::string_view to_string(IngestResult result);

struct DeviceCounters {
  std::uint64_t offered = 0;
  std::uint64_t ingested = 0;
  std::uint64_t dropped_capacity = 0;
  std::uint64_t dropped_unresponsive = 0;
  std::uint64_t syn_refused = 0;
  std::uint64_t stray_acks = 0;
  std::uint64_t stray_data = 0;
  std::uint64_t sender_down = 0;
  std::uint64_t blocked = 0;
};

struct StateTransition {
  Tick time;
  DeviceState from;
  DeviceState to;
};

struct DeviceSnapshot {
  DeviceState state;
  std::uint64_t rate;
  DeviceCounters counters;
};

/// Packet-processing model of one host. Arrival rate is the exact number of
/// arrivals in the sliding window (now - 1 s, now], this arrival included.
class DeviceModel {
 public:
  DeviceModel(std::string name, DeviceConfig config, std::uint64_t rng_seed);

  const std::string& name() const { return name_; }
  const DeviceConfig& config() const { return config_; }

  IngestResult ingest(Tick now);

  /// Applies a pending DEGRADED -> RESPONSIVE recovery due at or before now.
  void refresh(Tick now);

  DeviceState state() const { return state_; }
  std::uint64_t rate(Tick now) const;
  DeviceSnapshot snapshot(Tick now) const;

  DeviceCounters& counters() { return counters_; }
  const DeviceCounters& counters() const { return counters_; }
  const std::vector<StateTransition>& transitions() const { return transitions_; }

 private:
  void transition(Tick at, DeviceState to);

  std::string name_;
  DeviceConfig config_;
  std::mt19937_64 rng_;
  std::deque<Tick> window_;
  DeviceState state_ = DeviceState::Responsive;
  Tick last_over_ = 0;
  DeviceCounters counters_;
  std::vector<StateTransition> transitions_;
};

}  // namespace fbguard::net
