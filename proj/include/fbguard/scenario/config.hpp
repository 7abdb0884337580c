#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbguard/attack/harness.hpp"
#include "fbguard/idps/engine.hpp"
#include "fbguard/net/device.hpp"
#include "fbguard/scenario/plant.hpp"

namespace fbguard::scenario {

enum class Policy : std::uint8_t { GateAndHold, LogOnly, Shutdown };
enum class Link : std::uint8_t { PubSub, ClientServer };

std::string_view to_string(Policy policy);
std::optional<Policy> parse_policy(std::string_view text);
std::string_view to_string(Link link);
std::optional<Link> parse_link(std::string_view text);

struct IdpsParams {
  bool enabled = false;
  idps::Mode mode = idps::Mode::Ips;
  std::string ruleset;
  double inspection_capacity = 5'000;
  Tick poll = millis(100);
  Tick hold = seconds(2);
  bool fail_closed = false;
};

struct ControlParams {
  Link link = Link::PubSub;
  Tick sensor_refresh = millis(100);
  bool heartbeat = false;
  Tick heartbeat_period = seconds(1);
  Tick client_init_at = 0;
  Tick client_retry = millis(500);
};

struct ScenarioConfig {
  std::string name = "scenario";
  Tick duration = seconds(60);
  std::optional<std::uint64_t> seed;
  Tick latency = 500;
  net::DeviceConfig plc1;
  net::DeviceConfig plc2;
  IdpsParams idps;
  Policy policy = Policy::GateAndHold;
  PlantParams plant;
  ControlParams control;
  std::vector<attack::AttackSpec> attacks;
  bool trace = true;
  std::uint64_t event_budget = attack::kDefaultEventBudget;
  /// Directory relative ruleset paths are resolved against.
  std::string base_dir;
};

inline constexpr const char* kPlc1Address = "10.0.0.1";
inline constexpr const char* kPlc2Address = "10.0.0.2";
inline constexpr const char* kGroup = "239.192.0.2:61499";
inline constexpr std::uint16_t kPublisherPort = 61500;
inline constexpr std::uint16_t kServerPort = 61498;
inline constexpr std::uint16_t kClientPort = 50000;

}  // namespace fbguard::scenario
