#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <vector>

#include "fbguard/idps/rule.hpp"
#include "fbguard/net/wire.hpp"

namespace fbguard::idps {

enum class Mode : std::uint8_t { Off, Ids, Ips };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);

struct Alert {
  Tick time;
  std::string rule_id;
  Action action;
  net::Protocol proto;
  net::SocketAddress claimed_src;
  net::SocketAddress dst;
  std::size_t payload_len;
  std::string msg;
};

enum class VerdictKind : std::uint8_t { Pass, Blocked, UninspectedPass, UninspectedBlock };

struct Verdict {
  VerdictKind kind = VerdictKind::Pass;
  const Rule* rule = nullptr;  // first matching rule, if any

  bool admitted() const { return kind == VerdictKind::Pass || kind == VerdictKind::UninspectedPass; }
};

struct EngineCounters {
  std::uint64_t presented = 0;
  std::uint64_t inspected = 0;
  std::uint64_t dropped_by_engine = 0;
  std::uint64_t matched = 0;
  std::uint64_t blocked = 0;
};

/// Exact sliding-window counter per (rule, claimed source address). A rate
/// clause N/W holds once more than N qualifying packets fall in (now - W, now].
class RateTracker {
 public:
  bool observe(const Rule& rule, net::Address claimed_src, Tick now);
  void clear() { windows_.clear(); }

 private:
  std::map<std::pair<const Rule*, net::Address>, std::deque<Tick>> windows_;
};

struct EngineConfig {
  Mode mode = Mode::Ips;
  /// Packets per second the engine can inspect; 0 means unlimited.
  double inspection_capacity = 5'000;
  bool fail_closed = false;
};

/// Rule evaluation with first-match-wins in file order, bounded by an
/// inspection budget over a sliding one-second window.
class Engine {
 public:
  Engine(std::vector<Rule> rules, EngineConfig config);

  Verdict inspect(const net::WirePacket& packet, Tick now);

  Mode mode() const { return config_.mode; }
  const EngineConfig& config() const { return config_; }
  const std::vector<Rule>& rules() const { return rules_; }
  const EngineCounters& counters() const { return counters_; }
  const std::vector<Alert>& alerts() const { return alerts_; }
  std::uint64_t alert_seq() const { return alerts_.size(); }

 private:
  bool saturated(Tick now);

  std::vector<Rule> rules_;
  EngineConfig config_;
  RateTracker rates_;
  std::deque<Tick> inspection_window_;
  EngineCounters counters_;
  std::vector<Alert> alerts_;
};

/// CSV with header `time_us,rule_id,proto,claimed_src,dst,msg`.
std::string alerts_csv(const std::vector<Alert>& alerts);

}  // namespace fbguard::idps
