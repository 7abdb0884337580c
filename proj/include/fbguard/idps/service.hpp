#pragma once

#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "fbguard/idps/engine.hpp"
#include "fbguard/net/tap.hpp"

namespace fbguard::idps {

enum class Status : std::uint8_t { Stopped, Running, Fault };

std::string_view to_string(Status status);

/// Returns ruleset text for a reference; throws std::runtime_error if absent.
using RulesetLoader = std::function<std::string(std::string_view ref)>;

RulesetLoader file_loader(std::string base_dir = {});

struct StartPlan {
  std::vector<Rule> rules;
  EngineConfig config;
};

/// The engine as a platform service on one device: sits between ingest and
/// socket delivery. While not RUNNING it admits everything.
class IdpsService : public net::PacketTap {
 public:
  using AlertListener = std::function<void(std::uint64_t alert_seq)>;

  IdpsService(RulesetLoader loader, EngineConfig defaults)
      : loader_(std::move(loader)), defaults_(defaults) {}

  /// Parses PARAMS ("ruleset=<ref>;mode=<off|ids|ips>[;capacity=<pps>]")
  /// and loads the ruleset. No state changes.
  std::variant<StartPlan, std::string> prepare(std::string_view params) const;

  void start(StartPlan plan);
  void fault(std::string diagnostic);
  void stop();

  Status status() const { return status_; }
  const std::string& diagnostic() const { return diagnostic_; }

  bool admit(const net::WirePacket& packet, Tick now) override;

  void set_alert_listener(AlertListener listener) { listener_ = std::move(listener); }

  /// Engine of the current (or most recently stopped) session; null before
  /// the first successful start.
  const Engine* engine() const { return engine_.get(); }
  /// Same rules with unlimited capacity, fed every presented packet.
  const Engine* shadow() const { return shadow_.get(); }

 private:
  RulesetLoader loader_;
  EngineConfig defaults_;
  Status status_ = Status::Stopped;
  std::string diagnostic_;
  std::unique_ptr<Engine> engine_;
  std::unique_ptr<Engine> shadow_;
  AlertListener listener_;
};

}  // namespace fbguard::idps
