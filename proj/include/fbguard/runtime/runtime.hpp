#pragma once

#include <deque>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbguard/runtime/network.hpp"
#include "fbguard/runtime/scheduler.hpp"
#include "fbguard/runtime/trace.hpp"

namespace fbguard::fb {

/// Executes one FBNetwork on a shared Scheduler. Each externally triggered
/// dispatch runs to completion: every event it emits, transitively, is
/// dispatched before the scheduler moves to its next entry.
class Runtime {
 public:
  using Observer = std::function<void(const Emission&, Tick)>;

  Runtime(FBNetwork& network, Scheduler& scheduler, Trace* trace = nullptr)
      : network_(network), scheduler_(scheduler), trace_(trace) {}

  Runtime(const Runtime&) = delete;
  Runtime& operator=(const Runtime&) = delete;

  FBNetwork& network() { return network_; }
  Scheduler& scheduler() { return scheduler_; }

  /// Queue an external event at virtual time `at`.
  void post(Tick at, std::string_view event_in_ref, std::uint32_t lane = 0);

  /// Dispatch an event input now and drain the resulting cascade.
  void fire(std::string_view event_in_ref);

  /// Deliver a platform service input to an SIFB now and drain the cascade.
  void service(std::string_view instance, std::string_view label, ServiceInput input = {});

  /// Callback for every emission of an event output (after latching).
  void observe(std::string_view event_out_ref, Observer observer);

  /// While halted, fire/service calls are dropped (device down, app suspended).
  void set_halt_predicate(std::function<bool()> halted) { halted_ = std::move(halted); }
  void suspend() { suspended_ = true; }
  bool suspended() const { return suspended_; }
  bool halted() const { return suspended_ || (halted_ && halted_()); }

  std::uint64_t dispatch_count() const { return dispatches_; }

 private:
  struct ServiceCall {
    std::string instance;
    std::string label;
    ServiceInput input;
  };
  using Work = std::variant<PortRef, ServiceCall>;

  void enqueue(Work work);
  void run_one(Work& work);

  std::deque<Work> work_;
  bool draining_ = false;

  FBNetwork& network_;
  Scheduler& scheduler_;
  Trace* trace_;
  std::map<PortRef, std::vector<Observer>> observers_;
  std::function<bool()> halted_;
  bool suspended_ = false;
  std::uint64_t dispatches_ = 0;
};

}  // namespace fbguard::fb
