#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbguard/runtime/data_value.hpp"
#include "fbguard/time.hpp"

namespace fbguard::fb {

using Bytes = std::vector<std::uint8_t>;

/// Input handed to a service-interface block by its platform service (a
/// received datagram, a sensor sample, an alert notification).
using ServiceInput = std::variant<std::monostate, DataValue, Bytes>;

struct Assignment {
  std::string port;
  DataValue value;
};

/// One output of a dispatch. An empty event name latches data outputs
/// without firing anything.
struct Emission {
  std::string event;
  std::vector<Assignment> data;
};

using DataMap = std::map<std::string, DataValue, std::less<>>;

class DispatchContext {
 public:
  DispatchContext(Tick now, const DataMap& inputs) : now_(now), inputs_(inputs) {}

  Tick now() const { return now_; }

  /// Current (sampled) value of a data input.
  const DataValue& in(std::string_view port) const;

  void emit(std::string event, std::vector<Assignment> data = {});
  void latch(std::string port, DataValue value);

  /// Side effect run only if the dispatch commits (after outputs are latched).
  void defer(std::function<void()> action) { deferred_.push_back(std::move(action)); }

  std::vector<Emission>& emissions() { return emissions_; }
  std::vector<std::function<void()>>& deferred() { return deferred_; }

 private:
  Tick now_;
  const DataMap& inputs_;
  std::vector<Emission> emissions_;
  std::vector<std::function<void()>> deferred_;
};

/// Deterministic transition function of a function block. The runtime runs
/// every dispatch against a clone and commits it only if the emitted outputs
/// are all declared, so implementations keep their state in plain members.
class Behavior {
 public:
  virtual ~Behavior() = default;

  virtual std::unique_ptr<Behavior> clone() const = 0;

  virtual void on_event(std::string_view event, DispatchContext& ctx) = 0;

  /// Service-initiated activity (SIFBs only). Default: ignore.
  virtual void on_service(std::string_view /*label*/, const ServiceInput& /*input*/,
                          DispatchContext& /*ctx*/) {}
};

template <class Derived>
class ClonableBehavior : public Behavior {
 public:
  std::unique_ptr<Behavior> clone() const override {
    return std::make_unique<Derived>(static_cast<const Derived&>(*this));
  }
};

/// Stateless behavior from a callable; handy for adapters and tests.
class FunctionBehavior final : public ClonableBehavior<FunctionBehavior> {
 public:
  using Fn = std::function<void(std::string_view, DispatchContext&)>;
  explicit FunctionBehavior(Fn fn) : fn_(std::move(fn)) {}
  void on_event(std::string_view event, DispatchContext& ctx) override { fn_(event, ctx); }

 private:
  Fn fn_;
};

}  // namespace fbguard::fb
