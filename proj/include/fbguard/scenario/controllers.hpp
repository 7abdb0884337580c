#pragma once

#include <string>

#include "fbguard/runtime/network.hpp"
#include "fbguard/scenario/plant.hpp"

namespace fbguard::scenario {

/// IX: one sensor bit. Service input "SAMPLE" (BOOL) latches IN and fires IND.
class SensorBehavior final : public fb::ClonableBehavior<SensorBehavior> {
 public:
  void on_event(std::string_view, fb::DispatchContext&) override {}
  void on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) override;
};

/// QX: one actuator command. REQ WITH OUT sets the requested command, HOLD
/// WITH HOLD overrides it with HOLD while true. Raising HOLD discards the
/// pending request, so a release never replays a stale command. CNF WITH CMD
/// carries the effective command.
class ActuatorBehavior final : public fb::ClonableBehavior<ActuatorBehavior> {
 public:
  void on_event(std::string_view event, fb::DispatchContext& ctx) override;

 private:
  std::int64_t requested_ = 0;
  bool hold_ = false;
};

/// PLC1 logic: pushes the box off once cylinder 2 has lifted it, then
/// retracts and raises SharedVariable until cylinder 1 is home again.
class ThrustCtlBehavior final : public fb::ClonableBehavior<ThrustCtlBehavior> {
 public:
  enum class Phase : std::uint8_t { Idle, Pushing, Returning };

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  Phase phase() const { return phase_; }

 private:
  Phase phase_ = Phase::Idle;
  bool shared_ = false;
};

/// PLC2 logic: lifts a newly arrived box, lowers cylinder 2 when
/// SharedVariable turns true.
class LiftCtlBehavior final : public fb::ClonableBehavior<LiftCtlBehavior> {
 public:
  enum class Phase : std::uint8_t { Idle, Lifted };

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  Phase phase() const { return phase_; }

 private:
  Phase phase_ = Phase::Idle;
};

fb::FBInstance make_sensor(std::string id);
fb::FBInstance make_actuator(std::string id);
fb::FBInstance make_thrustctl(std::string id = "ThrustCtl");
fb::FBInstance make_liftctl(std::string id = "LiftCtl");

}  // namespace fbguard::scenario
