#include "fbguard/scenario/controllers.hpp"

#include <memory>

namespace fbguard::scenario {

namespace {

fb::DataValue cmd(Command c) { return static_cast<std::int64_t>(c); }

}  // namespace

void SensorBehavior::on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) {
  const auto* v = std::get_if<fb::DataValue>(&input);
  if (label != "SAMPLE" || !v || v->kind() != fb::DataKind::Bool) return;
  ctx.emit("IND", {{"IN", *v}});
}

void ActuatorBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "REQ") {
    requested_ = ctx.in("OUT").as_int();
  } else if (event == "HOLD_REQ") {
    const bool hold = ctx.in("HOLD").as_bool();
    if (hold && !hold_) requested_ = 0;
    hold_ = hold;
  } else {
    return;
  }
  ctx.emit("CNF", {{"CMD", hold_ ? std::int64_t{0} : requested_}});
}

void ThrustCtlBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "TOP_IND" && phase_ == Phase::Idle && ctx.in("TOP").as_bool()) {
    phase_ = Phase::Pushing;
    ctx.emit("CMDO", {{"CMD", cmd(Command::Extend)}});
  } else if (event == "EXT_IND" && phase_ == Phase::Pushing && ctx.in("EXT").as_bool()) {
    phase_ = Phase::Returning;
    shared_ = true;
    ctx.emit("CMDO", {{"CMD", cmd(Command::Retract)}});
    ctx.emit("PUB", {{"SharedVariable", true}});
  } else if (event == "RET_IND" && phase_ == Phase::Returning && ctx.in("RET").as_bool()) {
    phase_ = Phase::Idle;
    shared_ = false;
    ctx.emit("CMDO", {{"CMD", cmd(Command::Hold)}});
    ctx.emit("PUB", {{"SharedVariable", false}});
  } else if (event == "HB") {
    ctx.emit("PUB", {{"SharedVariable", shared_}});
  }
}

void LiftCtlBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "BOX_IND" && phase_ == Phase::Idle && ctx.in("BOX").as_bool()) {
    phase_ = Phase::Lifted;
    ctx.emit("CMDO", {{"CMD", cmd(Command::Extend)}});
  } else if (event == "SV_IND" && phase_ == Phase::Lifted && ctx.in("SharedVariable").as_bool()) {
    phase_ = Phase::Idle;
    ctx.emit("CMDO", {{"CMD", cmd(Command::Retract)}});
  }
}

fb::FBInstance make_sensor(std::string id) {
  using namespace fb;
  return {std::move(id), {event_out("IND", {"IN"}), data_out("IN", DataKind::Bool)},
          std::make_unique<SensorBehavior>()};
}

fb::FBInstance make_actuator(std::string id) {
  using namespace fb;
  return {std::move(id),
          {event_in("REQ", {"OUT"}), event_in("HOLD_REQ", {"HOLD"}), event_out("CNF", {"CMD"}),
           data_in("OUT", DataKind::Int), data_in("HOLD", DataKind::Bool), data_out("CMD", DataKind::Int)},
          std::make_unique<ActuatorBehavior>()};
}

fb::FBInstance make_thrustctl(std::string id) {
  using namespace fb;
  return {std::move(id),
          {event_in("TOP_IND", {"TOP"}), event_in("EXT_IND", {"EXT"}), event_in("RET_IND", {"RET"}),
           event_in("HB"), event_out("CMDO", {"CMD"}), event_out("PUB", {"SharedVariable"}),
           data_in("TOP", DataKind::Bool), data_in("EXT", DataKind::Bool), data_in("RET", DataKind::Bool),
           data_out("CMD", DataKind::Int), data_out("SharedVariable", DataKind::Bool)},
          std::make_unique<ThrustCtlBehavior>()};
}

fb::FBInstance make_liftctl(std::string id) {
  using namespace fb;
  return {std::move(id),
          {event_in("BOX_IND", {"BOX"}), event_in("SV_IND", {"SharedVariable"}), event_out("CMDO", {"CMD"}),
           data_in("BOX", DataKind::Bool), data_in("SharedVariable", DataKind::Bool), data_out("CMD", DataKind::Int)},
          std::make_unique<LiftCtlBehavior>()};
}

}  // namespace fbguard::scenario
