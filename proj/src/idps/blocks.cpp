#include "fbguard/idps/blocks.hpp"

#include <memory>

namespace fbguard::idps {

void IdpsSifbBehavior::report(fb::DispatchContext& ctx, bool qo) {
  ctx.emit("INITO", {{"QO", qo}, {"STATUS", std::string(to_string(status_))}});
}

void IdpsSifbBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event == "INIT") {
    if (status_ == Status::Running) {
      report(ctx, false);
      return;
    }
    auto plan = service_->prepare(ctx.in("PARAMS").as_string());
    if (auto* diagnostic = std::get_if<std::string>(&plan)) {
      status_ = Status::Fault;
      ctx.defer([svc = service_, d = *diagnostic] { svc->fault(d); });
      report(ctx, false);
      return;
    }
    status_ = Status::Running;
    ctx.defer([svc = service_, p = std::move(std::get<StartPlan>(plan))]() mutable { svc->start(std::move(p)); });
    ctx.latch("ALERT_SEQ", std::int64_t{0});
    report(ctx, true);
    return;
  }
  if (event == "STOP") {
    if (status_ == Status::Stopped) {
      report(ctx, false);
      return;
    }
    status_ = Status::Stopped;
    ctx.defer([svc = service_] { svc->stop(); });
    report(ctx, true);
  }
}

void IdpsSifbBehavior::on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) {
  if (label != "ALERT" || status_ != Status::Running) return;
  const auto* seq = std::get_if<fb::DataValue>(&input);
  if (!seq || seq->kind() != fb::DataKind::Int) return;
  ctx.emit("IND", {{"ALERT_SEQ", *seq}});
}

void AlertCheckBehavior::on_event(std::string_view event, fb::DispatchContext& ctx) {
  if (event != "REQ" && event != "ALERT") return;
  const std::int64_t seq = ctx.in("ALERT_SEQ").as_int();
  if (seq > last_seq_) last_increase_ = ctx.now();
  last_seq_ = seq;
  const bool qo = last_increase_ && ctx.now() - *last_increase_ <= hold_;
  const bool changed = qo != qo_;
  qo_ = qo;
  if (event == "REQ" || changed) {
    ctx.emit("CNF", {{"QO", qo}});
  } else {
    ctx.latch("QO", qo);
  }
}

fb::FBInstance make_idps_sifb(std::string id, IdpsService* service) {
  using namespace fb;
  return {std::move(id),
          {event_in("INIT", {"PARAMS"}), event_in("STOP"), event_out("INITO", {"QO", "STATUS"}),
           event_out("IND", {"ALERT_SEQ"}), data_in("PARAMS", DataKind::String), data_out("QO", DataKind::Bool),
           data_out("STATUS", DataKind::String), data_out("ALERT_SEQ", DataKind::Int)},
          std::make_unique<IdpsSifbBehavior>(service)};
}

fb::FBInstance make_alertcheck(std::string id, Tick hold) {
  using namespace fb;
  return {std::move(id),
          {event_in("REQ", {"ALERT_SEQ"}), event_in("ALERT", {"ALERT_SEQ"}), event_out("CNF", {"QO"}),
           data_in("ALERT_SEQ", DataKind::Int), data_out("QO", DataKind::Bool)},
          std::make_unique<AlertCheckBehavior>(hold)};
}

fb::CompositeFB make_idps_cfb(IdpsService* service, Tick hold) {
  using namespace fb;
  CompositeFB cfb;
  cfb.interface = {event_in("INIT", {"PARAMS"}), event_in("STOP"), event_in("REQ"),
                   event_out("INITO", {"STATUS"}), event_out("CNF", {"A"}),
                   data_in("PARAMS", DataKind::String), data_out("A", DataKind::Bool),
                   data_out("STATUS", DataKind::String)};
  cfb.interior.add_instance(make_idps_sifb("IDPS_SIFB", service));
  cfb.interior.add_instance(make_alertcheck("ALERTCHECK", hold));
  cfb.interior.connect("IDPS_SIFB.IND", "ALERTCHECK.ALERT");
  cfb.interior.connect("IDPS_SIFB.ALERT_SEQ", "ALERTCHECK.ALERT_SEQ");
  cfb.bindings = {
      {"INIT", {"IDPS_SIFB", "INIT"}},     {"STOP", {"IDPS_SIFB", "STOP"}},
      {"REQ", {"ALERTCHECK", "REQ"}},      {"PARAMS", {"IDPS_SIFB", "PARAMS"}},
      {"INITO", {"IDPS_SIFB", "INITO"}},   {"CNF", {"ALERTCHECK", "CNF"}},
      {"A", {"ALERTCHECK", "QO"}},         {"STATUS", {"IDPS_SIFB", "STATUS"}},
  };
  return cfb;
}

}  // namespace fbguard::idps
