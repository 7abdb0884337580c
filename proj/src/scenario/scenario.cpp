#include "fbguard/scenario/scenario.hpp"

#include <stdexcept>

#include "fbguard/csifb/blocks.hpp"
#include "fbguard/idps/blocks.hpp"
#include "fbguard/runtime/composite.hpp"
#include "fbguard/runtime/standard_blocks.hpp"
#include "fbguard/scenario/controllers.hpp"

namespace fbguard::scenario {

std::string_view to_string(Policy policy) {
  switch (policy) {
    case Policy::GateAndHold: return "GATE_AND_HOLD";
    case Policy::LogOnly: return "LOG_ONLY";
    case Policy::Shutdown: return "SHUTDOWN";
  }
  return "?";
}

std::optional<Policy> parse_policy(std::string_view text) {
  if (text == "GATE_AND_HOLD") return Policy::GateAndHold;
  if (text == "LOG_ONLY") return Policy::LogOnly;
  if (text == "SHUTDOWN") return Policy::Shutdown;
  return std::nullopt;
}

std::string_view to_string(Link link) { return link == Link::PubSub ? "pubsub" : "clientserver"; }

std::optional<Link> parse_link(std::string_view text) {
  if (text == "pubsub") return Link::PubSub;
  if (text == "clientserver") return Link::ClientServer;
  return std::nullopt;
}

namespace {

bool read_top(const PlantState& s) { return s.cyl2_pos == 1.0 && s.box_present; }
bool read_ext(const PlantState& s) { return s.cyl1_pos == 1.0; }
bool read_ret(const PlantState& s) { return s.cyl1_pos == 0.0; }
bool read_box(const PlantState& s) { return s.box_present; }

bool ingested(net::Outcome o) {
  return o != net::Outcome::DroppedCapacity && o != net::Outcome::DroppedUnresponsive;
}

std::string mode_param(idps::Mode mode) {
  switch (mode) {
    case idps::Mode::Off: return "off";
    case idps::Mode::Ids: return "ids";
    case idps::Mode::Ips: return "ips";
  }
  return "off";
}

std::string format_capacity(double c) {
  std::string s = std::to_string(c);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

Scenario::Scenario(ScenarioConfig config)
    : config_(std::move(config)), trace_(config_.trace), plant_(config_.plant) {
  if (!config_.seed) throw std::invalid_argument("scenario seed is required");
  transport_ = std::make_unique<net::Transport>(scheduler_, *config_.seed, config_.latency);
  plc1_ = transport_->add_device("PLC1", *net::parse_address(kPlc1Address), config_.plc1);
  plc2_ = transport_->add_device("PLC2", *net::parse_address(kPlc2Address), config_.plc2);
  rt1_ = std::make_unique<fb::Runtime>(net1_, scheduler_, &trace_);
  rt2_ = std::make_unique<fb::Runtime>(net2_, scheduler_, &trace_);
  rt1_->set_halt_predicate(
      [this] { return transport_->device(plc1_).state() == net::DeviceState::Unresponsive; });
  rt2_->set_halt_predicate(
      [this] { return transport_->device(plc2_).state() == net::DeviceState::Unresponsive; });

  build_plc1();
  build_plc2();

  transport_->set_observer(
      [this](const net::Packet& p, net::DeviceId at, net::Outcome o) { on_packet(p, at, o); });

  harness_ = std::make_unique<attack::AttackHarness>(*transport_, config_.event_budget);
  for (const auto& spec : config_.attacks) harness_->install(spec);
}

Scenario::~Scenario() = default;

void Scenario::build_plc1() {
  const csifb::Platform platform{transport_.get(), plc1_, rt1_.get()};
  for (const char* id : {"IX_TOP", "IX_EXT", "IX_RET"}) net1_.add_instance(make_sensor(id));
  net1_.add_instance(make_thrustctl());
  net1_.add_instance(make_actuator("QX1"));
  net1_.connect("IX_TOP.IND", "ThrustCtl.TOP_IND");
  net1_.connect("IX_EXT.IND", "ThrustCtl.EXT_IND");
  net1_.connect("IX_RET.IND", "ThrustCtl.RET_IND");
  net1_.connect("IX_TOP.IN", "ThrustCtl.TOP");
  net1_.connect("IX_EXT.IN", "ThrustCtl.EXT");
  net1_.connect("IX_RET.IN", "ThrustCtl.RET");
  net1_.connect("ThrustCtl.CMDO", "QX1.REQ");
  net1_.connect("ThrustCtl.CMD", "QX1.OUT");
  net1_.set_parameter("QX1.HOLD", false);

  const std::string link = config_.control.link == Link::PubSub ? "PUBLISH" : "CLIENT";
  if (config_.control.link == Link::PubSub) {
    net1_.add_instance(csifb::make_publisher(link, {fb::DataKind::Bool}, platform, kPublisherPort));
    net1_.set_parameter("PUBLISH.ID", std::string(kGroup));
    rt1_->post(0, "PUBLISH.INIT");
  } else {
    net1_.add_instance(
        csifb::make_client(link, {fb::DataKind::Bool}, platform, kClientPort, config_.control.client_retry));
    net1_.set_parameter("CLIENT.ID", std::string(kPlc2Address) + ":" + std::to_string(kServerPort));
    rt1_->post(config_.control.client_init_at, "CLIENT.INIT");
  }
  net1_.set_parameter(link + ".QI", true);
  net1_.connect("ThrustCtl.PUB", link + ".REQ");
  net1_.connect("ThrustCtl.SharedVariable", link + ".SD_1");

  rt1_->observe("QX1.CNF", [this](const fb::Emission& e, Tick now) {
    plant_.command(1, static_cast<Command>(e.data.at(0).value.as_int()), now);
  });

  sensors_.push_back({rt1_.get(), "IX_TOP", read_top, std::nullopt, 0});
  sensors_.push_back({rt1_.get(), "IX_EXT", read_ext, std::nullopt, 0});
  sensors_.push_back({rt1_.get(), "IX_RET", read_ret, std::nullopt, 0});

  if (config_.control.heartbeat)
    schedule_periodic(config_.control.heartbeat_period, config_.control.heartbeat_period, rt1_.get(),
                      "ThrustCtl.HB");
}

void Scenario::build_plc2() {
  const csifb::Platform platform{transport_.get(), plc2_, rt2_.get()};
  net2_.add_instance(make_sensor("IX_BOX"));
  net2_.add_instance(make_liftctl());
  net2_.add_instance(make_actuator("QX2"));
  net2_.connect("IX_BOX.IN", "LiftCtl.BOX");
  net2_.connect("LiftCtl.CMDO", "QX2.REQ");
  net2_.connect("LiftCtl.CMD", "QX2.OUT");

  const std::string link = config_.control.link == Link::PubSub ? "SUBSCRIBE" : "SERVER";
  if (config_.control.link == Link::PubSub) {
    net2_.add_instance(csifb::make_subscriber(link, {fb::DataKind::Bool}, platform));
    net2_.set_parameter("SUBSCRIBE.ID", std::string(kGroup));
  } else {
    net2_.add_instance(csifb::make_server(link, {fb::DataKind::Bool}, platform));
    net2_.set_parameter("SERVER.ID", "0.0.0.0:" + std::to_string(kServerPort));
  }
  net2_.set_parameter(link + ".QI", true);
  net2_.connect(link + ".RD_1", "LiftCtl.SharedVariable");
  rt2_->post(0, link + ".INIT");

  const bool gate = config_.idps.enabled && config_.policy == Policy::GateAndHold;
  if (config_.idps.enabled) {
    idps::EngineConfig defaults{config_.idps.mode, config_.idps.inspection_capacity, config_.idps.fail_closed};
    idps_ = std::make_unique<idps::IdpsService>(idps::file_loader(config_.base_dir), defaults);
    fb::instantiate(net2_, "IDPS_CFB", idps::make_idps_cfb(idps_.get(), config_.idps.hold));
    net2_.set_parameter("IDPS_CFB.PARAMS", "ruleset=" + config_.idps.ruleset + ";mode=" +
                                               mode_param(config_.idps.mode) + ";capacity=" +
                                               format_capacity(config_.idps.inspection_capacity));
    transport_->set_tap(plc2_, idps_.get());
    idps_->set_alert_listener([this](std::uint64_t seq) {
      alert_pending_ = true;
      rt2_->service("IDPS_CFB.IDPS_SIFB", "ALERT", fb::DataValue(static_cast<std::int64_t>(seq)));
    });
    rt2_->observe("IDPS_CFB.CNF", [this](const fb::Emission& e, Tick now) {
      const bool a = e.data.at(0).value.as_bool();
      if (flag_.empty() ? a : flag_.back().value != a) flag_.push_back({now, a});
      if (a && config_.policy == Policy::Shutdown && !rt2_->suspended()) {
        rt2_->suspend();
        plant_.command(2, Command::Hold, now);
      }
    });
    rt2_->post(0, "IDPS_CFB.INIT");
    schedule_periodic(config_.idps.poll, config_.idps.poll, rt2_.get(), "IDPS_CFB.REQ");
  }

  if (gate) {
    net2_.add_instance(fb::make_e_switch("E_SWITCH"));
    net2_.add_instance(fb::make_e_switch("E_SWITCH_BOX"));
    net2_.connect(link + ".IND", "E_SWITCH.EI");
    net2_.connect("E_SWITCH.EO0", "LiftCtl.SV_IND");
    net2_.connect("IX_BOX.IND", "E_SWITCH_BOX.EI");
    net2_.connect("E_SWITCH_BOX.EO0", "LiftCtl.BOX_IND");
    net2_.connect("IDPS_CFB.A", "E_SWITCH.G");
    net2_.connect("IDPS_CFB.A", "E_SWITCH_BOX.G");
    net2_.connect("IDPS_CFB.A", "QX2.HOLD");
    net2_.connect("IDPS_CFB.CNF", "QX2.HOLD_REQ");
  } else {
    net2_.connect(link + ".IND", "LiftCtl.SV_IND");
    net2_.connect("IX_BOX.IND", "LiftCtl.BOX_IND");
    net2_.set_parameter("QX2.HOLD", false);
  }

  rt2_->observe("QX2.CNF", [this](const fb::Emission& e, Tick now) {
    plant_.command(2, static_cast<Command>(e.data.at(0).value.as_int()), now);
  });
  sensors_.push_back({rt2_.get(), "IX_BOX", read_box, std::nullopt, 0});
}

void Scenario::schedule_periodic(Tick first, Tick period, fb::Runtime* rt, std::string event) {
  if (period == 0 || first > config_.duration) return;
  scheduler_.post(first, [this, first, period, rt, event = std::move(event)]() mutable {
    rt->fire(event);
    schedule_periodic(first + period, period, rt, std::move(event));
  });
}

void Scenario::schedule_tick(Tick at) {
  if (at > config_.duration) return;
  scheduler_.post(at, [this, at] {
    plant_.step(at);
    for (auto& s : sensors_) {
      const bool value = s.read(plant_.state());
      if (s.last && *s.last == value && at - s.last_emit < config_.control.sensor_refresh) continue;
      s.last = value;
      s.last_emit = at;
      s.runtime->service(s.instance, "SAMPLE", fb::DataValue(value));
    }
    schedule_tick(at + config_.plant.tick);
  });
}

void Scenario::run() {
  if (finished_) throw std::logic_error("scenario already ran");
  schedule_tick(0);
  scheduler_.run_until(config_.duration);
  transport_->finalize(config_.duration);
  finished_ = true;
}

void Scenario::on_packet(const net::Packet& p, net::DeviceId at, net::Outcome outcome) {
  const bool attack = harness_ && harness_->is_attacker(p.true_origin);
  auto& t = traffic_[at];
  ++(attack ? t.attack : t.legit)[outcome];

  if (!attack && (at == plc1_ || at == plc2_) && (p.true_origin == plc1_ || p.true_origin == plc2_)) {
    (at == plc1_ ? arrivals1_ : arrivals2_).push_back({scheduler_.now(), p.wire.proto, outcome, p.wire.payload});
  }

  if (at != plc2_ || !idps_ || !ingested(outcome)) return;
  const bool flagged = alert_pending_;
  alert_pending_ = false;
  if (idps_->status() != idps::Status::Running && !flagged) return;
  if (attack) {
    ++(flagged ? detection_.true_positive : detection_.false_negative);
    if (outcome == net::Outcome::Blocked) ++detection_.attack_blocked;
    else ++detection_.attack_delivered;
  } else {
    ++(flagged ? detection_.false_positive : detection_.true_negative);
    if (outcome == net::Outcome::Blocked) ++detection_.legit_blocked;
  }
}

const Traffic& Scenario::traffic(net::DeviceId device) const {
  static const Traffic empty;
  auto it = traffic_.find(device);
  return it == traffic_.end() ? empty : it->second;
}

CycleReport Scenario::cycles() const {
  return cycle_detector(plant_.rows(), config_.duration, config_.plant.stall_grace);
}

std::uint64_t Scenario::malformed() const {
  const auto* inst = net2_.find(config_.control.link == Link::PubSub ? "SUBSCRIBE" : "SERVER");
  if (!inst) return 0;
  if (const auto* s = inst->behavior_as<csifb::SubscriberBehavior>()) return s->malformed();
  if (const auto* s = inst->behavior_as<csifb::ServerBehavior>()) return s->malformed();
  return 0;
}

bool Scenario::any_plc_unresponsive() const {
  return transport_->device(plc1_).state() == net::DeviceState::Unresponsive ||
         transport_->device(plc2_).state() == net::DeviceState::Unresponsive;
}

}  // namespace fbguard::scenario
