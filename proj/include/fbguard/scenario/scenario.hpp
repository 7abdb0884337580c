#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fbguard/attack/harness.hpp"
#include "fbguard/idps/service.hpp"
#include "fbguard/net/transport.hpp"
#include "fbguard/runtime/runtime.hpp"
#include "fbguard/scenario/config.hpp"
#include "fbguard/scenario/plant.hpp"

namespace fbguard::scenario {

/// Ground-truth delivery tallies for one device, split by true origin.
struct Traffic {
  std::map<net::Outcome, std::uint64_t> legit;
  std::map<net::Outcome, std::uint64_t> attack;
};

/// A packet from the peer PLC arriving at a PLC.
struct LegitArrival {
  Tick time;
  net::Protocol proto;
  net::Outcome outcome;
  std::vector<std::uint8_t> payload;
};

/// Per-packet engine decisions on the IDPS device against true origin.
/// A packet is flagged when its inspection raised an alert.
struct Detection {
  std::uint64_t true_positive = 0;
  std::uint64_t false_positive = 0;
  std::uint64_t false_negative = 0;
  std::uint64_t true_negative = 0;
  std::uint64_t attack_blocked = 0;
  std::uint64_t legit_blocked = 0;
  std::uint64_t attack_delivered = 0;
};

struct FlagChange {
  Tick time;
  bool value;
};

/// The two-PLC case study wired up on one scheduler: PLC1 runs ThrustCtl,
/// its sensors, QX1 and PUBLISH (or CLIENT); PLC2 runs LiftCtl, IX_BOX, QX2
/// and SUBSCRIBE (or SERVER), plus IDPS_CFB and the gating E_SWITCHes when
/// enabled. Attackers are added from the config.
class Scenario {
 public:
  explicit Scenario(ScenarioConfig config);
  ~Scenario();

  Scenario(const Scenario&) = delete;
  Scenario& operator=(const Scenario&) = delete;

  void run();
  bool finished() const { return finished_; }

  const ScenarioConfig& config() const { return config_; }
  fb::Scheduler& scheduler() { return scheduler_; }
  net::Transport& transport() { return *transport_; }
  const net::Transport& transport() const { return *transport_; }
  net::DeviceId plc(int which) const { return which == 1 ? plc1_ : plc2_; }
  fb::FBNetwork& network(int which) { return which == 1 ? net1_ : net2_; }
  const fb::FBNetwork& network(int which) const { return which == 1 ? net1_ : net2_; }
  fb::Runtime& runtime(int which) { return which == 1 ? *rt1_ : *rt2_; }
  const Plant& plant() const { return plant_; }
  const fb::Trace& trace() const { return trace_; }
  const idps::IdpsService* idps() const { return idps_.get(); }
  const attack::AttackHarness& harness() const { return *harness_; }

  const Traffic& traffic(net::DeviceId device) const;
  const std::vector<LegitArrival>& arrivals_at(int which) const { return which == 1 ? arrivals1_ : arrivals2_; }
  const Detection& detection() const { return detection_; }
  const std::vector<FlagChange>& attack_flag() const { return flag_; }
  CycleReport cycles() const;

  std::uint64_t malformed() const;
  bool any_plc_unresponsive() const;

 private:
  struct SensorDriver {
    fb::Runtime* runtime;
    std::string instance;
    bool (*read)(const PlantState&);
    std::optional<bool> last;
    Tick last_emit = 0;
  };

  void build_plc1();
  void build_plc2();
  void schedule_tick(Tick at);
  void schedule_periodic(Tick first, Tick period, fb::Runtime* rt, std::string event);
  void on_packet(const net::Packet& packet, net::DeviceId at, net::Outcome outcome);

  ScenarioConfig config_;
  fb::Scheduler scheduler_;
  std::unique_ptr<net::Transport> transport_;
  net::DeviceId plc1_ = 0;
  net::DeviceId plc2_ = 0;
  fb::FBNetwork net1_;
  fb::FBNetwork net2_;
  fb::Trace trace_;
  std::unique_ptr<fb::Runtime> rt1_;
  std::unique_ptr<fb::Runtime> rt2_;
  std::unique_ptr<idps::IdpsService> idps_;
  std::unique_ptr<attack::AttackHarness> harness_;
  Plant plant_;
  std::vector<SensorDriver> sensors_;
  std::map<net::DeviceId, Traffic> traffic_;
  std::vector<LegitArrival> arrivals1_;
  std::vector<LegitArrival> arrivals2_;
  Detection detection_;
  bool alert_pending_ = false;
  std::vector<FlagChange> flag_;
  bool finished_ = false;
};

}  // namespace fbguard::scenario
