#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fbguard/scenario/controllers.hpp"
#include "fbguard/scenario/plant.hpp"
#include "fbguard/scenario/scenario.hpp"

using namespace fbguard;
using namespace fbguard::scenario;

namespace {

ScenarioConfig base(std::uint64_t seed = 1, Tick duration = seconds(30)) {
  ScenarioConfig c;
  c.seed = seed;
  c.duration = duration;
  c.base_dir = FBGUARD_SCENARIO_DIR;
  return c;
}

attack::AttackSpec spoof(std::vector<Tick> at, std::string claimed = "10.0.0.1:61499") {
  attack::AttackSpec s;
  s.name = "spoof";
  s.kind = attack::AttackKind::SpoofPublish;
  s.claimed_src = net::parse_socket_address(claimed);
  s.target = *net::parse_socket_address(kGroup);
  s.payload = {0x41};
  s.at = std::move(at);
  return s;
}

attack::AttackSpec icmp(Tick start, Tick stop, std::uint64_t rate) {
  attack::AttackSpec s;
  s.name = "icmp";
  s.kind = attack::AttackKind::IcmpFlood;
  s.target = *net::parse_socket_address("10.0.0.2:0");
  s.rate = rate;
  s.start = start;
  s.stop = stop;
  return s;
}

std::vector<Tick> dispatch_times(const fb::Trace& trace, std::string_view prefix) {
  std::vector<Tick> out;
  for (const auto& l : trace.lines())
    if (l.kind == fb::Trace::Kind::Dispatch && l.ref.starts_with(prefix)) out.push_back(l.time);
  return out;
}

bool flag_at(const std::vector<FlagChange>& flag, Tick t) {
  bool v = false;
  for (const auto& f : flag) {
    if (f.time > t) break;
    v = f.value;
  }
  return v;
}

}  // namespace

TEST(Plant, StepAdvancesByRatePerTick) {
  for (double rate : {0.1, 0.05, 0.01, 0.25}) {
    PlantState p;
    p.cyl1_cmd = Command::Extend;
    const auto n = static_cast<std::uint64_t>(std::llround(1.0 / rate));
    plant_step(p, rate, n - 1);
    EXPECT_LT(p.cyl1_pos, 1.0) << rate;
    plant_step(p, rate, 1);
    EXPECT_EQ(p.cyl1_pos, 1.0) << rate;
    plant_step(p, rate, 5);
    EXPECT_EQ(p.cyl1_pos, 1.0);
    EXPECT_EQ(p.cyl2_pos, 0.0);
  }
}

TEST(Plant, TenTicksAtPointOneReachesEnd) {
  PlantState p;
  p.cyl2_cmd = Command::Extend;
  plant_step(p, 0.1, 10);
  EXPECT_EQ(p.cyl2_pos, 1.0);
  p.cyl2_cmd = Command::Retract;
  plant_step(p, 0.1, 10);
  EXPECT_EQ(p.cyl2_pos, 0.0);
}

TEST(Plant, HoldDoesNotMove) {
  PlantState p;
  p.cyl1_pos = 0.3;
  p.cyl2_pos = 0.7;
  const PlantState before = p;
  plant_step(p, 0.1, 20);
  EXPECT_EQ(p, before);
}

TEST(Plant, PushOffRequiresBothExtended) {
  PlantState p;
  p.box_present = true;
  p.cyl2_cmd = Command::Extend;
  plant_step(p, 0.1, 10);
  EXPECT_TRUE(p.box_present);
  p.cyl1_cmd = Command::Extend;
  plant_step(p, 0.1, 9);
  EXPECT_TRUE(p.box_present);
  plant_step(p, 0.1, 1);
  EXPECT_FALSE(p.box_present);
  EXPECT_TRUE(p.box_pushed_off);
  EXPECT_FALSE(p.hazard);
}

TEST(Plant, RetractWithBoxLatchesHazard) {
  PlantState p;
  p.box_present = true;
  p.cyl2_pos = 1;
  command(p, 2, Command::Retract);
  EXPECT_TRUE(p.hazard);
  command(p, 2, Command::Extend);
  plant_step(p, 0.1, 10);
  EXPECT_TRUE(p.hazard);
}

TEST(Plant, RetractAfterPushOffIsSafe) {
  PlantState p;
  p.box_pushed_off = true;
  p.cyl2_pos = 1;
  command(p, 2, Command::Retract);
  plant_step(p, 0.1, 10);
  EXPECT_FALSE(p.hazard);
}

TEST(Plant, ArrivalsOnlyWhenIdle) {
  PlantParams params;
  params.first_box = seconds(1);
  params.box_period = seconds(1);
  Plant plant(params);
  for (Tick t = 0; t <= seconds(3); t += params.tick) plant.step(t);
  EXPECT_EQ(plant.arrivals(), 1u);
  EXPECT_EQ(plant.blocked_arrivals(), 2u);
  EXPECT_TRUE(plant.state().box_present);
}

TEST(Plant, CsvHeader) {
  Plant plant;
  plant.step(0);
  const auto csv = plant_csv(plant.rows());
  EXPECT_TRUE(csv.starts_with("time_us,cyl1_pos,cyl2_pos,box_present,box_pushed_off,hazard\n0,0.0000,0.0000,0,0,0\n"));
}

TEST(CycleDetector, CountsCompletedCycle) {
  std::vector<PlantRow> rows = {
      {0, 0, 0, false, false, false},       {100, 0, 0, true, false, false},  {200, 0, 0.5, true, false, false},
      {300, 0.5, 1, true, false, false},    {400, 1, 1, false, true, false},  {500, 0.5, 0.5, false, true, false},
      {600, 0, 0, false, true, false},      {700, 0, 0, false, true, false},
  };
  const auto r = cycle_detector(rows, 1000, 50);
  ASSERT_EQ(r.completions.size(), 1u);
  EXPECT_EQ(r.completions[0], 600u);
  EXPECT_EQ(r.unavailable, 0u);
  EXPECT_EQ(r.availability, 1.0);
}

TEST(CycleDetector, StallCountsAfterGrace) {
  std::vector<PlantRow> rows = {
      {0, 0, 0, false, false, false},   {100, 0, 0, true, false, false},
      {200, 0, 1, true, false, false},  {300, 0, 1, true, false, false},
  };
  const auto r = cycle_detector(rows, 1000, 50);
  EXPECT_TRUE(r.completions.empty());
  EXPECT_EQ(r.unavailable, 800u);
  EXPECT_DOUBLE_EQ(r.availability, 0.2);
}

TEST(CycleDetector, HazardMakesRestUnavailable) {
  std::vector<PlantRow> rows = {
      {0, 0, 0, false, false, false},
      {100, 0, 0, true, false, false},
      {200, 0, 0.5, true, false, false},
      {300, 0, 0.4, true, false, true},
  };
  const auto r = cycle_detector(rows, 1000, 50);
  EXPECT_EQ(r.unavailable, 700u);
  EXPECT_DOUBLE_EQ(r.availability, 0.3);
}

TEST(Scenario, RequiresSeed) {
  ScenarioConfig c;
  EXPECT_THROW(Scenario{c}, std::invalid_argument);
}

TEST(Scenario, BaselineCompletesEveryArrival) {
  Scenario s(base(1, seconds(60)));
  s.run();
  const auto cyc = s.cycles();
  EXPECT_FALSE(s.plant().hazard_time());
  EXPECT_GT(s.plant().arrivals(), 5u);
  // The last arrival may still be in its cycle at the end of the run.
  EXPECT_GE(cyc.completions.size() + 1, s.plant().arrivals());
  EXPECT_EQ(cyc.availability, 1.0);
  EXPECT_FALSE(s.any_plc_unresponsive());
  EXPECT_EQ(s.malformed(), 0u);
}

TEST(Scenario, ThrustCtlRaisesSharedVariableWithRetract) {
  Scenario s(base(1, seconds(20)));
  s.run();
  std::vector<Tick> sv_true, retract;
  for (const auto& l : s.trace().lines()) {
    if (l.kind != fb::Trace::Kind::Emit) continue;
    if (l.ref == "ThrustCtl.PUB" && l.values.find("SharedVariable=true") != std::string::npos) sv_true.push_back(l.time);
    if (l.ref == "ThrustCtl.CMDO" && l.values.find("CMD=2") != std::string::npos) retract.push_back(l.time);
  }
  ASSERT_FALSE(sv_true.empty());
  EXPECT_EQ(sv_true, retract);
}

TEST(Scenario, WiringFollowsPolicy) {
  {
    Scenario s(base());
    EXPECT_EQ(s.network(2).find("IDPS_CFB.IDPS_SIFB"), nullptr);
    EXPECT_EQ(s.network(2).find("E_SWITCH"), nullptr);
    EXPECT_EQ(s.idps(), nullptr);
  }
  for (Policy p : {Policy::GateAndHold, Policy::LogOnly, Policy::Shutdown}) {
    auto c = base();
    c.idps.enabled = true;
    c.idps.ruleset = "rules/spoof.rules";
    c.policy = p;
    Scenario s(c);
    EXPECT_NE(s.network(2).find("IDPS_CFB.IDPS_SIFB"), nullptr);
    EXPECT_EQ(s.network(2).find("E_SWITCH") != nullptr, p == Policy::GateAndHold) << to_string(p);
    EXPECT_EQ(s.network(2).find("E_SWITCH_BOX") != nullptr, p == Policy::GateAndHold) << to_string(p);
    EXPECT_TRUE(s.network(1).validate().empty());
    EXPECT_TRUE(s.network(2).validate().empty());
  }
}

TEST(Scenario, ClientServerBaselineCycles) {
  auto c = base(3, seconds(30));
  c.control.link = Link::ClientServer;
  Scenario s(c);
  s.run();
  EXPECT_FALSE(s.plant().hazard_time());
  EXPECT_GE(s.cycles().completions.size(), 4u);
}

TEST(Scenario, SpoofWithoutIdpsCausesHazard) {
  auto c = base(7);
  c.attacks.push_back(spoof({millis(6004)}));
  Scenario s(c);
  s.run();
  ASSERT_TRUE(s.plant().hazard_time());
  EXPECT_GE(*s.plant().hazard_time(), millis(6004));
  EXPECT_LT(*s.plant().hazard_time(), millis(6100));
}

TEST(Scenario, Plc2CollapseHalvesAvailability) {
  auto c = base(1, seconds(60));
  c.plc2.capacity = 500;
  c.plc2.critical_rate = 1000;
  c.attacks.push_back(icmp(millis(29980), millis(29990) + 1, 100'000));
  Scenario s(c);
  s.run();
  const auto& tr = s.transport().device(s.plc(2)).transitions();
  ASSERT_FALSE(tr.empty());
  EXPECT_EQ(tr.back().to, net::DeviceState::Unresponsive);
  EXPECT_LT(tr.back().time, seconds(30));
  EXPECT_TRUE(s.any_plc_unresponsive());
  EXPECT_NEAR(s.cycles().availability, 0.5, 3.0 / 60.0);
}

TEST(Scenario, ShutdownPolicyHoldsCylinderTwo) {
  auto c = base(7);
  c.idps.enabled = true;
  c.idps.ruleset = "rules/spoof.rules";
  c.policy = Policy::Shutdown;
  c.attacks.push_back(spoof({millis(6004)}));
  Scenario s(c);
  s.run();
  EXPECT_FALSE(s.plant().hazard_time());
  ASSERT_FALSE(s.attack_flag().empty());
  const Tick first = s.attack_flag().front().time;
  for (Tick t : dispatch_times(s.trace(), "LiftCtl.")) EXPECT_LT(t, first);
}

TEST(Scenario, LogOnlyStillLogs) {
  auto c = base(7);
  c.idps.enabled = true;
  c.idps.mode = idps::Mode::Ids;
  c.idps.ruleset = "rules/spoof.rules";
  c.policy = Policy::LogOnly;
  c.attacks.push_back(spoof({millis(6004)}));
  Scenario s(c);
  s.run();
  EXPECT_TRUE(s.plant().hazard_time());
  EXPECT_EQ(s.detection().true_positive, 1u);
  EXPECT_EQ(s.detection().attack_delivered, 1u);
}

// Any spoof schedule whose forged source differs from the real publisher
// endpoint must neither cause a hazard nor reach LiftCtl while A is raised.
TEST(ScenarioProperty, GateAndHoldBlocksSpoofSchedules) {
  std::mt19937_64 rng(2024);
  const std::vector<std::string> claims = {"10.0.0.1:61499", "10.0.0.1:1", "10.0.0.9:61500", "10.66.0.1:40000",
                                           "10.0.0.1:65000"};
  for (int trial = 0; trial < 40; ++trial) {
    auto c = base(rng(), seconds(20));
    c.trace = true;
    c.idps.enabled = true;
    c.idps.mode = trial % 2 ? idps::Mode::Ids : idps::Mode::Ips;
    c.idps.ruleset = "rules/spoof.rules";
    c.policy = Policy::GateAndHold;
    std::vector<Tick> at;
    const int n = 1 + static_cast<int>(rng() % 6);
    for (int i = 0; i < n; ++i) at.push_back(millis(500) + rng() % seconds(19));
    std::sort(at.begin(), at.end());
    at.erase(std::unique(at.begin(), at.end()), at.end());
    c.attacks.push_back(spoof(at, claims[rng() % claims.size()]));
    Scenario s(c);
    s.run();
    EXPECT_FALSE(s.plant().hazard_time()) << "trial " << trial;
    for (Tick t : dispatch_times(s.trace(), "LiftCtl."))
      EXPECT_FALSE(flag_at(s.attack_flag(), t)) << "trial " << trial << " t=" << t;
  }
}

TEST(ScenarioProperty, Deterministic) {
  auto c = base(11, seconds(10));
  c.attacks.push_back(icmp(seconds(2), seconds(3), 20'000));
  Scenario a(c), b(c);
  a.run();
  b.run();
  EXPECT_EQ(a.trace().str(), b.trace().str());
  EXPECT_EQ(plant_csv(a.plant().rows()), plant_csv(b.plant().rows()));
}
