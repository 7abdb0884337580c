#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <random>
#include <type_traits>

#include "fbguard/idps/blocks.hpp"
#include "fbguard/runtime/runtime.hpp"

using namespace fbguard;
using namespace fbguard::idps;

namespace {

static_assert(std::is_invocable_r_v<Verdict, decltype(&Engine::inspect), Engine&, const net::WirePacket&, Tick>,
              "the engine sees only the claimed header");

net::WirePacket pkt(net::Protocol proto, const char* src, const char* dst, std::vector<std::uint8_t> payload = {}) {
  return {proto, *net::parse_socket_address(src), *net::parse_socket_address(dst), std::move(payload), 0};
}

RulesetLoader map_loader(std::map<std::string, std::string> files) {
  return [files = std::move(files)](std::string_view ref) {
    auto it = files.find(std::string(ref));
    if (it == files.end()) throw std::runtime_error("missing " + std::string(ref));
    return it->second;
  };
}

const char* kSpoof = "block udp any any -> 239.192.0.2 61499 srcallow 10.0.0.1 msg \"spoof\"\n";

}  // namespace

TEST(Rules, ParsesRateRule) {
  const auto rules = parse_rules("alert udp any any -> any 61499 rate 100/1 msg \"udp flood\"");
  ASSERT_EQ(rules.size(), 1u);
  const auto& r = rules[0];
  EXPECT_EQ(r.action, Action::Alert);
  EXPECT_EQ(r.proto, ProtoMatch::Udp);
  EXPECT_TRUE(r.src.any());
  EXPECT_EQ(r.dst_port.lo, 61499);
  EXPECT_EQ(r.dst_port.hi, 61499);
  ASSERT_TRUE(r.rate);
  EXPECT_EQ(r.rate->count, 100u);
  EXPECT_EQ(r.rate->window, seconds(1));
  EXPECT_EQ(r.msg, "udp flood");
}

TEST(Rules, EmptyAndCommentsAreLegal) {
  EXPECT_TRUE(parse_rules("").empty());
  EXPECT_TRUE(parse_rules("# nothing\n\n   \n").empty());
}

TEST(Rules, SyntaxErrorsCarryLine) {
  auto line_of = [](const char* text) {
    try {
      parse_rules(text);
    } catch (const RuleSyntaxError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("block any"), 1);
  EXPECT_EQ(line_of("# c\nblock any any any -> any any msg \"everything\""), 2);
  EXPECT_EQ(line_of("alert udp any any -> any 61499"), 1);
  EXPECT_EQ(line_of("alert udp any any -> any 70000 msg \"x\""), 1);
  EXPECT_EQ(line_of("alert udp any any -> any any rate 0/1 msg \"x\""), 1);
  EXPECT_EQ(line_of("alert udp any any -> any any rate 5/0 msg \"x\""), 1);
  EXPECT_EQ(line_of("alert udp 10.0.0.0/33 any -> any any msg \"x\""), 1);
}

TEST(Rules, PrefixPortAndPayloadMatchers) {
  const auto r = parse_rule("alert udp 10.0.0.0/8 1000:2000 -> any 61499 payload \"41\" msg \"x\"", 1);
  EXPECT_TRUE(r.matches_static(pkt(net::Protocol::Udp, "10.9.9.9:1500", "1.2.3.4:61499", {0x41})));
  EXPECT_FALSE(r.matches_static(pkt(net::Protocol::Udp, "10.9.9.9:1500", "1.2.3.4:61499", {0x40})));
  EXPECT_FALSE(r.matches_static(pkt(net::Protocol::Udp, "11.0.0.1:1500", "1.2.3.4:61499", {0x41})));
  EXPECT_FALSE(r.matches_static(pkt(net::Protocol::Udp, "10.0.0.1:2001", "1.2.3.4:61499", {0x41})));
  EXPECT_FALSE(r.matches_static(pkt(net::Protocol::TcpData, "10.0.0.1:1500", "1.2.3.4:61499", {0x41})));
}

TEST(Rules, SrcallowMatchesOutsiders) {
  const auto r = parse_rule(kSpoof, 1);
  EXPECT_FALSE(r.matches_static(pkt(net::Protocol::Udp, "10.0.0.1:61500", "239.192.0.2:61499")));
  EXPECT_TRUE(r.matches_static(pkt(net::Protocol::Udp, "10.66.0.1:61500", "239.192.0.2:61499")));
}

TEST(Rules, ToStringReparses) {
  for (const char* text : {kSpoof, "alert icmp any any -> 10.0.0.2 any rate 100/1 msg \"icmp\"",
                           "block tcp 10.0.0.0/24 1:9 -> any 61498 payload \"4142\" msg \"m\""}) {
    const auto r = parse_rule(text, 1);
    const auto again = parse_rule(r.to_string(), 1);
    EXPECT_EQ(again.to_string(), r.to_string());
  }
}

TEST(RateTracker, HundredOneIsTheFirstMatch) {
  const auto rule = parse_rule("alert udp any any -> any 61499 rate 100/1 msg \"f\"", 1);
  RateTracker tracker;
  for (int i = 1; i <= 100; ++i) ASSERT_FALSE(tracker.observe(rule, 1, static_cast<Tick>(i) * 1000)) << i;
  EXPECT_TRUE(tracker.observe(rule, 1, 101'000));
  EXPECT_FALSE(tracker.observe(rule, 2, 101'000));
}

TEST(RateTracker, MatchesBruteForceOracle) {
  std::mt19937_64 rng(4);
  for (int round = 0; round < 50; ++round) {
    const auto n = 1 + rng() % 20;
    const auto w = 1 + rng() % 3;
    const auto rule =
        parse_rule("alert udp any any -> any any rate " + std::to_string(n) + "/" + std::to_string(w) + " msg \"r\"", 1);
    RateTracker tracker;
    std::map<net::Address, std::vector<Tick>> history;
    Tick t = 0;
    for (int i = 0; i < 2000; ++i) {
      t += rng() % 200'000;
      const net::Address src = rng() % 3;
      auto& h = history[src];
      h.push_back(t);
      std::size_t in_window = 0;
      for (Tick x : h) in_window += x + seconds(w) > t;
      ASSERT_EQ(tracker.observe(rule, src, t), in_window > n);
    }
  }
}

TEST(Engine, OffModePassesAndCountsNothing) {
  Engine e(parse_rules(kSpoof), {Mode::Off, 5000, false});
  const auto v = e.inspect(pkt(net::Protocol::Udp, "10.66.0.1:1", "239.192.0.2:61499"), 0);
  EXPECT_EQ(v.kind, VerdictKind::Pass);
  EXPECT_EQ(e.counters().presented, 0u);
  EXPECT_TRUE(e.alerts().empty());
}

TEST(Engine, IpsBlocksIdsPasses) {
  const auto spoof = pkt(net::Protocol::Udp, "10.66.0.1:1", "239.192.0.2:61499", {0x41});
  Engine ips(parse_rules(kSpoof), {Mode::Ips, 5000, false});
  Engine ids(parse_rules(kSpoof), {Mode::Ids, 5000, false});
  EXPECT_EQ(ips.inspect(spoof, 0).kind, VerdictKind::Blocked);
  EXPECT_EQ(ids.inspect(spoof, 0).kind, VerdictKind::Pass);
  EXPECT_EQ(ips.alerts().size(), 1u);
  EXPECT_EQ(ids.alerts().size(), 1u);
  EXPECT_EQ(ips.alerts()[0].rule_id, "R1");
}

TEST(Engine, FirstMatchWins) {
  Engine e(parse_rules("alert udp any any -> any any msg \"a\"\nblock udp any any -> any any msg \"b\"\n"),
           {Mode::Ips, 0, false});
  const auto v = e.inspect(pkt(net::Protocol::Udp, "1.1.1.1:1", "2.2.2.2:2"), 0);
  EXPECT_EQ(v.kind, VerdictKind::Pass);
  ASSERT_EQ(e.alerts().size(), 1u);
  EXPECT_EQ(e.alerts()[0].msg, "a");
}

TEST(Engine, SaturationUndercountsAlerts) {
  const double capacity = 5000;
  const std::uint64_t rate = 20'000;
  Engine e(parse_rules("alert udp any any -> any 61499 msg \"all\""), {Mode::Ids, capacity, false});
  const auto p = pkt(net::Protocol::Udp, "10.66.0.1:1", "10.0.0.2:61499");
  std::uint64_t steady = 0, uninspected = 0;
  for (std::uint64_t m = 0; m < 3 * rate; ++m) {
    const Tick t = m * kMicrosPerSecond / rate;
    const auto v = e.inspect(p, t);
    if (t >= kMicrosPerSecond) {
      ++steady;
      uninspected += v.kind == VerdictKind::UninspectedPass;
    }
  }
  const auto& c = e.counters();
  EXPECT_EQ(c.inspected + c.dropped_by_engine, c.presented);
  // The offline oracle: every packet matches this rule.
  EXPECT_LT(e.alerts().size(), c.presented);
  EXPECT_NEAR(static_cast<double>(uninspected) / static_cast<double>(steady), 1.0 - capacity / rate, 0.01);
}

TEST(Engine, AccountingAndMonotoneLogProperty) {
  std::mt19937_64 rng(12);
  const auto rules = parse_rules(
      "block udp any any -> any 61499 rate 20/1 msg \"f\"\n"
      "alert icmp any any -> any any msg \"ping\"\n");
  for (int round = 0; round < 20; ++round) {
    Engine e(rules, {rng() & 1 ? Mode::Ips : Mode::Ids, static_cast<double>(1 + rng() % 300), false});
    Tick t = 0;
    for (int i = 0; i < 5000; ++i) {
      t += rng() % 5000;
      const auto proto = rng() & 1 ? net::Protocol::Udp : net::Protocol::IcmpEcho;
      net::WirePacket w{proto, {static_cast<net::Address>(rng() % 4), 1}, {9, 61499}, {}, t};
      const auto v = e.inspect(w, t);
      if (v.kind == VerdictKind::Blocked) ASSERT_EQ(e.mode(), Mode::Ips);
    }
    const auto& c = e.counters();
    ASSERT_EQ(c.inspected + c.dropped_by_engine, c.presented);
    for (std::size_t i = 1; i < e.alerts().size(); ++i) ASSERT_LE(e.alerts()[i - 1].time, e.alerts()[i].time);
  }
}

TEST(Service, IdsTransparencyAndIpsSoundnessProperty) {
  std::mt19937_64 rng(31);
  const std::map<std::string, std::string> files{{"r", kSpoof}};
  IdpsService off(map_loader(files), {}), ids(map_loader(files), {}), ips(map_loader(files), {});
  ids.start(std::get<StartPlan>(ids.prepare("ruleset=r;mode=ids;capacity=100")));
  ips.start(std::get<StartPlan>(ips.prepare("ruleset=r;mode=ips;capacity=100")));
  const auto block_rule = parse_rule(kSpoof, 1);
  Tick t = 0;
  for (int i = 0; i < 20'000; ++i) {
    t += rng() % 3000;
    const net::Address src = rng() % 2 ? *net::parse_address("10.0.0.1") : *net::parse_address("10.66.0.1");
    const net::WirePacket w{net::Protocol::Udp, {src, 61500}, *net::parse_socket_address("239.192.0.2:61499"), {0x41}, t};
    ASSERT_EQ(ids.admit(w, t), off.admit(w, t));
    const auto dropped_before = ips.engine()->counters().dropped_by_engine;
    const bool passed = ips.admit(w, t);
    const bool uninspected = ips.engine()->counters().dropped_by_engine != dropped_before;
    if (passed && block_rule.matches_static(w)) ASSERT_TRUE(uninspected);
  }
}

TEST(Service, PrepareRejectsBadParams) {
  IdpsService svc(map_loader({{"r", kSpoof}, {"bad", "block any"}}), {});
  EXPECT_TRUE(std::holds_alternative<StartPlan>(svc.prepare("ruleset=r;mode=ips")));
  for (const char* p : {"ruleset=missing;mode=ips", "ruleset=bad;mode=ips", "ruleset=r;mode=maybe", "mode=ips",
                        "ruleset=r;mode=ips;capacity=-1", "ruleset=r;mode=ips;colour=red"})
    EXPECT_TRUE(std::holds_alternative<std::string>(svc.prepare(p))) << p;
}

namespace {

struct SifbRig {
  IdpsService svc{map_loader({{"r", kSpoof}, {"bad", "block any"}}), {}};
  fb::FBNetwork net;
  fb::Scheduler sched;
  fb::Runtime rt{net, sched};
  std::vector<std::pair<bool, std::string>> inito;

  SifbRig() {
    net.add_instance(make_idps_sifb("SIFB", &svc));
    rt.observe("SIFB.INITO", [this](const fb::Emission& e, Tick) {
      inito.emplace_back(e.data.at(0).value.as_bool(), e.data.at(1).value.as_string());
    });
  }
  void init(const char* params) {
    net.set_parameter("SIFB.PARAMS", params);
    rt.fire("SIFB.INIT");
  }
};

}  // namespace

TEST(Sifb, InitRunsStopStops) {
  SifbRig rig;
  rig.init("ruleset=r;mode=ips");
  EXPECT_EQ(rig.svc.status(), Status::Running);
  EXPECT_EQ(rig.inito.back(), std::pair(true, std::string("RUNNING")));
  rig.rt.fire("SIFB.INIT");
  EXPECT_EQ(rig.inito.back(), std::pair(false, std::string("RUNNING")));
  rig.rt.fire("SIFB.STOP");
  EXPECT_EQ(rig.svc.status(), Status::Stopped);
  EXPECT_EQ(rig.inito.back(), std::pair(true, std::string("STOPPED")));
  rig.rt.fire("SIFB.STOP");
  EXPECT_EQ(rig.inito.back(), std::pair(false, std::string("STOPPED")));
}

TEST(Sifb, BadRulesetFaultsAndFailsOpen) {
  SifbRig rig;
  rig.init("ruleset=bad;mode=ips");
  EXPECT_EQ(rig.svc.status(), Status::Fault);
  EXPECT_FALSE(rig.svc.diagnostic().empty());
  EXPECT_EQ(rig.inito.back(), std::pair(false, std::string("FAULT")));
  EXPECT_TRUE(rig.svc.admit(pkt(net::Protocol::Udp, "10.66.0.1:1", "239.192.0.2:61499"), 0));
}

TEST(Sifb, RestartResetsCounters) {
  SifbRig rig;
  rig.init("ruleset=r;mode=ips");
  rig.svc.admit(pkt(net::Protocol::Udp, "10.66.0.1:1", "239.192.0.2:61499"), 0);
  EXPECT_EQ(rig.svc.engine()->counters().presented, 1u);
  rig.rt.fire("SIFB.STOP");
  rig.rt.fire("SIFB.INIT");
  EXPECT_EQ(rig.svc.status(), Status::Running);
  EXPECT_EQ(rig.svc.engine()->counters().presented, 0u);
}

namespace {

/// Drives ALERTCHECK directly: `alerts` are times ALERT_SEQ increments,
/// polls every `poll`; returns (time, QO) for each poll.
std::vector<std::pair<Tick, bool>> alertcheck_timeline(const std::vector<Tick>& alerts, Tick poll, Tick hold,
                                                       Tick until) {
  fb::FBNetwork net;
  fb::Scheduler sched;
  fb::Runtime rt(net, sched);
  std::int64_t seq = 0;
  net.add_instance({"SRC", {fb::event_in("REQ"), fb::event_out("IND", {"SEQ"}), fb::data_out("SEQ", fb::DataKind::Int)},
                    std::make_unique<fb::FunctionBehavior>(
                        [&seq](std::string_view, fb::DispatchContext& ctx) { ctx.emit("IND", {{"SEQ", ++seq}}); })});
  net.add_instance(make_alertcheck("AC", hold));
  net.connect("SRC.IND", "AC.ALERT");
  net.connect("SRC.SEQ", "AC.ALERT_SEQ");
  std::vector<std::pair<Tick, bool>> polls;
  bool polling = false;
  rt.observe("AC.CNF", [&](const fb::Emission& e, Tick now) {
    if (polling) polls.emplace_back(now, e.data.at(0).value.as_bool());
  });
  for (Tick a : alerts) rt.post(a, "SRC.REQ");
  for (Tick t = poll; t <= until; t += poll) {
    sched.post(t, [&] {
      polling = true;
      rt.fire("AC.REQ");
      polling = false;
    });
  }
  sched.run_until(until);
  return polls;
}

}  // namespace

TEST(AlertCheck, HoldWindowTimeline) {
  const Tick poll = millis(100), hold = seconds(2), t0 = millis(1050);
  const auto polls = alertcheck_timeline({t0}, poll, hold, seconds(5));
  for (const auto& [t, qo] : polls) {
    const bool expected = t >= t0 && t - t0 <= hold;
    ASSERT_EQ(qo, expected) << t;
  }
  EXPECT_TRUE(alertcheck_timeline({}, poll, hold, seconds(2)).back().second == false);
}

TEST(AlertCheck, NeverTrueAfterQuietHoldProperty) {
  std::mt19937_64 rng(44);
  for (int round = 0; round < 30; ++round) {
    std::vector<Tick> alerts;
    for (int i = 0; i < 10; ++i) alerts.push_back(rng() % seconds(20));
    std::sort(alerts.begin(), alerts.end());
    const Tick hold = millis(100) * (1 + rng() % 30);
    for (const auto& [t, qo] : alertcheck_timeline(alerts, millis(100), hold, seconds(25))) {
      bool recent = false;
      for (Tick a : alerts) recent = recent || (a <= t && t - a <= hold);
      ASSERT_EQ(qo, recent);
    }
  }
}

TEST(Cfb, AlertRaisesA) {
  IdpsService svc(map_loader({{"r", kSpoof}}), {});
  fb::FBNetwork net;
  fb::Scheduler sched;
  fb::Runtime rt(net, sched);
  fb::instantiate(net, "IDPS_CFB", make_idps_cfb(&svc));
  EXPECT_TRUE(fb::check_bindings(make_idps_cfb(&svc)).empty());
  svc.set_alert_listener([&](std::uint64_t seq) {
    rt.service("IDPS_CFB.IDPS_SIFB", "ALERT", fb::DataValue(static_cast<std::int64_t>(seq)));
  });
  net.set_parameter("IDPS_CFB.PARAMS", "ruleset=r;mode=ips");
  rt.fire("IDPS_CFB.INIT");
  std::vector<bool> a;
  rt.observe("IDPS_CFB.CNF", [&](const fb::Emission& e, Tick) { a.push_back(e.data.at(0).value.as_bool()); });
  rt.fire("IDPS_CFB.REQ");
  EXPECT_FALSE(svc.admit(pkt(net::Protocol::Udp, "10.66.0.1:1", "239.192.0.2:61499"), 0));
  EXPECT_EQ(a, (std::vector<bool>{false, true}));
  const auto* sifb = net.find("IDPS_CFB.IDPS_SIFB");
  EXPECT_EQ(sifb->data_out("ALERT_SEQ"), fb::DataValue(1));
}

TEST(AlertsCsv, Header) {
  Engine e(parse_rules(kSpoof), {Mode::Ips, 0, false});
  e.inspect(pkt(net::Protocol::Udp, "10.66.0.1:7", "239.192.0.2:61499"), 42);
  EXPECT_EQ(alerts_csv(e.alerts()),
            "time_us,rule_id,proto,claimed_src,dst,msg\n42,R1,udp,10.66.0.1:7,239.192.0.2:61499,spoof\n");
}
