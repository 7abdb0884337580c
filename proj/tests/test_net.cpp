#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fbguard/net/transport.hpp"

using namespace fbguard;
using namespace fbguard::net;

namespace {

template <class T>
concept HasTrueOrigin = requires(T t) { t.true_origin; };

static_assert(!HasTrueOrigin<WirePacket>, "the receiver view must not carry ground truth");
static_assert(HasTrueOrigin<Packet>);

/// Feeds `n` arrivals at a fixed rate starting at `start`; returns the drop
/// fraction over arrivals after the first full second (steady window).
double steady_drop_fraction(double capacity, std::uint64_t rate, std::uint64_t n, std::uint64_t seed) {
  DeviceConfig cfg;
  cfg.capacity = capacity;
  DeviceModel dev("D", cfg, seed);
  std::uint64_t steady = 0, dropped = 0;
  for (std::uint64_t m = 0; m < n; ++m) {
    const Tick t = m * kMicrosPerSecond / rate;
    const auto r = dev.ingest(t);
    if (t >= kMicrosPerSecond) {
      ++steady;
      dropped += r == IngestResult::DroppedCapacity;
    }
  }
  return static_cast<double>(dropped) / static_cast<double>(steady);
}

std::vector<double> ranks(const std::vector<double>& v) {
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < idx.size();) {
    std::size_t j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
    for (std::size_t k = i; k <= j; ++k) r[idx[k]] = (static_cast<double>(i + j) / 2.0) + 1;
    i = j + 1;
  }
  return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

WirePacket udp(const char* src, const char* dst, Tick at) {
  return {Protocol::Udp, *parse_socket_address(src), *parse_socket_address(dst), {0x41}, at};
}

}  // namespace

TEST(Device, FreshIsResponsive) {
  DeviceModel dev("D", {}, 1);
  const auto snap = dev.snapshot(0);
  EXPECT_EQ(snap.state, DeviceState::Responsive);
  EXPECT_EQ(snap.rate, 0u);
}

TEST(Device, BelowCapacityAlwaysIngested) {
  DeviceModel dev("D", {}, 1);
  for (Tick t = 0; t < seconds(5); t += 10'000) ASSERT_EQ(dev.ingest(t), IngestResult::Ingested);
  EXPECT_EQ(dev.state(), DeviceState::Responsive);
}

TEST(Device, DropFractionMatchesFluidLimit) {
  const double capacity = 10'000;
  const std::uint64_t rate = 40'000;
  const double expected = 1.0 - capacity / static_cast<double>(rate);
  const double observed = steady_drop_fraction(capacity, rate, 4 * rate, 9);
  EXPECT_NEAR(observed, expected, 0.02);
}

TEST(Device, DropFractionMonotoneInRate) {
  const std::vector<std::uint64_t> rates{12'000, 15'000, 20'000, 30'000, 40'000, 60'000, 80'000, 120'000};
  std::vector<double> x, y;
  for (auto r : rates) {
    x.push_back(static_cast<double>(r));
    y.push_back(steady_drop_fraction(10'000, r, 2 * r, 3));
  }
  EXPECT_GT(spearman(x, y), 0.99);
}

TEST(Device, CriticalRateCollapsesAndAbsorbs) {
  DeviceModel dev("D", {}, 1);
  Tick collapse = 0;
  for (Tick t = 0; t < seconds(2); ++t) {
    if (dev.ingest(t) == IngestResult::DroppedUnresponsive && collapse == 0) collapse = t;
  }
  EXPECT_EQ(dev.state(), DeviceState::Unresponsive);
  // The window holds 10^6 arrivals once the 10^6-th lands, one per microsecond.
  EXPECT_EQ(collapse, 999'999u);
  EXPECT_EQ(dev.ingest(seconds(100)), IngestResult::DroppedUnresponsive);
  const auto& c = dev.counters();
  EXPECT_EQ(c.offered, c.ingested + c.dropped_capacity + c.dropped_unresponsive);
  ASSERT_EQ(dev.transitions().back().to, DeviceState::Unresponsive);
}

TEST(Device, DegradedRecoversAfterQuietWindow) {
  DeviceConfig cfg;
  cfg.capacity = 10;
  DeviceModel dev("D", cfg, 1);
  for (Tick t = 0; t < 20; ++t) dev.ingest(t * 1000);
  EXPECT_EQ(dev.state(), DeviceState::Degraded);
  dev.refresh(seconds(2));
  EXPECT_EQ(dev.state(), DeviceState::Responsive);
  ASSERT_EQ(dev.transitions().size(), 2u);
  EXPECT_EQ(dev.transitions()[1].time, 19'000u + kMicrosPerSecond);
}

TEST(Device, ConservationAndAbsorptionProperty) {
  std::mt19937_64 rng(21);
  for (int round = 0; round < 40; ++round) {
    DeviceConfig cfg;
    cfg.capacity = 1 + static_cast<double>(rng() % 2'000);
    cfg.critical_rate = cfg.capacity * (2 + static_cast<double>(rng() % 20));
    DeviceModel dev("D", cfg, rng());
    Tick t = 0;
    bool down = false;
    for (int i = 0; i < 20'000; ++i) {
      t += rng() % 400;
      const auto r = dev.ingest(t);
      if (down) ASSERT_NE(r, IngestResult::Ingested);
      down = down || dev.state() == DeviceState::Unresponsive;
    }
    const auto& c = dev.counters();
    ASSERT_EQ(c.offered, c.ingested + c.dropped_capacity + c.dropped_unresponsive);
  }
}

TEST(HalfOpen, FullTableRefuses) {
  HalfOpenTable table(128, seconds(3));
  for (std::uint16_t i = 0; i < 128; ++i)
    ASSERT_EQ(table.on_syn({0xAC100000u + i, 1024}, 61498, 0), SynResult::Accepted);
  EXPECT_EQ(table.on_syn(*parse_socket_address("10.0.0.1:50000"), 61498, 1), SynResult::Refused);
}

TEST(HalfOpen, AckEstablishesAndEmpties) {
  HalfOpenTable table(128, seconds(3));
  const auto peer = *parse_socket_address("10.0.0.1:50000");
  EXPECT_EQ(table.on_syn(peer, 61498, 0), SynResult::Accepted);
  EXPECT_EQ(table.on_ack(peer, 61498, 10), AckResult::Established);
  EXPECT_EQ(table.size(), 0u);
  EXPECT_EQ(table.on_ack(peer, 61498, 20), AckResult::Stray);
}

TEST(HalfOpen, ExpiredSlotReclaimed) {
  HalfOpenTable table(1, seconds(3));
  EXPECT_EQ(table.on_syn({1, 1}, 80, 0), SynResult::Accepted);
  EXPECT_EQ(table.on_syn({2, 2}, 80, seconds(3)), SynResult::Refused);
  EXPECT_EQ(table.on_syn({2, 2}, 80, seconds(3) + 1), SynResult::Accepted);
  EXPECT_EQ(table.evictions(), 1u);
}

TEST(HalfOpen, TippingPointProperty) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 200; ++round) {
    const std::size_t k = 1 + rng() % 64;
    const Tick timeout = 1 + rng() % seconds(5);
    HalfOpenTable table(k, timeout);
    Tick t = 0;
    std::vector<Tick> opened;
    for (std::size_t i = 0; i < k; ++i) {
      t += rng() % 1000;
      ASSERT_EQ(table.on_syn({static_cast<Address>(i + 1), 1}, 80, t), SynResult::Accepted);
      opened.push_back(t);
    }
    const Tick probe = t + rng() % (timeout + 1);
    const bool any_expired = probe - opened.front() > timeout;
    const auto r = table.on_syn({0xFFFFFFFF, 9}, 80, probe);
    ASSERT_EQ(r == SynResult::Accepted, any_expired);
    ASSERT_LE(table.size(), k);
  }
}

TEST(Multicast, JoinIsOpenAndIdempotent) {
  MulticastGroup g;
  const Endpoint sub{1, *parse_socket_address("10.0.0.2:61499")};
  g.join(sub);
  g.join(sub);
  EXPECT_EQ(g.members.size(), 1u);
  g.join({7, *parse_socket_address("10.66.0.1:61499")});
  EXPECT_EQ(g.members.size(), 2u);
}

TEST(Transport, UnicastArrivesAfterLatency) {
  fb::Scheduler sched;
  Transport net(sched, 1, 500);
  const auto a = net.add_device("A", *parse_address("10.0.0.1"));
  const auto b = net.add_device("B", *parse_address("10.0.0.2"));
  std::vector<Tick> got;
  net.bind_udp(b, 7, [&](const WirePacket&, Tick now) { got.push_back(now); });
  sched.post(1000, [&] { EXPECT_EQ(net.send(a, udp("10.0.0.1:5", "10.0.0.2:7", 1000)), SendResult::Sent); });
  sched.run_until(10'000);
  EXPECT_EQ(got, std::vector<Tick>{1500});
}

TEST(Transport, MulticastDeterministicOrder) {
  fb::Scheduler sched;
  Transport net(sched, 1, 500);
  const auto pub = net.add_device("P", *parse_address("10.0.0.1"));
  const auto s1 = net.add_device("S1", *parse_address("10.0.0.2"));
  const auto s2 = net.add_device("S2", *parse_address("10.0.0.3"));
  const auto group = *parse_socket_address("239.192.0.2:61499");
  std::vector<std::pair<DeviceId, Tick>> got;
  for (auto s : {s2, s1}) {
    net.join_group(group.addr, {s, {net.address_of(s), group.port}});
    net.bind_udp(s, group.port, [&got, s](const WirePacket&, Tick now) { got.emplace_back(s, now); });
  }
  net.send(pub, udp("10.0.0.1:61500", "239.192.0.2:61499", 0));
  sched.run_until(1000);
  ASSERT_EQ(got.size(), 2u);
  EXPECT_EQ(got[0].second, 500u);
  EXPECT_EQ(got[1].second, 500u);
  EXPECT_EQ(got[0].first, s1);
}

TEST(Transport, UnresponsiveSenderIsDown) {
  fb::Scheduler sched;
  Transport net(sched, 1, 500);
  DeviceConfig tiny;
  tiny.capacity = 1;
  tiny.critical_rate = 2;
  const auto a = net.add_device("A", *parse_address("10.0.0.1"), tiny);
  const auto b = net.add_device("B", *parse_address("10.0.0.2"));
  net.send(b, udp("10.0.0.2:1", "10.0.0.1:1", 0));
  net.send(b, udp("10.0.0.2:1", "10.0.0.1:1", 0));
  sched.run_until(1000);
  ASSERT_EQ(net.device(a).state(), DeviceState::Unresponsive);
  EXPECT_EQ(net.send(a, udp("10.0.0.1:1", "10.0.0.2:1", 1000)), SendResult::SenderDown);
  EXPECT_EQ(net.device(a).counters().sender_down, 1u);
}

TEST(Transport, HandshakeAndStrayData) {
  fb::Scheduler sched;
  Transport net(sched, 1, 500);
  const auto c = net.add_device("C", *parse_address("10.0.0.1"));
  const auto s = net.add_device("S", *parse_address("10.0.0.2"));
  std::vector<Protocol> client_got;
  std::vector<Outcome> outcomes;
  int server_data = 0;
  net.set_observer([&](const Packet&, DeviceId at, Outcome o) {
    if (at == s) outcomes.push_back(o);
  });
  net.listen_tcp(s, 61498, [&](const WirePacket&, Tick) { ++server_data; });
  net.bind_tcp_client(c, 50000, [&](const WirePacket& w, Tick) { client_got.push_back(w.proto); });
  const auto from = *parse_socket_address("10.0.0.1:50000");
  const auto to = *parse_socket_address("10.0.0.2:61498");
  net.send(c, {Protocol::TcpData, from, to, {0x41}, 0});
  net.send(c, {Protocol::TcpSyn, from, to, {}, 1});
  sched.run_until(2000);
  ASSERT_EQ(client_got, std::vector<Protocol>{Protocol::TcpSynAck});
  net.send(c, {Protocol::TcpAck, from, to, {}, 2000});
  net.send(c, {Protocol::TcpData, from, to, {0x41}, 2001});
  sched.run_until(5000);
  EXPECT_EQ(server_data, 1);
  EXPECT_EQ(outcomes, (std::vector<Outcome>{Outcome::StrayData, Outcome::SynAccepted, Outcome::Established,
                                            Outcome::Delivered}));
  EXPECT_TRUE(net.established(s, from, 61498));
}

TEST(Transport, IcmpNeverReachesSockets) {
  fb::Scheduler sched;
  Transport net(sched, 1, 500);
  const auto a = net.add_device("A", *parse_address("10.0.0.1"));
  const auto b = net.add_device("B", *parse_address("10.0.0.2"));
  int handled = 0;
  net.bind_udp(b, 0, [&](const WirePacket&, Tick) { ++handled; });
  std::vector<Outcome> outcomes;
  net.set_observer([&](const Packet&, DeviceId, Outcome o) { outcomes.push_back(o); });
  net.send(a, {Protocol::IcmpEcho, {net.address_of(a), 0}, {net.address_of(b), 0}, {}, 0});
  sched.run_until(1000);
  EXPECT_EQ(handled, 0);
  EXPECT_EQ(outcomes, std::vector<Outcome>{Outcome::Consumed});
}
