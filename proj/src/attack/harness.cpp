#include "fbguard/attack/harness.hpp"

#include <algorithm>

namespace fbguard::attack {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

std::string_view to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::SpoofPublish: return "SPOOF_PUBLISH";
    case AttackKind::UdpFlood: return "UDP_FLOOD";
    case AttackKind::SynFlood: return "SYN_FLOOD";
    case AttackKind::IcmpFlood: return "ICMP_FLOOD";
  }
  return "?";
}

std::optional<AttackKind> parse_kind(std::string_view text) {
  for (auto k : {AttackKind::SpoofPublish, AttackKind::UdpFlood, AttackKind::SynFlood, AttackKind::IcmpFlood}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

std::optional<std::pair<std::string, std::string>> check(const AttackSpec& spec) {
  if (spec.attacker_count == 0) return std::pair{"attacker_count", "must be >= 1"};
  if (spec.kind == AttackKind::SpoofPublish) {
    if (spec.at.empty()) return std::pair{"at", "SPOOF_PUBLISH needs at least one send time"};
    if (spec.rate != 0) return std::pair{"rate", "SPOOF_PUBLISH takes no rate"};
    if (!spec.claimed_src) return std::pair{"claimed_src", "SPOOF_PUBLISH needs a claimed source"};
    return std::nullopt;
  }
  if (!spec.at.empty()) return std::pair{"at", "only SPOOF_PUBLISH takes send times"};
  if (spec.rate == 0) return std::pair{"rate", "must be > 0"};
  if (spec.start >= spec.stop) return std::pair{"stop", "must be after start"};
  return std::nullopt;
}

std::uint64_t flood_count(std::uint64_t rate, Tick start, Tick stop) {
  if (stop <= start) return 0;
  return static_cast<std::uint64_t>(static_cast<Wide>(rate) * (stop - start) / kMicrosPerSecond);
}

Tick flood_slot(std::uint64_t rate, Tick start, std::uint64_t m) {
  return start + static_cast<Tick>(static_cast<Wide>(m) * kMicrosPerSecond / rate);
}

std::vector<Tick> attacker_slots(const AttackSpec& spec, std::uint32_t attacker) {
  std::vector<Tick> out;
  const auto n = flood_count(spec.rate, spec.start, spec.stop);
  for (std::uint64_t m = attacker; m < n; m += spec.attacker_count) out.push_back(flood_slot(spec.rate, spec.start, m));
  return out;
}

net::SocketAddress syn_source(std::uint64_t m) {
  const auto host = static_cast<net::Address>(m % 4096);
  const auto port = static_cast<std::uint16_t>(1024 + (m / 4096) % 64000);
  return {0xAC100000u + host, port};
}

net::WirePacket craft_spoofed_publish(const net::SocketAddress& claimed_src, const net::SocketAddress& group,
                                      std::vector<std::uint8_t> payload, Tick at) {
  return {net::Protocol::Udp, claimed_src, group, std::move(payload), at};
}

bool AttackHarness::is_attacker(net::DeviceId device) const {
  return std::find(attackers_.begin(), attackers_.end(), device) != attackers_.end();
}

void AttackHarness::install(const AttackSpec& spec) {
  if (auto problem = check(spec)) throw std::invalid_argument(spec.name + "." + problem->first + ": " + problem->second);
  const std::uint64_t total =
      spec.kind == AttackKind::SpoofPublish ? spec.at.size() : flood_count(spec.rate, spec.start, spec.stop);
  if (planned_ + total > budget_) throw ScheduleOverflow(planned_ + total, budget_);
  planned_ += total;
  const std::uint32_t count = spec.kind == AttackKind::SpoofPublish ? 1 : spec.attacker_count;
  for (std::uint32_t i = 0; i < count; ++i) {
    const auto address = kAttackerBase + static_cast<net::Address>(attackers_.size() + 1);
    net::DeviceConfig unlimited;
    unlimited.unlimited = true;
    const auto device = transport_.add_device(spec.name + "#" + std::to_string(i), address, unlimited);
    attackers_.push_back(device);
    streams_.push_back({spec, device, i, i, total});
    step(streams_.size() - 1);
  }
}

net::WirePacket AttackHarness::packet_for(const Stream& s, std::uint64_t m, Tick at) const {
  const net::SocketAddress own{transport_.address_of(s.device), static_cast<std::uint16_t>(40000 + s.index)};
  switch (s.spec.kind) {
    case AttackKind::SpoofPublish: return craft_spoofed_publish(*s.spec.claimed_src, s.spec.target, s.spec.payload, at);
    case AttackKind::UdpFlood:
      return {net::Protocol::Udp, s.spec.claimed_src.value_or(own), s.spec.target,
              s.spec.payload.empty() ? std::vector<std::uint8_t>{0xFF} : s.spec.payload, at};
    case AttackKind::SynFlood: return {net::Protocol::TcpSyn, syn_source(m), s.spec.target, {}, at};
    case AttackKind::IcmpFlood: return {net::Protocol::IcmpEcho, s.spec.claimed_src.value_or(own), s.spec.target, s.spec.payload, at};
  }
  return {};
}

void AttackHarness::step(std::size_t index) {
  Stream& s = streams_[index];
  if (s.next_slot >= s.total) return;
  const std::uint64_t m = s.next_slot;
  const Tick at = s.spec.kind == AttackKind::SpoofPublish ? s.spec.at[m] : flood_slot(s.spec.rate, s.spec.start, m);
  s.next_slot += s.spec.kind == AttackKind::SpoofPublish ? 1 : s.spec.attacker_count;
  transport_.scheduler().post(at, [this, index, m, at] {
    transport_.send(streams_[index].device, packet_for(streams_[index], m, at));
    ++sent_;
    step(index);
  });
}

}  // namespace fbguard::attack
