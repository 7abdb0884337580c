#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbguard/net/transport.hpp"

namespace fbguard::attack {

enum class AttackKind : std::uint8_t { SpoofPublish, UdpFlood, SynFlood, IcmpFlood };

std::string_view to_string(AttackKind kind);
std::optional<AttackKind> parse_kind(std::string_view text);

struct AttackSpec {
  std::string name;
  AttackKind kind = AttackKind::UdpFlood;
  /// Header source to forge. Floods fall back to the attacker's own address.
  std::optional<net::SocketAddress> claimed_src;
  net::SocketAddress target;
  std::vector<std::uint8_t> payload;
  std::uint64_t rate = 0;  // packets per second, aggregate over attackers
  Tick start = 0;
  Tick stop = 0;
  std::uint32_t attacker_count = 1;
  std::vector<Tick> at;  // SPOOF_PUBLISH send times
};

/// Empty if valid, else the offending field and reason.
std::optional<std::pair<std::string, std::string>> check(const AttackSpec& spec);

class ScheduleOverflow : public std::runtime_error {
 public:
  ScheduleOverflow(std::uint64_t requested, std::uint64_t budget)
      : std::runtime_error("attack schedule of " + std::to_string(requested) + " packets exceeds budget of " +
                           std::to_string(budget)),
        requested_(requested) {}
  std::uint64_t requested() const { return requested_; }

 private:
  std::uint64_t requested_;
};

/// floor(rate * (stop - start))
std::uint64_t flood_count(std::uint64_t rate, Tick start, Tick stop);

/// Send time of aggregate slot m: start + floor(m / rate).
Tick flood_slot(std::uint64_t rate, Tick start, std::uint64_t m);

/// Slots of attacker i out of k: m = i, i + k, i + 2k, ... below flood_count.
std::vector<Tick> attacker_slots(const AttackSpec& spec, std::uint32_t attacker);

/// Forged SYN source for slot m: rotates over 172.16.0.0/20 and ports.
net::SocketAddress syn_source(std::uint64_t m);

net::WirePacket craft_spoofed_publish(const net::SocketAddress& claimed_src, const net::SocketAddress& group,
                                      std::vector<std::uint8_t> payload, Tick at);

inline constexpr std::uint64_t kDefaultEventBudget = 50'000'000;
inline constexpr net::Address kAttackerBase = 0x0A420000;  // 10.66.0.0

/// Adds attacker hosts to a transport and expands attack specs lazily onto
/// its scheduler: each attacker keeps exactly one pending send.
class AttackHarness {
 public:
  explicit AttackHarness(net::Transport& transport, std::uint64_t event_budget = kDefaultEventBudget)
      : transport_(transport), budget_(event_budget) {}

  AttackHarness(const AttackHarness&) = delete;
  AttackHarness& operator=(const AttackHarness&) = delete;

  void install(const AttackSpec& spec);

  bool is_attacker(net::DeviceId device) const;
  const std::vector<net::DeviceId>& attackers() const { return attackers_; }
  std::uint64_t planned() const { return planned_; }
  std::uint64_t sent() const { return sent_; }

 private:
  struct Stream {
    AttackSpec spec;
    net::DeviceId device;
    std::uint32_t index;
    std::uint64_t next_slot;
    std::uint64_t total;
  };

  void step(std::size_t stream);
  net::WirePacket packet_for(const Stream& s, std::uint64_t m, Tick at) const;

  net::Transport& transport_;
  std::uint64_t budget_;
  std::uint64_t planned_ = 0;
  std::uint64_t sent_ = 0;
  std::vector<net::DeviceId> attackers_;
  std::vector<Stream> streams_;
};

}  // namespace fbguard::attack
