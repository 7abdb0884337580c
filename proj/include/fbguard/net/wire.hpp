#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/time.hpp"

namespace fbguard::net {

enum class Protocol : std::uint8_t { Udp, TcpSyn, TcpSynAck, TcpAck, TcpData, IcmpEcho };

std::string_view to_string(Protocol proto);

/// "udp", "tcp" or "icmp".
std::string_view family(Protocol proto);

constexpr bool is_tcp(Protocol p) {
  return p == Protocol::TcpSyn || p == Protocol::TcpSynAck || p == Protocol::TcpAck || p == Protocol::TcpData;
}

using Address = std::uint32_t;

std::optional<Address> parse_address(std::string_view text);
std::string format_address(Address addr);

/// 224.0.0.0/4
constexpr bool is_multicast(Address a) { return (a >> 28) == 0xE; }

struct SocketAddress {
  Address addr = 0;
  std::uint16_t port = 0;

  auto operator<=>(const SocketAddress&) const = default;
};

/// "a.b.c.d:port"
std::optional<SocketAddress> parse_socket_address(std::string_view text);
std::string to_string(const SocketAddress& sa);

/// What a receiver (and any rule engine) can see of a frame: the header as
/// claimed by the sender plus the payload.
struct WirePacket {
  Protocol proto = Protocol::Udp;
  SocketAddress src;
  SocketAddress dst;
  std::vector<std::uint8_t> payload;
  Tick send_time = 0;
};

}  // namespace fbguard::net
