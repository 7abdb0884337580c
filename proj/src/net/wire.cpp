#include "fbguard/net/wire.hpp"

#include <charconv>

namespace fbguard::net {

std::string_view to_string(Protocol proto) {
  switch (proto) {
    case Protocol::Udp: return "UDP";
    case Protocol::TcpSyn: return "TCP_SYN";
    case Protocol::TcpSynAck: return "TCP_SYNACK";
    case Protocol::TcpAck: return "TCP_ACK";
    case Protocol::TcpData: return "TCP_DATA";
    case Protocol::IcmpEcho: return "ICMP_ECHO";
  }
  return "?";
}

std::string_view family(Protocol proto) {
  if (proto == Protocol::Udp) return "udp";
  if (proto == Protocol::IcmpEcho) return "icmp";
  return "tcp";
}

namespace {

template <class T>
std::optional<T> parse_uint(std::string_view text, T max) {
  if (text.empty() || text.size() > 10) return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || v > max) return std::nullopt;
  return static_cast<T>(v);
}

}  // namespace

std::optional<Address> parse_address(std::string_view text) {
  Address out = 0;
  for (int i = 0; i < 4; ++i) {
    auto dot = text.find('.');
    if ((i < 3) == (dot == std::string_view::npos)) return std::nullopt;
    auto octet = parse_uint<std::uint32_t>(text.substr(0, dot), 255);
    if (!octet) return std::nullopt;
    out = (out << 8) | *octet;
    text = i < 3 ? text.substr(dot + 1) : std::string_view{};
  }
  return out;
}

std::string format_address(Address addr) {
  return std::to_string(addr >> 24) + "." + std::to_string((addr >> 16) & 0xFF) + "." +
         std::to_string((addr >> 8) & 0xFF) + "." + std::to_string(addr & 0xFF);
}

std::optional<SocketAddress> parse_socket_address(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) return std::nullopt;
  auto addr = parse_address(text.substr(0, colon));
  auto port = parse_uint<std::uint16_t>(text.substr(colon + 1), 65535);
  if (!addr || !port) return std::nullopt;
  return SocketAddress{*addr, *port};
}

std::string to_string(const SocketAddress& sa) { return format_address(sa.addr) + ":" + std::to_string(sa.port); }

}  // namespace fbguard::net
