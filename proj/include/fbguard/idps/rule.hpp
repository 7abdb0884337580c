#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/net/wire.hpp"

namespace fbguard::idps {

enum class Action : std::uint8_t { Alert, Block };
enum class ProtoMatch : std::uint8_t { Any, Udp, Tcp, Icmp };

std::string_view to_string(Action action);
std::string_view to_string(ProtoMatch proto);

struct AddrMatch {
  net::Address addr = 0;
  int prefix = 0;  // 0 matches everything

  bool any() const { return prefix == 0; }
  bool matches(net::Address a) const;
  std::string to_string() const;
};

struct PortMatch {
  std::uint16_t lo = 0;
  std::uint16_t hi = 65535;

  bool any() const { return lo == 0 && hi == 65535; }
  bool matches(std::uint16_t p) const { return lo <= p && p <= hi; }
  std::string to_string() const;
};

struct RateClause {
  std::uint32_t count;  // N
  Tick window;          // W
};

struct Rule {
  std::string id;
  int line = 0;
  Action action = Action::Alert;
  ProtoMatch proto = ProtoMatch::Any;
  AddrMatch src;
  PortMatch src_port;
  AddrMatch dst;
  PortMatch dst_port;
  std::optional<std::vector<std::uint8_t>> payload;
  std::optional<RateClause> rate;
  std::vector<AddrMatch> srcallow;
  std::string msg;

  /// Every matcher except the rate clause.
  bool matches_static(const net::WirePacket& packet) const;
  bool has_matchers() const;
  std::string to_string() const;
};

class RuleSyntaxError : public std::runtime_error {
 public:
  RuleSyntaxError(int line, const std::string& reason)
      : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line), reason_(reason) {}
  int line() const { return line_; }
  const std::string& reason() const { return reason_; }

 private:
  int line_;
  std::string reason_;
};

/// One rule per line; `#` starts a comment outside quotes. Throws
/// RuleSyntaxError for the first bad line.
std::vector<Rule> parse_rules(std::string_view text);

Rule parse_rule(std::string_view line, int line_no);

}  // namespace fbguard::idps
