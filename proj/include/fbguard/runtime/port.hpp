#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/runtime/data_value.hpp"

namespace fbguard::fb {

enum class PortKind : std::uint8_t { EventIn, EventOut, DataIn, DataOut };

std::string_view to_string(PortKind kind);

constexpr bool is_event(PortKind k) { return k == PortKind::EventIn || k == PortKind::EventOut; }
constexpr bool is_input(PortKind k) { return k == PortKind::EventIn || k == PortKind::DataIn; }

struct PortSpec {
  std::string name;
  PortKind kind;
  std::optional<DataKind> data_kind;  // set for data ports only
  std::vector<std::string> with;      // data ports sampled/latched with an event

  bool operator==(const PortSpec&) const = default;
};

PortSpec event_in(std::string name, std::vector<std::string> with = {});
PortSpec event_out(std::string name, std::vector<std::string> with = {});
PortSpec data_in(std::string name, DataKind kind);
PortSpec data_out(std::string name, DataKind kind);

/// "<instance>.<port>". Instance ids may themselves contain dots (composite
/// interiors), so the port is whatever follows the last dot.
struct PortRef {
  std::string instance;
  std::string port;

  static PortRef parse(std::string_view text);
  std::string to_string() const { return instance + "." + port; }

  auto operator<=>(const PortRef&) const = default;
};

/// Problems with a port list: duplicate names per kind, WITH lists on data
/// ports, WITH entries that are not data ports of the same direction.
std::vector<std::string> check_ports(const std::vector<PortSpec>& ports);

}  // namespace fbguard::fb
