#include "fbguard/runtime/port.hpp"

#include <set>
#include <stdexcept>

namespace fbguard::fb {

std::string_view to_string(PortKind kind) {
  switch (kind) {
    case PortKind::EventIn: return "EVENT_IN";
    case PortKind::EventOut: return "EVENT_OUT";
    case PortKind::DataIn: return "DATA_IN";
    case PortKind::DataOut: return "DATA_OUT";
  }
  return "?";
}

PortSpec event_in(std::string name, std::vector<std::string> with) {
  return {std::move(name), PortKind::EventIn, std::nullopt, std::move(with)};
}

PortSpec event_out(std::string name, std::vector<std::string> with) {
  return {std::move(name), PortKind::EventOut, std::nullopt, std::move(with)};
}

PortSpec data_in(std::string name, DataKind kind) {
  return {std::move(name), PortKind::DataIn, kind, {}};
}

PortSpec data_out(std::string name, DataKind kind) {
  return {std::move(name), PortKind::DataOut, kind, {}};
}

PortRef PortRef::parse(std::string_view text) {
  const auto dot = text.rfind('.');
  if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) {
    throw std::invalid_argument("bad port reference '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
}

std::vector<std::string> check_ports(const std::vector<PortSpec>& ports) {
  std::vector<std::string> problems;
  std::set<std::pair<PortKind, std::string>> seen;
  for (const auto& p : ports) {
    if (p.name.empty()) problems.push_back("empty port name");
    if (!seen.emplace(p.kind, p.name).second) {
      problems.push_back("duplicate " + std::string(to_string(p.kind)) + " port " + p.name);
    }
    if (!is_event(p.kind)) {
      if (!p.data_kind) problems.push_back("data port " + p.name + " has no type");
      if (!p.with.empty()) problems.push_back("data port " + p.name + " has a WITH list");
      continue;
    }
    if (p.data_kind) problems.push_back("event port " + p.name + " has a data type");
    const PortKind want = p.kind == PortKind::EventIn ? PortKind::DataIn : PortKind::DataOut;
    for (const auto& w : p.with) {
      if (!seen.count({want, w})) {
        bool found = false;
        for (const auto& q : ports) found = found || (q.kind == want && q.name == w);
        if (!found) problems.push_back("event " + p.name + " WITH " + w + ": no such " +
                                       std::string(to_string(want)) + " port");
      }
    }
  }
  return problems;
}

}  // namespace fbguard::fb
