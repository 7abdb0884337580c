#include "fbguard/runtime/composite.hpp"

namespace fbguard::fb {

std::vector<std::string> check_bindings(const CompositeFB& composite) {
  std::vector<std::string> problems = check_ports(composite.interface);
  for (const auto& port : composite.interface) {
    auto it = composite.bindings.find(port.name);
    if (it == composite.bindings.end()) {
      problems.push_back("interface port " + port.name + " is unbound");
      continue;
    }
    const FBInstance* inner = composite.interior.find(it->second.instance);
    const PortSpec* target = inner ? inner->find_port(it->second.port) : nullptr;
    if (!target) {
      problems.push_back("interface port " + port.name + " bound to unknown " + it->second.to_string());
    } else if (target->kind != port.kind || target->data_kind != port.data_kind) {
      problems.push_back("interface port " + port.name + " does not match " + it->second.to_string());
    }
  }
  for (const auto& [name, _] : composite.bindings) {
    bool declared = false;
    for (const auto& port : composite.interface) declared = declared || port.name == name;
    if (!declared) problems.push_back("binding for undeclared interface port " + name);
  }
  return problems;
}

void instantiate(FBNetwork& parent, const std::string& id, CompositeFB composite) {
  auto problems = check_bindings(composite);
  if (!problems.empty()) throw NetworkError(NetworkErrc::BadPortList, id + ": " + problems.front());
  auto prefixed = [&id](const PortRef& ref) { return PortRef{id + "." + ref.instance, ref.port}; };

  const auto event_arcs = composite.interior.event_connections();
  const auto data_arcs = composite.interior.data_connections();
  const auto inner_aliases = composite.interior.aliases();
  for (auto& inst : composite.interior.take_instances()) {
    inst.set_id(id + "." + inst.id());
    parent.add_instance(std::move(inst));
  }
  for (const auto& c : event_arcs) parent.connect(prefixed(c.src).to_string(), prefixed(c.dst).to_string());
  for (const auto& c : data_arcs) parent.connect(prefixed(c.src).to_string(), prefixed(c.dst).to_string());
  for (const auto& [alias, target] : inner_aliases) parent.add_alias(id + "." + alias, prefixed(target));
  for (const auto& [port, target] : composite.bindings) parent.add_alias(id + "." + port, prefixed(target));
}

}  // namespace fbguard::fb
