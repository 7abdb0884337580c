#include "fbguard/runtime/network.hpp"

#include <algorithm>

namespace fbguard::fb {

std::string_view to_string(NetworkErrc code) {
  switch (code) {
    case NetworkErrc::DuplicateId: return "DuplicateId";
    case NetworkErrc::UnknownPort: return "UnknownPort";
    case NetworkErrc::KindMismatch: return "KindMismatch";
    case NetworkErrc::VariantMismatch: return "VariantMismatch";
    case NetworkErrc::DataInAlreadyConnected: return "DataInAlreadyConnected";
    case NetworkErrc::BadPortList: return "BadPortList";
  }
  return "?";
}

const DataValue& DispatchContext::in(std::string_view port) const {
  auto it = inputs_.find(port);
  if (it == inputs_.end()) throw BehaviorFault("read of undeclared data input " + std::string(port));
  return it->second;
}

void DispatchContext::emit(std::string event, std::vector<Assignment> data) {
  emissions_.push_back({std::move(event), std::move(data)});
}

void DispatchContext::latch(std::string port, DataValue value) {
  emissions_.push_back({{}, {{std::move(port), std::move(value)}}});
}

FBInstance::FBInstance(std::string id, std::vector<PortSpec> ports,
                       std::unique_ptr<Behavior> behavior)
    : id_(std::move(id)), ports_(std::move(ports)), behavior_(std::move(behavior)) {
  if (!behavior_) throw NetworkError(NetworkErrc::BadPortList, id_ + ": no behavior");
  auto problems = check_ports(ports_);
  if (!problems.empty()) throw NetworkError(NetworkErrc::BadPortList, id_ + ": " + problems.front());
  for (const auto& p : ports_) {
    if (p.kind == PortKind::DataIn) data_in_.emplace(p.name, DataValue::zero(*p.data_kind));
    if (p.kind == PortKind::DataOut) data_out_.emplace(p.name, DataValue::zero(*p.data_kind));
  }
}

const PortSpec* FBInstance::find_port(std::string_view name) const {
  for (const auto& p : ports_) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const DataValue& FBInstance::data_in(std::string_view port) const {
  auto it = data_in_.find(port);
  if (it == data_in_.end()) throw NetworkError(NetworkErrc::UnknownPort, id_ + "." + std::string(port));
  return it->second;
}

const DataValue& FBInstance::data_out(std::string_view port) const {
  auto it = data_out_.find(port);
  if (it == data_out_.end()) throw NetworkError(NetworkErrc::UnknownPort, id_ + "." + std::string(port));
  return it->second;
}

FBNetwork& FBNetwork::add_instance(FBInstance instance) {
  std::string id = instance.id();
  if (instances_.count(id)) throw NetworkError(NetworkErrc::DuplicateId, "duplicate instance id " + id);
  instances_.emplace(std::move(id), std::move(instance));
  return *this;
}

void FBNetwork::remove_instance(std::string_view id) {
  auto it = instances_.find(id);
  if (it != instances_.end()) instances_.erase(it);
}

FBInstance* FBNetwork::find(std::string_view id) {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : &it->second;
}

const FBInstance* FBNetwork::find(std::string_view id) const {
  auto it = instances_.find(id);
  return it == instances_.end() ? nullptr : &it->second;
}

std::vector<std::string> FBNetwork::instance_ids() const {
  std::vector<std::string> ids;
  ids.reserve(instances_.size());
  for (const auto& [id, _] : instances_) ids.push_back(id);
  return ids;
}

void FBNetwork::add_alias(std::string alias, PortRef target) {
  aliases_.insert_or_assign(std::move(alias), std::move(target));
}

PortRef FBNetwork::resolve(std::string_view ref) const {
  auto it = aliases_.find(ref);
  if (it != aliases_.end()) return it->second;
  return PortRef::parse(ref);
}

const PortSpec& FBNetwork::require_port(const PortRef& ref) const {
  const FBInstance* inst = find(ref.instance);
  const PortSpec* spec = inst ? inst->find_port(ref.port) : nullptr;
  if (!spec) throw NetworkError(NetworkErrc::UnknownPort, "unknown port " + ref.to_string());
  return *spec;
}

FBNetwork& FBNetwork::connect(std::string_view src_text, std::string_view dst_text) {
  const PortRef src = resolve(src_text);
  const PortRef dst = resolve(dst_text);
  const PortSpec& s = require_port(src);
  const PortSpec& d = require_port(dst);
  const bool event_arc = s.kind == PortKind::EventOut && d.kind == PortKind::EventIn;
  const bool data_arc = s.kind == PortKind::DataOut && d.kind == PortKind::DataIn;
  if (!event_arc && !data_arc) {
    throw NetworkError(NetworkErrc::KindMismatch, src.to_string() + " (" + std::string(to_string(s.kind)) +
                                                      ") -> " + dst.to_string() + " (" +
                                                      std::string(to_string(d.kind)) + ")");
  }
  if (event_arc) {
    event_connections_.push_back({src, dst});
    return *this;
  }
  if (s.data_kind != d.data_kind) {
    throw NetworkError(NetworkErrc::VariantMismatch, src.to_string() + " (" +
                                                         std::string(to_string(*s.data_kind)) + ") -> " +
                                                         dst.to_string() + " (" +
                                                         std::string(to_string(*d.data_kind)) + ")");
  }
  if (data_source_.count(dst)) {
    throw NetworkError(NetworkErrc::DataInAlreadyConnected, dst.to_string() + " already has a source");
  }
  data_connections_.push_back({src, dst});
  data_source_.emplace(dst, src);
  return *this;
}

void FBNetwork::set_parameter(std::string_view data_in_ref, DataValue value) {
  const PortRef ref = resolve(data_in_ref);
  const PortSpec& spec = require_port(ref);
  if (spec.kind != PortKind::DataIn) {
    throw NetworkError(NetworkErrc::KindMismatch, ref.to_string() + " is not a data input");
  }
  if (*spec.data_kind != value.kind()) {
    throw NetworkError(NetworkErrc::VariantMismatch, ref.to_string() + " expects " +
                                                         std::string(to_string(*spec.data_kind)));
  }
  find(ref.instance)->data_in_.insert_or_assign(ref.port, std::move(value));
}

std::vector<Diagnostic> FBNetwork::validate() const {
  std::vector<Diagnostic> out;
  for (const auto& [id, inst] : instances_) {
    for (auto& problem : check_ports(inst.ports())) out.push_back({NetworkErrc::BadPortList, id + ": " + problem});
  }
  auto lookup = [&](const PortRef& ref) -> const PortSpec* {
    const FBInstance* inst = find(ref.instance);
    const PortSpec* spec = inst ? inst->find_port(ref.port) : nullptr;
    if (!spec) out.push_back({NetworkErrc::UnknownPort, "unknown port " + ref.to_string()});
    return spec;
  };
  for (const auto& c : event_connections_) {
    const PortSpec* s = lookup(c.src);
    const PortSpec* d = lookup(c.dst);
    if (s && d && (s->kind != PortKind::EventOut || d->kind != PortKind::EventIn)) {
      out.push_back({NetworkErrc::KindMismatch, c.src.to_string() + " -> " + c.dst.to_string()});
    }
  }
  std::map<PortRef, int> writers;
  for (const auto& c : data_connections_) {
    const PortSpec* s = lookup(c.src);
    const PortSpec* d = lookup(c.dst);
    if (++writers[c.dst] == 2) {
      out.push_back({NetworkErrc::DataInAlreadyConnected, c.dst.to_string() + " has more than one source"});
    }
    if (!s || !d) continue;
    if (s->kind != PortKind::DataOut || d->kind != PortKind::DataIn) {
      out.push_back({NetworkErrc::KindMismatch, c.src.to_string() + " -> " + c.dst.to_string()});
    } else if (s->data_kind != d->data_kind) {
      out.push_back({NetworkErrc::VariantMismatch, c.src.to_string() + " -> " + c.dst.to_string()});
    }
  }
  return out;
}

std::vector<PortRef> FBNetwork::event_targets(const PortRef& event_out) const {
  std::vector<PortRef> out;
  for (const auto& c : event_connections_) {
    if (c.src == event_out) out.push_back(c.dst);
  }
  return out;
}

DispatchOutcome FBNetwork::dispatch(const PortRef& target, Tick now) {
  const PortRef ref = resolve(target.to_string());
  const PortSpec& spec = require_port(ref);
  if (spec.kind != PortKind::EventIn) {
    throw NetworkError(NetworkErrc::KindMismatch, ref.to_string() + " is not an event input");
  }
  FBInstance& inst = *find(ref.instance);
  DataMap sampled = inst.data_in_;
  for (const auto& w : spec.with) {
    auto src = data_source_.find(PortRef{ref.instance, w});
    if (src == data_source_.end()) continue;
    const FBInstance* from = find(src->second.instance);
    if (!from) continue;
    sampled.insert_or_assign(w, from->data_out(src->second.port));
  }
  auto trial = inst.behavior_->clone();
  DispatchContext ctx(now, sampled);
  trial->on_event(ref.port, ctx);
  return commit(inst, std::move(trial), std::move(sampled), ctx);
}

DispatchOutcome FBNetwork::dispatch_service(std::string_view instance, std::string_view label,
                                            const ServiceInput& input, Tick now) {
  FBInstance* inst = find(instance);
  if (!inst) throw NetworkError(NetworkErrc::UnknownPort, "unknown instance " + std::string(instance));
  DataMap sampled = inst->data_in_;
  auto trial = inst->behavior_->clone();
  DispatchContext ctx(now, sampled);
  trial->on_service(label, input, ctx);
  return commit(*inst, std::move(trial), std::move(sampled), ctx);
}

DispatchOutcome FBNetwork::commit(FBInstance& inst, std::unique_ptr<Behavior> trial, DataMap sampled,
                                  DispatchContext& ctx) {
  for (const auto& e : ctx.emissions()) {
    if (!e.event.empty()) {
      const PortSpec* p = inst.find_port(e.event);
      if (!p || p->kind != PortKind::EventOut) {
        throw BehaviorFault(inst.id_ + " emitted undeclared event " + e.event);
      }
    }
    for (const auto& a : e.data) {
      const PortSpec* p = inst.find_port(a.port);
      if (!p || p->kind != PortKind::DataOut) {
        throw BehaviorFault(inst.id_ + " wrote undeclared data output " + a.port);
      }
      if (*p->data_kind != a.value.kind()) {
        throw BehaviorFault(inst.id_ + " wrote " + std::string(to_string(a.value.kind())) + " to " + a.port);
      }
    }
  }
  inst.data_in_ = std::move(sampled);
  inst.behavior_ = std::move(trial);
  DispatchOutcome out;
  for (auto& e : ctx.emissions()) {
    for (auto& a : e.data) inst.data_out_.insert_or_assign(a.port, a.value);
    if (!e.event.empty()) out.emissions.push_back(std::move(e));
  }
  out.deferred = std::move(ctx.deferred());
  return out;
}

std::vector<FBInstance> FBNetwork::take_instances() {
  std::vector<FBInstance> out;
  out.reserve(instances_.size());
  for (auto& [_, inst] : instances_) out.push_back(std::move(inst));
  instances_.clear();
  return out;
}

}  // namespace fbguard::fb
