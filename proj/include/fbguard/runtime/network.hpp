#pragma once

#include <functional>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/runtime/behavior.hpp"
#include "fbguard/runtime/port.hpp"

namespace fbguard::fb {

enum class NetworkErrc : std::uint8_t {
  DuplicateId,
  UnknownPort,
  KindMismatch,
  VariantMismatch,
  DataInAlreadyConnected,
  BadPortList,
};

std::string_view to_string(NetworkErrc code);

class NetworkError : public std::runtime_error {
 public:
  NetworkError(NetworkErrc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  NetworkErrc code() const { return code_; }

 private:
  NetworkErrc code_;
};

/// A behavior emitted an event or data port its instance does not declare.
class BehaviorFault : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Diagnostic {
  NetworkErrc code;
  std::string message;
};

class FBInstance {
 public:
  FBInstance(std::string id, std::vector<PortSpec> ports, std::unique_ptr<Behavior> behavior);

  FBInstance(FBInstance&&) noexcept = default;
  FBInstance& operator=(FBInstance&&) noexcept = default;

  const std::string& id() const { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }
  const std::vector<PortSpec>& ports() const { return ports_; }
  const PortSpec* find_port(std::string_view name) const;

  Behavior& behavior() { return *behavior_; }
  const Behavior& behavior() const { return *behavior_; }

  template <class B>
  const B* behavior_as() const {
    return dynamic_cast<const B*>(behavior_.get());
  }

  const DataValue& data_in(std::string_view port) const;
  const DataValue& data_out(std::string_view port) const;

 private:
  friend class FBNetwork;

  std::string id_;
  std::vector<PortSpec> ports_;
  std::unique_ptr<Behavior> behavior_;
  DataMap data_in_;
  DataMap data_out_;
};

struct Connection {
  PortRef src;
  PortRef dst;
};

struct DispatchOutcome {
  std::vector<Emission> emissions;
  std::vector<std::function<void()>> deferred;
};

/// Application graph: instances plus event and data connections. Event
/// fan-out is delivered in connection declaration order; a data input has at
/// most one writer and holds the last value sampled from it.
class FBNetwork {
 public:
  FBNetwork() = default;
  FBNetwork(FBNetwork&&) noexcept = default;
  FBNetwork& operator=(FBNetwork&&) noexcept = default;

  FBNetwork& add_instance(FBInstance instance);
  /// Removes the instance only; connections that referenced it are kept and
  /// reported by validate().
  void remove_instance(std::string_view id);

  FBNetwork& connect(std::string_view src, std::string_view dst);

  /// Constant value on an unconnected data input.
  void set_parameter(std::string_view data_in_ref, DataValue value);

  std::vector<Diagnostic> validate() const;

  /// Maps an interface port of an instantiated composite to its interior port.
  void add_alias(std::string alias, PortRef target);
  PortRef resolve(std::string_view ref) const;
  const std::map<std::string, PortRef, std::less<>>& aliases() const { return aliases_; }

  FBInstance* find(std::string_view id);
  const FBInstance* find(std::string_view id) const;
  std::size_t size() const { return instances_.size(); }
  std::vector<std::string> instance_ids() const;

  const std::vector<Connection>& event_connections() const { return event_connections_; }
  const std::vector<Connection>& data_connections() const { return data_connections_; }

  /// Event inputs wired to an event output, in declaration order.
  std::vector<PortRef> event_targets(const PortRef& event_out) const;

  /// Samples the event's WITH inputs, runs the behavior once and latches its
  /// data outputs. On BehaviorFault nothing changes.
  DispatchOutcome dispatch(const PortRef& target, Tick now);
  DispatchOutcome dispatch_service(std::string_view instance, std::string_view label,
                                   const ServiceInput& input, Tick now);

  /// Moves every instance out (used when flattening a composite).
  std::vector<FBInstance> take_instances();

 private:
  const PortSpec& require_port(const PortRef& ref) const;
  DispatchOutcome commit(FBInstance& inst, std::unique_ptr<Behavior> trial, DataMap sampled,
                         DispatchContext& ctx);

  std::map<std::string, FBInstance, std::less<>> instances_;
  std::vector<Connection> event_connections_;
  std::vector<Connection> data_connections_;
  std::map<PortRef, PortRef> data_source_;
  std::map<std::string, PortRef, std::less<>> aliases_;
};

}  // namespace fbguard::fb
