#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbguard/csifb/codec.hpp"
#include "fbguard/net/transport.hpp"
#include "fbguard/runtime/network.hpp"
#include "fbguard/runtime/runtime.hpp"

namespace fbguard::csifb {

using fb::DataKind;

inline constexpr std::uint16_t kDefaultPort = 61499;
inline constexpr const char* kDefaultGroup = "239.192.0.2:61499";

/// Where a communication block lives: its device on the transport and the
/// runtime that executes it.
struct Platform {
  net::Transport* transport = nullptr;
  net::DeviceId device = 0;
  fb::Runtime* runtime = nullptr;
};

/// PUBLISH_n: INIT WITH QI,ID / REQ WITH SD_1..SD_n -> INITO, CNF WITH QO.
class PublisherBehavior final : public fb::ClonableBehavior<PublisherBehavior> {
 public:
  PublisherBehavior(Platform platform, std::size_t arity, std::uint16_t src_port)
      : platform_(platform), arity_(arity), src_port_(src_port) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;

  bool initialized() const { return group_.has_value(); }
  std::uint64_t sent() const { return sent_; }

 private:
  Platform platform_;
  std::size_t arity_;
  std::uint16_t src_port_;
  std::optional<net::SocketAddress> group_;
  std::optional<Tick> last_send_;
  std::uint64_t sent_ = 0;
};

/// SUBSCRIBE_n: INIT WITH QI,ID -> INITO; each accepted datagram latches
/// RD_1..RD_n and fires IND. Malformed datagrams are counted, never answered.
class SubscriberBehavior final : public fb::ClonableBehavior<SubscriberBehavior> {
 public:
  SubscriberBehavior(Platform platform, std::string instance, std::vector<DataKind> kinds)
      : platform_(platform), instance_(std::move(instance)), kinds_(std::move(kinds)) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  void on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) override;

  bool initialized() const { return bound_.has_value(); }
  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t malformed() const { return malformed_; }

 private:
  Platform platform_;
  std::string instance_;
  std::vector<DataKind> kinds_;
  std::optional<net::SocketAddress> bound_;
  std::uint64_t accepted_ = 0;
  std::uint64_t malformed_ = 0;
};

enum class ClientState : std::uint8_t { Idle, Connecting, Established };

/// CLIENT_n_0: connects on INIT (SYN retried every retry period), then sends
/// one TCP_DATA segment per REQ. A REQ while connecting is buffered (latest
/// wins) and flushed on establishment.
class ClientBehavior final : public fb::ClonableBehavior<ClientBehavior> {
 public:
  ClientBehavior(Platform platform, std::string instance, std::size_t arity, std::uint16_t local_port, Tick retry)
      : platform_(platform), instance_(std::move(instance)), arity_(arity), local_port_(local_port), retry_(retry) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  void on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) override;

  ClientState state() const { return state_; }
  const std::vector<Tick>& attempts() const { return attempts_; }
  std::optional<Tick> established_at() const { return established_at_; }

 private:
  void send(fb::DispatchContext& ctx, net::Protocol proto, Bytes payload);
  void send_syn(fb::DispatchContext& ctx);

  Platform platform_;
  std::string instance_;
  std::size_t arity_;
  std::uint16_t local_port_;
  Tick retry_;
  ClientState state_ = ClientState::Idle;
  net::SocketAddress server_;
  std::optional<Bytes> pending_;
  std::optional<Tick> last_send_;
  std::vector<Tick> attempts_;
  std::optional<Tick> established_at_;
};

/// SERVER_0_n: listens on INIT; fires IND for data on established connections.
class ServerBehavior final : public fb::ClonableBehavior<ServerBehavior> {
 public:
  ServerBehavior(Platform platform, std::string instance, std::vector<DataKind> kinds)
      : platform_(platform), instance_(std::move(instance)), kinds_(std::move(kinds)) {}

  void on_event(std::string_view event, fb::DispatchContext& ctx) override;
  void on_service(std::string_view label, const fb::ServiceInput& input, fb::DispatchContext& ctx) override;

  std::uint64_t accepted() const { return accepted_; }
  std::uint64_t malformed() const { return malformed_; }

 private:
  Platform platform_;
  std::string instance_;
  std::vector<DataKind> kinds_;
  bool listening_ = false;
  std::uint64_t accepted_ = 0;
  std::uint64_t malformed_ = 0;
};

fb::FBInstance make_publisher(std::string id, const std::vector<DataKind>& sd, Platform platform,
                              std::uint16_t src_port);
fb::FBInstance make_subscriber(std::string id, const std::vector<DataKind>& rd, Platform platform);
fb::FBInstance make_client(std::string id, const std::vector<DataKind>& sd, Platform platform,
                           std::uint16_t local_port, Tick retry);
fb::FBInstance make_server(std::string id, const std::vector<DataKind>& rd, Platform platform);

}  // namespace fbguard::csifb
