#pragma once

#include <deque>
#include <functional>
#include <optional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/net/device.hpp"
#include "fbguard/net/halfopen.hpp"
#include "fbguard/net/packet.hpp"
#include "fbguard/net/tap.hpp"
#include "fbguard/runtime/scheduler.hpp"

namespace fbguard::net {

struct Endpoint {
  DeviceId device = 0;
  SocketAddress address;

  auto operator<=>(const Endpoint&) const = default;
};

struct MulticastGroup {
  Address group = 0;
  std::set<Endpoint> members;

  /// Open join: anyone may join; joining twice is a no-op.
  void join(const Endpoint& member) { members.insert(member); }
};

enum class SendResult : std::uint8_t { Sent, SenderDown, Unroutable };

/// Fate of one delivery at the receiving device.
enum class Outcome : std::uint8_t {
  DroppedCapacity,
  DroppedUnresponsive,
  Blocked,
  Delivered,
  Consumed,
  NoSocket,
  SynAccepted,
  SynDuplicate,
  SynRefused,
  Established,
  StrayAck,
  StrayData,
};

std::string_view to_string(Outcome outcome);

/// Simulated network: devices, multicast groups, sockets, fixed latency.
/// Deliveries are posted on the shared scheduler at send_time + latency in
/// lane 1 + sender id, so simultaneous arrivals are ordered by source and
/// then by send order.
class Transport {
 public:
  using Handler = std::function<void(const WirePacket&, Tick)>;
  using Observer = std::function<void(const Packet&, DeviceId, Outcome)>;

  Transport(fb::Scheduler& scheduler, std::uint64_t seed, Tick latency = 500);

  DeviceId add_device(std::string name, Address address, DeviceConfig config = {});
  std::size_t device_count() const { return devices_.size(); }
  DeviceModel& device(DeviceId id) { return devices_.at(id).model; }
  const DeviceModel& device(DeviceId id) const { return devices_.at(id).model; }
  Address address_of(DeviceId id) const { return devices_.at(id).address; }
  std::optional<DeviceId> find_device(std::string_view name) const;

  MulticastGroup& group(Address group_address);
  void join_group(Address group_address, const Endpoint& member);

  /// Unicast or group-addressed datagrams to `port` on `device`.
  void bind_udp(DeviceId device, std::uint16_t port, Handler handler);
  /// TCP_DATA on established connections to `port`.
  void listen_tcp(DeviceId device, std::uint16_t port, Handler handler);
  /// SYNACK (and any other TCP segment) arriving at a client port.
  void bind_tcp_client(DeviceId device, std::uint16_t port, Handler handler);

  void set_tap(DeviceId device, PacketTap* tap) { devices_.at(device).tap = tap; }
  void set_observer(Observer observer) { observer_ = std::move(observer); }

  /// true_origin is always `from`; the header may claim anything.
  SendResult send(DeviceId from, WirePacket wire);

  Tick latency() const { return latency_; }
  fb::Scheduler& scheduler() { return scheduler_; }

  const HalfOpenTable& halfopen(DeviceId device) const { return *devices_.at(device).halfopen; }
  bool established(DeviceId device, const SocketAddress& remote, std::uint16_t local_port) const;
  std::uint64_t unroutable() const { return unroutable_; }

  /// Settles lazy device state (recovery) at `now`.
  void finalize(Tick now);

 private:
  struct Device {
    std::string name;
    Address address;
    DeviceModel model;
    std::unique_ptr<HalfOpenTable> halfopen;
    PacketTap* tap = nullptr;
    std::map<std::uint16_t, Handler> udp;
    std::map<std::uint16_t, Handler> tcp_listen;
    std::map<std::uint16_t, Handler> tcp_client;
    std::set<std::pair<SocketAddress, std::uint16_t>> established;
  };

  void deliver(DeviceId to, const std::shared_ptr<const Packet>& packet);
  Outcome process(Device& dev, DeviceId id, const Packet& packet, Tick now);
  void schedule(DeviceId from, DeviceId to, std::shared_ptr<const Packet> packet);

  fb::Scheduler& scheduler_;
  std::uint64_t seed_;
  Tick latency_;
  std::deque<Device> devices_;
  std::map<Address, DeviceId> by_address_;
  std::map<Address, MulticastGroup> groups_;
  Observer observer_;
  std::uint64_t next_seq_ = 0;
  std::uint64_t unroutable_ = 0;
};

}  // namespace fbguard::net
