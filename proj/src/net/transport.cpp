#include "fbguard/net/transport.hpp"

#include <stdexcept>

namespace fbguard::net {

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::DroppedCapacity: return "DROPPED_CAPACITY";
    case Outcome::DroppedUnresponsive: return "DROPPED_UNRESPONSIVE";
    case Outcome::Blocked: return "BLOCKED";
    case Outcome::Delivered: return "DELIVERED";
    case Outcome::Consumed: return "CONSUMED";
    case Outcome::NoSocket: return "NO_SOCKET";
    case Outcome::SynAccepted: return "SYN_ACCEPTED";
    case Outcome::SynDuplicate: return "SYN_DUPLICATE";
    case Outcome::SynRefused: return "SYN_REFUSED";
    case Outcome::Established: return "CONNECTION_ESTABLISHED";
    case Outcome::StrayAck: return "STRAY_ACK";
    case Outcome::StrayData: return "STRAY_DATA";
  }
  return "?";
}

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

Transport::Transport(fb::Scheduler& scheduler, std::uint64_t seed, Tick latency)
    : scheduler_(scheduler), seed_(seed), latency_(latency) {}

DeviceId Transport::add_device(std::string name, Address address, DeviceConfig config) {
  if (by_address_.count(address)) throw std::invalid_argument("address already in use: " + format_address(address));
  if (find_device(name)) throw std::invalid_argument("duplicate device " + name);
  const auto id = static_cast<DeviceId>(devices_.size());
  auto table = std::make_unique<HalfOpenTable>(config.halfopen_capacity, config.halfopen_timeout);
  devices_.push_back(Device{name, address, DeviceModel(name, config, mix(seed_ ^ mix(id))), std::move(table), nullptr, {}, {}, {}, {}});
  by_address_.emplace(address, id);
  return id;
}

std::optional<DeviceId> Transport::find_device(std::string_view name) const {
  for (std::size_t i = 0; i < devices_.size(); ++i) {
    if (devices_[i].name == name) return static_cast<DeviceId>(i);
  }
  return std::nullopt;
}

MulticastGroup& Transport::group(Address group_address) {
  auto& g = groups_[group_address];
  g.group = group_address;
  return g;
}

void Transport::join_group(Address group_address, const Endpoint& member) { group(group_address).join(member); }

void Transport::bind_udp(DeviceId device, std::uint16_t port, Handler handler) {
  devices_.at(device).udp.insert_or_assign(port, std::move(handler));
}

void Transport::listen_tcp(DeviceId device, std::uint16_t port, Handler handler) {
  devices_.at(device).tcp_listen.insert_or_assign(port, std::move(handler));
}

void Transport::bind_tcp_client(DeviceId device, std::uint16_t port, Handler handler) {
  devices_.at(device).tcp_client.insert_or_assign(port, std::move(handler));
}

bool Transport::established(DeviceId device, const SocketAddress& remote, std::uint16_t local_port) const {
  return devices_.at(device).established.count({remote, local_port}) > 0;
}

SendResult Transport::send(DeviceId from, WirePacket wire) {
  Device& sender = devices_.at(from);
  sender.model.refresh(scheduler_.now());
  if (sender.model.state() == DeviceState::Unresponsive) {
    ++sender.model.counters().sender_down;
    return SendResult::SenderDown;
  }
  auto packet = std::make_shared<Packet>(Packet{std::move(wire), from, next_seq_++});
  if (is_multicast(packet->wire.dst.addr)) {
    auto it = groups_.find(packet->wire.dst.addr);
    bool any = false;
    if (it != groups_.end()) {
      for (const auto& m : it->second.members) {
        if (m.device == from || m.address.port != packet->wire.dst.port) continue;
        schedule(from, m.device, packet);
        any = true;
      }
    }
    if (!any) ++unroutable_;
    return any ? SendResult::Sent : SendResult::Unroutable;
  }
  auto dst = by_address_.find(packet->wire.dst.addr);
  if (dst == by_address_.end()) {
    ++unroutable_;
    return SendResult::Unroutable;
  }
  schedule(from, dst->second, std::move(packet));
  return SendResult::Sent;
}

void Transport::schedule(DeviceId from, DeviceId to, std::shared_ptr<const Packet> packet) {
  const Tick at = packet->wire.send_time + latency_;
  scheduler_.post(at, [this, to, p = std::move(packet)] { deliver(to, p); }, 1 + from);
}

void Transport::deliver(DeviceId to, const std::shared_ptr<const Packet>& packet) {
  Device& dev = devices_.at(to);
  const Tick now = scheduler_.now();
  const Outcome outcome = process(dev, to, *packet, now);
  if (observer_) observer_(*packet, to, outcome);
}

Outcome Transport::process(Device& dev, DeviceId id, const Packet& packet, Tick now) {
  switch (dev.model.ingest(now)) {
    case IngestResult::DroppedCapacity: return Outcome::DroppedCapacity;
    case IngestResult::DroppedUnresponsive: return Outcome::DroppedUnresponsive;
    case IngestResult::Ingested: break;
  }
  const WirePacket& w = packet.wire;
  if (dev.tap && !dev.tap->admit(w, now)) {
    ++dev.model.counters().blocked;
    return Outcome::Blocked;
  }
  switch (w.proto) {
    case Protocol::IcmpEcho: return Outcome::Consumed;
    case Protocol::Udp: {
      auto it = dev.udp.find(w.dst.port);
      if (it == dev.udp.end()) return Outcome::NoSocket;
      it->second(w, now);
      return Outcome::Delivered;
    }
    case Protocol::TcpSyn: {
      if (!dev.tcp_listen.count(w.dst.port)) return Outcome::NoSocket;
      const SynResult result = dev.halfopen->on_syn(w.src, w.dst.port, now);
      if (result == SynResult::Refused) {
        ++dev.model.counters().syn_refused;
        return Outcome::SynRefused;
      }
      send(id, WirePacket{Protocol::TcpSynAck, {dev.address, w.dst.port}, w.src, {}, now});
      return result == SynResult::Accepted ? Outcome::SynAccepted : Outcome::SynDuplicate;
    }
    case Protocol::TcpAck: {
      if (!dev.tcp_listen.count(w.dst.port)) return Outcome::NoSocket;
      if (dev.halfopen->on_ack(w.src, w.dst.port, now) == AckResult::Stray) {
        ++dev.model.counters().stray_acks;
        return Outcome::StrayAck;
      }
      dev.established.insert({w.src, w.dst.port});
      return Outcome::Established;
    }
    case Protocol::TcpData: {
      auto listener = dev.tcp_listen.find(w.dst.port);
      if (listener != dev.tcp_listen.end()) {
        if (!dev.established.count({w.src, w.dst.port})) {
          ++dev.model.counters().stray_data;
          return Outcome::StrayData;
        }
        listener->second(w, now);
        return Outcome::Delivered;
      }
      auto client = dev.tcp_client.find(w.dst.port);
      if (client == dev.tcp_client.end()) return Outcome::NoSocket;
      client->second(w, now);
      return Outcome::Delivered;
    }
    case Protocol::TcpSynAck: {
      auto it = dev.tcp_client.find(w.dst.port);
      if (it == dev.tcp_client.end()) return Outcome::NoSocket;
      it->second(w, now);
      return Outcome::Delivered;
    }
  }
  return Outcome::NoSocket;
}

void Transport::finalize(Tick now) {
  for (auto& dev : devices_) dev.model.refresh(now);
}

}  // namespace fbguard::net
