#pragma once

#include "fbguard/net/wire.hpp"

namespace fbguard::net {

/// Hook between device ingest and socket delivery. Sees only the wire view.
class PacketTap {
 public:
  virtual ~PacketTap() = default;
  /// false drops the packet before it reaches any socket.
  virtual bool admit(const WirePacket& packet, Tick now) = 0;
};

}  // namespace fbguard::net
