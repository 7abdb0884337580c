#pragma once

#include <cstdint>

#include "fbguard/net/wire.hpp"

namespace fbguard::net {

using DeviceId = std::uint32_t;

/// A frame in flight. true_origin is ground truth for metrics only; receivers
/// and the rule engine are handed `wire`.
struct Packet {
  WirePacket wire;
  DeviceId true_origin = 0;
  std::uint64_t seq = 0;
};

}  // namespace fbguard::net
