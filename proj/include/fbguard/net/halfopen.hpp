#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <utility>

#include "fbguard/net/wire.hpp"

namespace fbguard::net {

enum class SynResult : std::uint8_t { Accepted, Duplicate, Refused };
enum class AckResult : std::uint8_t { Established, Stray };

/// Bounded set of half-open TCP handshakes. Entries whose age exceeds the
/// timeout are evicted before every admission check.
class HalfOpenTable {
 public:
  HalfOpenTable(std::size_t capacity, Tick timeout) : capacity_(capacity), timeout_(timeout) {}

  SynResult on_syn(const SocketAddress& remote, std::uint16_t local_port, Tick now);
  AckResult on_ack(const SocketAddress& remote, std::uint16_t local_port, Tick now);

  void evict_expired(Tick now);

  std::size_t size() const { return entries_.size(); }
  std::size_t capacity() const { return capacity_; }
  std::uint64_t evictions() const { return evictions_; }

 private:
  using Key = std::pair<SocketAddress, std::uint16_t>;

  std::size_t capacity_;
  Tick timeout_;
  std::map<Key, Tick> entries_;
  std::deque<std::pair<Tick, Key>> order_;
  std::uint64_t evictions_ = 0;
};

}  // namespace fbguard::net
