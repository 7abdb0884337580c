#include "fbguard/net/halfopen.hpp"

namespace fbguard::net {

void HalfOpenTable::evict_expired(Tick now) {
  while (!order_.empty() && now - order_.front().first > timeout_) {
    auto [opened, key] = order_.front();
    order_.pop_front();
    auto it = entries_.find(key);
    if (it != entries_.end() && it->second == opened) {
      entries_.erase(it);
      ++evictions_;
    }
  }
}

SynResult HalfOpenTable::on_syn(const SocketAddress& remote, std::uint16_t local_port, Tick now) {
  evict_expired(now);
  const Key key{remote, local_port};
  if (entries_.count(key)) return SynResult::Duplicate;
  if (entries_.size() >= capacity_) return SynResult::Refused;
  entries_.emplace(key, now);
  order_.emplace_back(now, key);
  return SynResult::Accepted;
}

AckResult HalfOpenTable::on_ack(const SocketAddress& remote, std::uint16_t local_port, Tick now) {
  evict_expired(now);
  auto it = entries_.find(Key{remote, local_port});
  if (it == entries_.end()) return AckResult::Stray;
  entries_.erase(it);
  return AckResult::Established;
}

}  // namespace fbguard::net
