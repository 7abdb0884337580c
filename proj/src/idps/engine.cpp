#include "fbguard/idps/engine.hpp"

namespace fbguard::idps {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Off: return "off";
    case Mode::Ids: return "ids";
    case Mode::Ips: return "ips";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "off") return Mode::Off;
  if (text == "ids") return Mode::Ids;
  if (text == "ips") return Mode::Ips;
  return std::nullopt;
}

bool RateTracker::observe(const Rule& rule, net::Address claimed_src, Tick now) {
  auto& window = windows_[{&rule, claimed_src}];
  window.push_back(now);
  while (!window.empty() && now - window.front() >= rule.rate->window) window.pop_front();
  while (window.size() > std::size_t{rule.rate->count} + 1) window.pop_front();
  return window.size() > rule.rate->count;
}

Engine::Engine(std::vector<Rule> rules, EngineConfig config) : rules_(std::move(rules)), config_(config) {}

bool Engine::saturated(Tick now) {
  if (config_.inspection_capacity <= 0) return false;
  while (!inspection_window_.empty() && now - inspection_window_.front() >= kMicrosPerSecond) {
    inspection_window_.pop_front();
  }
  return static_cast<double>(inspection_window_.size()) >= config_.inspection_capacity;
}

Verdict Engine::inspect(const net::WirePacket& packet, Tick now) {
  if (config_.mode == Mode::Off) return {};
  ++counters_.presented;
  if (saturated(now)) {
    ++counters_.dropped_by_engine;
    const bool drop = config_.fail_closed && config_.mode == Mode::Ips;
    return {drop ? VerdictKind::UninspectedBlock : VerdictKind::UninspectedPass, nullptr};
  }
  ++counters_.inspected;
  if (config_.inspection_capacity > 0) inspection_window_.push_back(now);
  for (const auto& rule : rules_) {
    if (!rule.matches_static(packet)) continue;
    if (rule.rate && !rates_.observe(rule, packet.src.addr, now)) continue;
    ++counters_.matched;
    alerts_.push_back({now, rule.id, rule.action, packet.proto, packet.src, packet.dst, packet.payload.size(), rule.msg});
    if (rule.action == Action::Block && config_.mode == Mode::Ips) {
      ++counters_.blocked;
      return {VerdictKind::Blocked, &rule};
    }
    return {VerdictKind::Pass, &rule};
  }
  return {};
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string alerts_csv(const std::vector<Alert>& alerts) {
  std::string out = "time_us,rule_id,proto,claimed_src,dst,msg\n";
  for (const auto& a : alerts) {
    out += std::to_string(a.time) + "," + a.rule_id + "," + std::string(net::family(a.proto)) + "," +
           net::to_string(a.claimed_src) + "," + net::to_string(a.dst) + "," + csv_field(a.msg) + "\n";
  }
  return out;
}

}  // namespace fbguard::idps
