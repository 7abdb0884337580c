#include "fbguard/experiment/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "fbguard/idps/rule.hpp"
#include "fbguard/idps/service.hpp"

namespace fbguard::experiment {

namespace {

namespace fs = std::filesystem;
using scenario::ScenarioConfig;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Bad {
  std::string reason;
};

std::uint64_t to_u64(std::string_view v) {
  if (!v.empty() && v.front() == '-') throw Bad{"must be positive"};
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) throw Bad{"expected an unsigned integer"};
  return out;
}

// Also accepts integral exponent forms such as 1e3.
std::uint64_t to_positive(std::string_view v) {
  if (!v.empty() && v.front() == '-') throw Bad{"must be positive"};
  std::uint64_t n = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty()) {
    double d = 0;
    auto [q, ec2] = std::from_chars(v.data(), v.data() + v.size(), d);
    if (ec2 != std::errc{} || q != v.data() + v.size() || v.empty() || d != std::floor(d) || d > 1e15)
      throw Bad{"expected an unsigned integer"};
    n = static_cast<std::uint64_t>(d);
  }
  if (n == 0) throw Bad{"must be positive"};
  return n;
}

double to_double(std::string_view v) {
  std::string s(v);
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(s, &used);
  } catch (const std::exception&) {
    throw Bad{"expected a number"};
  }
  if (used != s.size()) throw Bad{"expected a number"};
  return out;
}

double to_positive_double(std::string_view v) {
  const double d = to_double(v);
  if (!(d > 0)) throw Bad{"must be positive"};
  return d;
}

Tick to_duration(std::string_view v) {
  if (!v.empty() && v.front() == '-') throw Bad{"must be positive"};
  try {
    return parse_seconds(v);
  } catch (const std::invalid_argument& e) {
    throw Bad{e.what()};
  }
}

Tick to_positive_duration(std::string_view v) {
  const Tick t = to_duration(v);
  if (t == 0) throw Bad{"must be positive"};
  return t;
}

bool to_bool(std::string_view v) {
  if (v == "true") return true;
  if (v == "false") return false;
  throw Bad{"expected true or false"};
}

net::SocketAddress to_socket(std::string_view v) {
  auto sa = net::parse_socket_address(v);
  if (!sa) throw Bad{"expected a.b.c.d:port"};
  return *sa;
}

std::vector<std::uint8_t> to_hex(std::string_view v) {
  std::string digits;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (std::isspace(static_cast<unsigned char>(v[i]))) continue;
    if (v[i] == '0' && i + 1 < v.size() && (v[i + 1] == 'x' || v[i + 1] == 'X')) {
      ++i;
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(v[i]))) throw Bad{"expected hex bytes"};
    digits.push_back(v[i]);
  }
  if (digits.size() % 2) throw Bad{"odd number of hex digits"};
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < digits.size(); i += 2)
    out.push_back(static_cast<std::uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  return out;
}

std::vector<Tick> to_times(std::string_view v) {
  std::vector<Tick> out;
  while (!v.empty()) {
    const auto comma = v.find(',');
    out.push_back(to_duration(trim(v.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    v.remove_prefix(comma + 1);
  }
  if (out.empty()) throw Bad{"expected a list of times"};
  return out;
}

using Setter = std::function<void(std::string_view)>;

void device_keys(std::map<std::string, Setter, std::less<>>& keys, const std::string& prefix,
                 net::DeviceConfig& d) {
  keys[prefix + ".capacity"] = [&d](auto v) { d.capacity = to_positive_double(v); };
  keys[prefix + ".critical_rate"] = [&d](auto v) { d.critical_rate = to_positive_double(v); };
  keys[prefix + ".halfopen_capacity"] = [&d](auto v) { d.halfopen_capacity = to_positive(v); };
  keys[prefix + ".halfopen_timeout"] = [&d](auto v) { d.halfopen_timeout = to_positive_duration(v); };
}

std::map<std::string, Setter, std::less<>> global_keys(ScenarioConfig& c) {
  std::map<std::string, Setter, std::less<>> k;
  k["name"] = [&c](auto v) { c.name = std::string(v); };
  k["seed"] = [&c](auto v) { c.seed = to_u64(v); };
  k["duration"] = [&c](auto v) { c.duration = to_positive_duration(v); };
  k["latency"] = [&c](auto v) { c.latency = to_positive_duration(v); };
  k["trace"] = [&c](auto v) { c.trace = to_bool(v); };
  k["event_budget"] = [&c](auto v) { c.event_budget = to_positive(v); };
  k["policy"] = [&c](auto v) {
    auto p = scenario::parse_policy(v);
    if (!p) throw Bad{"expected GATE_AND_HOLD, LOG_ONLY or SHUTDOWN"};
    c.policy = *p;
  };
  device_keys(k, "plc1", c.plc1);
  device_keys(k, "plc2", c.plc2);
  k["idps.enabled"] = [&c](auto v) { c.idps.enabled = to_bool(v); };
  k["idps.mode"] = [&c](auto v) {
    auto m = idps::parse_mode(v);
    if (!m) throw Bad{"expected off, ids or ips"};
    c.idps.mode = *m;
  };
  k["idps.ruleset"] = [&c](auto v) { c.idps.ruleset = std::string(v); };
  k["idps.inspection_capacity"] = [&c](auto v) {
    const double d = to_double(v);
    if (d < 0) throw Bad{"must not be negative"};
    c.idps.inspection_capacity = d;
  };
  k["idps.poll"] = [&c](auto v) { c.idps.poll = to_positive_duration(v); };
  k["idps.hold"] = [&c](auto v) { c.idps.hold = to_positive_duration(v); };
  k["idps.fail_closed"] = [&c](auto v) { c.idps.fail_closed = to_bool(v); };
  k["plant.tick"] = [&c](auto v) { c.plant.tick = to_positive_duration(v); };
  k["plant.rate"] = [&c](auto v) {
    const double r = to_positive_double(v);
    if (r > 1) throw Bad{"must not exceed 1"};
    c.plant.rate = r;
  };
  k["plant.first_box"] = [&c](auto v) { c.plant.first_box = to_duration(v); };
  k["plant.box_period"] = [&c](auto v) { c.plant.box_period = to_positive_duration(v); };
  k["plant.stall_grace"] = [&c](auto v) { c.plant.stall_grace = to_duration(v); };
  k["control.link"] = [&c](auto v) {
    auto l = scenario::parse_link(v);
    if (!l) throw Bad{"expected pubsub or clientserver"};
    c.control.link = *l;
  };
  k["control.sensor_refresh"] = [&c](auto v) { c.control.sensor_refresh = to_positive_duration(v); };
  k["control.heartbeat"] = [&c](auto v) { c.control.heartbeat = to_bool(v); };
  k["control.heartbeat_period"] = [&c](auto v) { c.control.heartbeat_period = to_positive_duration(v); };
  k["control.client_init_at"] = [&c](auto v) { c.control.client_init_at = to_duration(v); };
  k["control.client_retry"] = [&c](auto v) { c.control.client_retry = to_positive_duration(v); };
  return k;
}

std::map<std::string, Setter, std::less<>> attack_keys(attack::AttackSpec& a) {
  std::map<std::string, Setter, std::less<>> k;
  k["name"] = [&a](auto v) { a.name = std::string(v); };
  k["kind"] = [&a](auto v) {
    auto kind = attack::parse_kind(v);
    if (!kind) throw Bad{"expected SPOOF_PUBLISH, UDP_FLOOD, SYN_FLOOD or ICMP_FLOOD"};
    a.kind = *kind;
  };
  k["claimed_src"] = [&a](auto v) { a.claimed_src = to_socket(v); };
  k["target"] = [&a](auto v) { a.target = to_socket(v); };
  k["payload"] = [&a](auto v) { a.payload = to_hex(v); };
  k["rate"] = [&a](auto v) { a.rate = to_positive(v); };
  k["start"] = [&a](auto v) { a.start = to_duration(v); };
  k["stop"] = [&a](auto v) { a.stop = to_duration(v); };
  k["attackers"] = [&a](auto v) { a.attacker_count = static_cast<std::uint32_t>(to_positive(v)); };
  k["at"] = [&a](auto v) { a.at = to_times(v); };
  return k;
}

}  // namespace

ScenarioConfig parse_config(std::string_view text, const std::string& base_dir) {
  ScenarioConfig c;
  c.base_dir = base_dir;
  auto globals = global_keys(c);
  std::set<std::string, std::less<>> seen;
  std::vector<std::set<std::string, std::less<>>> attack_seen;
  // Attacks are parsed into a list that stays put while setters hold references.
  std::vector<std::unique_ptr<attack::AttackSpec>> attacks;
  std::map<std::string, Setter, std::less<>> current;

  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line == "[attacks]") {
      attacks.push_back(std::make_unique<attack::AttackSpec>());
      attack_seen.emplace_back();
      current = attack_keys(*attacks.back());
      continue;
    }
    const std::string at_line = "line " + std::to_string(line_no);
    if (line.front() == '[') throw ConfigError(at_line, "unknown section " + std::string(line));
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(at_line, "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const auto value = trim(line.substr(eq + 1));

    const bool in_attack = !attacks.empty();
    const std::string path =
        in_attack ? "attacks[" + std::to_string(attacks.size() - 1) + "]." + key : key;
    auto& table = in_attack ? current : globals;
    auto& keys_seen = in_attack ? attack_seen.back() : seen;
    auto it = table.find(key);
    if (it == table.end()) throw ConfigError(path, "unknown key");
    if (!keys_seen.insert(key).second) throw ConfigError(path, "duplicate key");
    try {
      it->second(value);
    } catch (const Bad& bad) {
      throw ConfigError(path, bad.reason);
    }
  }

  if (!c.seed) throw ConfigError("seed", "missing (runs must be reproducible)");
  if (c.idps.enabled) {
    if (c.idps.ruleset.empty()) throw ConfigError("idps.ruleset", "required when idps.enabled = true");
    const fs::path rules = fs::path(base_dir) / c.idps.ruleset;
    if (!fs::is_regular_file(rules)) throw ConfigError("idps.ruleset", "no such file " + rules.string());
    try {
      idps::parse_rules(idps::file_loader(base_dir)(c.idps.ruleset));
    } catch (const idps::RuleSyntaxError& e) {
      throw ConfigError("idps.ruleset", e.what());
    }
  }
  std::set<std::string> names;
  for (std::size_t i = 0; i < attacks.size(); ++i) {
    auto& a = *attacks[i];
    const std::string prefix = "attacks[" + std::to_string(i) + "].";
    if (!attack_seen[i].count("name")) throw ConfigError(prefix + "name", "missing");
    if (!attack_seen[i].count("kind")) throw ConfigError(prefix + "kind", "missing");
    if (!attack_seen[i].count("target")) throw ConfigError(prefix + "target", "missing");
    if (!names.insert(a.name).second) throw ConfigError(prefix + "name", "duplicate attack name");
    if (auto problem = attack::check(a)) throw ConfigError(prefix + problem->first, problem->second);
    c.attacks.push_back(std::move(a));
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("file", "cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  auto dir = fs::path(path).parent_path();
  return parse_config(text.str(), dir.empty() ? "." : dir.string());
}

}  // namespace fbguard::experiment
