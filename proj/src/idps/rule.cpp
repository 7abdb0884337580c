#include "fbguard/idps/rule.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

namespace fbguard::idps {

std::string_view to_string(Action action) { return action == Action::Alert ? "alert" : "block"; }

std::string_view to_string(ProtoMatch proto) {
  switch (proto) {
    case ProtoMatch::Any: return "any";
    case ProtoMatch::Udp: return "udp";
    case ProtoMatch::Tcp: return "tcp";
    case ProtoMatch::Icmp: return "icmp";
  }
  return "?";
}

bool AddrMatch::matches(net::Address a) const {
  if (prefix == 0) return true;
  const net::Address mask = prefix >= 32 ? ~net::Address{0} : ~((net::Address{1} << (32 - prefix)) - 1);
  return (a & mask) == (addr & mask);
}

std::string AddrMatch::to_string() const {
  if (any()) return "any";
  auto s = net::format_address(addr);
  return prefix == 32 ? s : s + "/" + std::to_string(prefix);
}

std::string PortMatch::to_string() const {
  if (any()) return "any";
  if (lo == hi) return std::to_string(lo);
  return std::to_string(lo) + ":" + std::to_string(hi);
}

bool Rule::matches_static(const net::WirePacket& p) const {
  switch (proto) {
    case ProtoMatch::Any: break;
    case ProtoMatch::Udp: if (p.proto != net::Protocol::Udp) return false; break;
    case ProtoMatch::Tcp: if (!net::is_tcp(p.proto)) return false; break;
    case ProtoMatch::Icmp: if (p.proto != net::Protocol::IcmpEcho) return false; break;
  }
  if (!src.matches(p.src.addr) || !src_port.matches(p.src.port)) return false;
  if (!dst.matches(p.dst.addr) || !dst_port.matches(p.dst.port)) return false;
  if (payload && std::search(p.payload.begin(), p.payload.end(), payload->begin(), payload->end()) == p.payload.end()) {
    return false;
  }
  if (!srcallow.empty()) {
    for (const auto& allowed : srcallow) {
      if (allowed.matches(p.src.addr)) return false;
    }
  }
  return true;
}

bool Rule::has_matchers() const {
  return proto != ProtoMatch::Any || !src.any() || !src_port.any() || !dst.any() || !dst_port.any() ||
         payload.has_value() || rate.has_value() || !srcallow.empty();
}

std::string Rule::to_string() const {
  std::string out = std::string(idps::to_string(action)) + " " + std::string(idps::to_string(proto)) + " " +
                    src.to_string() + " " + src_port.to_string() + " -> " + dst.to_string() + " " +
                    dst_port.to_string();
  if (payload) {
    static constexpr char kHex[] = "0123456789abcdef";
    out += " payload \"";
    for (auto b : *payload) {
      out += kHex[b >> 4];
      out += kHex[b & 0xF];
    }
    out += "\"";
  }
  if (rate) out += " rate " + std::to_string(rate->count) + "/" + format_seconds(rate->window);
  if (!srcallow.empty()) {
    out += " srcallow ";
    for (std::size_t i = 0; i < srcallow.size(); ++i) out += (i ? "," : "") + srcallow[i].to_string();
  }
  return out + " msg \"" + msg + "\"";
}

namespace {

struct Token {
  std::string text;
  bool quoted;
};

std::vector<Token> tokenize(std::string_view line, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (c == '"') {
      std::string text;
      ++i;
      bool closed = false;
      while (i < line.size()) {
        char d = line[i++];
        if (d == '\\' && i < line.size()) {
          text += line[i++];
        } else if (d == '"') {
          closed = true;
          break;
        } else {
          text += d;
        }
      }
      if (!closed) throw RuleSyntaxError(line_no, "unterminated string");
      out.push_back({std::move(text), true});
      continue;
    }
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j])) && line[j] != '"' && line[j] != '#') ++j;
    out.push_back({std::string(line.substr(i, j - i)), false});
    i = j;
  }
  return out;
}

template <class T>
std::optional<T> number(std::string_view s, std::uint64_t max) {
  if (s.empty()) return std::nullopt;
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v > max) return std::nullopt;
  return static_cast<T>(v);
}

AddrMatch parse_addr(std::string_view s, int line_no) {
  if (s == "any") return {};
  int prefix = 32;
  auto slash = s.find('/');
  if (slash != std::string_view::npos) {
    auto p = number<int>(s.substr(slash + 1), 32);
    if (!p) throw RuleSyntaxError(line_no, "bad prefix length in '" + std::string(s) + "'");
    prefix = *p;
    s = s.substr(0, slash);
  }
  auto addr = net::parse_address(s);
  if (!addr) throw RuleSyntaxError(line_no, "bad address '" + std::string(s) + "'");
  return {*addr, prefix};
}

PortMatch parse_port(std::string_view s, int line_no) {
  if (s == "any") return {};
  auto colon = s.find(':');
  auto lo = number<std::uint16_t>(s.substr(0, colon), 65535);
  auto hi = colon == std::string_view::npos ? lo : number<std::uint16_t>(s.substr(colon + 1), 65535);
  if (!lo || !hi || *lo > *hi) throw RuleSyntaxError(line_no, "bad port '" + std::string(s) + "'");
  return {*lo, *hi};
}

std::vector<std::uint8_t> parse_hex(std::string_view s, int line_no) {
  std::string digits;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::isspace(static_cast<unsigned char>(s[i]))) continue;
    if (s[i] == '0' && i + 1 < s.size() && (s[i + 1] == 'x' || s[i + 1] == 'X')) {
      ++i;
      continue;
    }
    if (!std::isxdigit(static_cast<unsigned char>(s[i]))) throw RuleSyntaxError(line_no, "bad hex in payload");
    digits += s[i];
  }
  if (digits.empty() || digits.size() % 2) throw RuleSyntaxError(line_no, "payload needs whole bytes");
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(digits.substr(i, 2), nullptr, 16)));
  }
  return out;
}

RateClause parse_rate(std::string_view s, int line_no) {
  auto slash = s.find('/');
  if (slash == std::string_view::npos) throw RuleSyntaxError(line_no, "rate must be N/W");
  auto n = number<std::uint32_t>(s.substr(0, slash), 0xFFFFFFFF);
  if (!n || *n == 0) throw RuleSyntaxError(line_no, "rate count must be >= 1");
  Tick w = 0;
  try {
    w = parse_seconds(s.substr(slash + 1));
  } catch (const std::invalid_argument&) {
    throw RuleSyntaxError(line_no, "bad rate window '" + std::string(s.substr(slash + 1)) + "'");
  }
  if (w == 0) throw RuleSyntaxError(line_no, "rate window must be > 0");
  return {*n, w};
}

}  // namespace

Rule parse_rule(std::string_view line, int line_no) {
  auto tokens = tokenize(line, line_no);
  auto bare = [&](std::size_t i) -> const std::string& {
    if (i >= tokens.size()) throw RuleSyntaxError(line_no, "rule header needs 7 fields");
    if (tokens[i].quoted) throw RuleSyntaxError(line_no, "unexpected string");
    return tokens[i].text;
  };
  Rule rule;
  rule.id = "R" + std::to_string(line_no);
  rule.line = line_no;
  const auto& action = bare(0);
  if (action == "alert") rule.action = Action::Alert;
  else if (action == "block") rule.action = Action::Block;
  else throw RuleSyntaxError(line_no, "unknown action '" + action + "'");
  const auto& proto = bare(1);
  if (proto == "any") rule.proto = ProtoMatch::Any;
  else if (proto == "udp") rule.proto = ProtoMatch::Udp;
  else if (proto == "tcp") rule.proto = ProtoMatch::Tcp;
  else if (proto == "icmp") rule.proto = ProtoMatch::Icmp;
  else throw RuleSyntaxError(line_no, "unknown protocol '" + proto + "'");
  rule.src = parse_addr(bare(2), line_no);
  rule.src_port = parse_port(bare(3), line_no);
  if (bare(4) != "->") throw RuleSyntaxError(line_no, "expected '->'");
  rule.dst = parse_addr(bare(5), line_no);
  rule.dst_port = parse_port(bare(6), line_no);

  bool have_msg = false;
  for (std::size_t i = 7; i < tokens.size(); i += 2) {
    const auto& key = bare(i);
    if (i + 1 >= tokens.size()) throw RuleSyntaxError(line_no, "option '" + key + "' needs a value");
    const Token& value = tokens[i + 1];
    auto once = [&](bool seen) {
      if (seen) throw RuleSyntaxError(line_no, "duplicate option '" + key + "'");
    };
    if (key == "msg") {
      once(have_msg);
      if (!value.quoted) throw RuleSyntaxError(line_no, "msg must be quoted");
      rule.msg = value.text;
      have_msg = true;
    } else if (key == "payload") {
      once(rule.payload.has_value());
      if (!value.quoted) throw RuleSyntaxError(line_no, "payload must be quoted");
      rule.payload = parse_hex(value.text, line_no);
    } else if (key == "rate") {
      once(rule.rate.has_value());
      rule.rate = parse_rate(value.text, line_no);
    } else if (key == "srcallow") {
      once(!rule.srcallow.empty());
      std::string_view list = value.text;
      while (true) {
        auto comma = list.find(',');
        rule.srcallow.push_back(parse_addr(list.substr(0, comma), line_no));
        if (comma == std::string_view::npos) break;
        list = list.substr(comma + 1);
      }
    } else {
      throw RuleSyntaxError(line_no, "unknown option '" + key + "'");
    }
  }
  if (!have_msg) throw RuleSyntaxError(line_no, "missing msg");
  if (rule.action == Action::Block && !rule.has_matchers()) {
    throw RuleSyntaxError(line_no, "block rule without matchers");
  }
  return rule;
}

std::vector<Rule> parse_rules(std::string_view text) {
  std::vector<Rule> out;
  int line_no = 0;
  while (!text.empty() || line_no == 0) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    auto first = line.find_first_not_of(" \t");
    if (first != std::string_view::npos && line[first] != '#') out.push_back(parse_rule(line, line_no));
    if (text.empty()) break;
  }
  return out;
}

}  // namespace fbguard::idps
