#include "fbguard/time.hpp"

#include <limits>
#include <stdexcept>

namespace fbguard {

Tick parse_seconds(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty duration");
  Tick whole = 0;
  Tick frac = 0;
  int frac_digits = 0;
  bool seen_dot = false;
  bool seen_digit = false;
  for (char c : text) {
    if (c == '.') {
      if (seen_dot) throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
      seen_dot = true;
      continue;
    }
    if (c < '0' || c > '9') throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
    seen_digit = true;
    const Tick digit = static_cast<Tick>(c - '0');
    if (seen_dot) {
      if (++frac_digits > 6) {
        if (digit != 0) throw std::invalid_argument("duration finer than 1 us: '" + std::string(text) + "'");
        continue;
      }
      frac = frac * 10 + digit;
    } else {
      if (whole > (std::numeric_limits<Tick>::max() / kMicrosPerSecond - 9) / 10) {
        throw std::invalid_argument("duration out of range");
      }
      whole = whole * 10 + digit;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed duration '" + std::string(text) + "'");
  for (int i = frac_digits; i < 6; ++i) frac *= 10;
  return whole * kMicrosPerSecond + frac;
}

std::string format_seconds(Tick t) {
  std::string out = std::to_string(t / kMicrosPerSecond);
  Tick frac = t % kMicrosPerSecond;
  if (frac == 0) return out;
  std::string digits = std::to_string(frac);
  digits.insert(0, 6 - digits.size(), '0');
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  return out + "." + digits;
}

}  // namespace fbguard
