#include "fbguard/runtime/trace.hpp"

#include <ostream>
#include <sstream>

namespace fbguard::fb {

void Trace::record_dispatch(Tick t, std::string ref) {
  if (!enabled_) return;
  lines_.push_back({t, Kind::Dispatch, std::move(ref), {}});
}

void Trace::record_emit(Tick t, std::string ref, const std::vector<Assignment>& data) {
  if (!enabled_) return;
  std::string values;
  for (const auto& a : data) {
    values += ' ';
    values += a.port;
    values += '=';
    values += a.value.to_string();
  }
  lines_.push_back({t, Kind::Emit, std::move(ref), std::move(values)});
}

std::string Trace::render(const Line& line) {
  std::string out = "t=" + std::to_string(line.time);
  out += line.kind == Kind::Dispatch ? " dispatch " : " emit ";
  out += line.ref;
  out += line.values;
  return out;
}

void Trace::write(std::ostream& out) const {
  for (const auto& line : lines_) out << render(line) << '\n';
}

std::string Trace::str() const {
  std::ostringstream out;
  write(out);
  return out.str();
}

}  // namespace fbguard::fb
