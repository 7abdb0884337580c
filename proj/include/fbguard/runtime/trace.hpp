#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fbguard/runtime/behavior.hpp"
#include "fbguard/time.hpp"

namespace fbguard::fb {

/// Ordered record of dispatches and emissions. Renders as
///   t=<u64> dispatch <instance>.<port>
///   t=<u64> emit <instance>.<port>[ <name>=<value>...]
class Trace {
 public:
  enum class Kind : std::uint8_t { Dispatch, Emit };

  struct Line {
    Tick time;
    Kind kind;
    std::string ref;
    std::string values;
  };

  explicit Trace(bool enabled = true) : enabled_(enabled) {}

  bool enabled() const { return enabled_; }
  void record_dispatch(Tick t, std::string ref);
  void record_emit(Tick t, std::string ref, const std::vector<Assignment>& data);

  const std::vector<Line>& lines() const { return lines_; }
  std::size_t size() const { return lines_.size(); }

  static std::string render(const Line& line);
  void write(std::ostream& out) const;
  std::string str() const;

 private:
  bool enabled_;
  std::vector<Line> lines_;
};

}  // namespace fbguard::fb
