#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

namespace fbguard::fb {

enum class DataKind : std::uint8_t { Bool, Int, String };

std::string_view to_string(DataKind kind);

/// Value carried on a data port: BOOL, INT (signed 64-bit) or STRING.
class DataValue {
 public:
  DataValue() : value_(false) {}
  DataValue(bool b) : value_(b) {}  // NOLINT(google-explicit-constructor)
  template <std::integral T>
    requires(!std::same_as<T, bool>)
  DataValue(T i) : value_(static_cast<std::int64_t>(i)) {}  // NOLINT(google-explicit-constructor)
  DataValue(std::string s) : value_(std::move(s)) {}  // NOLINT(google-explicit-constructor)
  DataValue(const char* s) : value_(std::string(s)) {}  // NOLINT(google-explicit-constructor)

  /// Zero value of a kind: false, 0 or the empty string.
  static DataValue zero(DataKind kind);

  DataKind kind() const { return static_cast<DataKind>(value_.index()); }

  bool as_bool() const { return std::get<bool>(value_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(value_); }
  const std::string& as_string() const { return std::get<std::string>(value_); }

  /// Trace rendering: true/false, decimal, or a double-quoted string.
  std::string to_string() const;

  friend bool operator==(const DataValue&, const DataValue&) = default;

 private:
  std::variant<bool, std::int64_t, std::string> value_;
};

}  // namespace fbguard::fb
