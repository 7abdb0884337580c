#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "fbguard/runtime/behavior.hpp"
#include "fbguard/runtime/data_value.hpp"

namespace fbguard::csifb {

using fb::Bytes;
using fb::DataValue;

inline constexpr std::uint8_t kTagFalse = 0x40;
inline constexpr std::uint8_t kTagTrue = 0x41;
inline constexpr std::uint8_t kTagInt = 0x43;
inline constexpr std::uint8_t kTagString = 0x50;
inline constexpr std::size_t kMaxString = 0xFFFF;

class StringTooLong : public std::length_error {
 public:
  explicit StringTooLong(std::size_t size)
      : std::length_error("string of " + std::to_string(size) + " bytes exceeds 65535"), size_(size) {}
  std::size_t size() const { return size_; }

 private:
  std::size_t size_;
};

struct DecodeError {
  std::size_t offset;
  std::string reason;
};

class MalformedPayload : public std::runtime_error {
 public:
  explicit MalformedPayload(DecodeError error)
      : std::runtime_error("malformed payload at offset " + std::to_string(error.offset) + ": " + error.reason),
        error_(std::move(error)) {}
  std::size_t offset() const { return error_.offset; }
  const std::string& reason() const { return error_.reason; }

 private:
  DecodeError error_;
};

Bytes encode(const std::vector<DataValue>& values);

/// Throws MalformedPayload unless the whole input is a sequence of values.
std::vector<DataValue> decode(std::span<const std::uint8_t> bytes);

/// Non-throwing decode.
std::variant<std::vector<DataValue>, DecodeError> try_decode(std::span<const std::uint8_t> bytes) noexcept;

}  // namespace fbguard::csifb
