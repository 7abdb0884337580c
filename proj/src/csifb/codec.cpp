#include "fbguard/csifb/codec.hpp"

namespace fbguard::csifb {

Bytes encode(const std::vector<DataValue>& values) {
  Bytes out;
  for (const auto& v : values) {
    switch (v.kind()) {
      case fb::DataKind::Bool:
        out.push_back(v.as_bool() ? kTagTrue : kTagFalse);
        break;
      case fb::DataKind::Int: {
        out.push_back(kTagInt);
        const auto u = static_cast<std::uint64_t>(v.as_int());
        for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(u >> shift));
        break;
      }
      case fb::DataKind::String: {
        const auto& s = v.as_string();
        if (s.size() > kMaxString) throw StringTooLong(s.size());
        out.push_back(kTagString);
        out.push_back(static_cast<std::uint8_t>(s.size() >> 8));
        out.push_back(static_cast<std::uint8_t>(s.size() & 0xFF));
        out.insert(out.end(), s.begin(), s.end());
        break;
      }
    }
  }
  return out;
}

std::variant<std::vector<DataValue>, DecodeError> try_decode(std::span<const std::uint8_t> bytes) noexcept {
  try {
    std::vector<DataValue> out;
    std::size_t i = 0;
    while (i < bytes.size()) {
      const std::size_t tag_at = i;
      switch (bytes[i++]) {
        case kTagFalse: out.emplace_back(false); break;
        case kTagTrue: out.emplace_back(true); break;
        case kTagInt: {
          if (bytes.size() - i < 8) return DecodeError{i, "truncated INT"};
          std::uint64_t u = 0;
          for (int k = 0; k < 8; ++k) u = (u << 8) | bytes[i++];
          out.emplace_back(static_cast<std::int64_t>(u));
          break;
        }
        case kTagString: {
          if (bytes.size() - i < 2) return DecodeError{i, "truncated STRING length"};
          const std::size_t len = (std::size_t{bytes[i]} << 8) | bytes[i + 1];
          i += 2;
          if (bytes.size() - i < len) return DecodeError{i, "truncated STRING body"};
          out.emplace_back(std::string(bytes.begin() + static_cast<std::ptrdiff_t>(i),
                                       bytes.begin() + static_cast<std::ptrdiff_t>(i + len)));
          i += len;
          break;
        }
        default: return DecodeError{tag_at, "unknown tag"};
      }
    }
    return out;
  } catch (...) {
    return DecodeError{0, "allocation failure"};
  }
}

std::vector<DataValue> decode(std::span<const std::uint8_t> bytes) {
  auto result = try_decode(bytes);
  if (auto* err = std::get_if<DecodeError>(&result)) throw MalformedPayload(std::move(*err));
  return std::move(std::get<std::vector<DataValue>>(result));
}

}  // namespace fbguard::csifb
