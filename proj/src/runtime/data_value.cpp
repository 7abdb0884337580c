#include "fbguard/runtime/data_value.hpp"

namespace fbguard::fb {

std::string_view to_string(DataKind kind) {
  switch (kind) {
    case DataKind::Bool: return "BOOL";
    case DataKind::Int: return "INT";
    case DataKind::String: return "STRING";
  }
  return "?";
}

DataValue DataValue::zero(DataKind kind) {
  switch (kind) {
    case DataKind::Bool: return DataValue(false);
    case DataKind::Int: return DataValue(std::int64_t{0});
    case DataKind::String: return DataValue(std::string());
  }
  return {};
}

std::string DataValue::to_string() const {
  switch (kind()) {
    case DataKind::Bool: return as_bool() ? "true" : "false";
    case DataKind::Int: return std::to_string(as_int());
    case DataKind::String: {
      std::string out = "\"";
      for (char c : as_string()) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
      }
      return out + "\"";
    }
  }
  return {};
}

}  // namespace fbguard::fb
