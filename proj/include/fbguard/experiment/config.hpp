#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fbguard/scenario/config.hpp"

namespace fbguard::experiment {

/// Invalid scenario file. `path` names the offending field, e.g. `seed` or
/// `attacks[0].rate`.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& reason)
      : std::runtime_error(path + ": " + reason), path_(std::move(path)), reason_(reason) {}
  const std::string& path() const { return path_; }
  const std::string& reason() const { return reason_; }

 private:
  std::string path_;
  std::string reason_;
};

/// Parses scenario text: `key = value` and `section.key = value` lines, `#`
/// comments, and one `[attacks]` header per attack followed by its keys.
/// Relative ruleset paths resolve against `base_dir`, which must then hold
/// the file.
scenario::ScenarioConfig parse_config(std::string_view text, const std::string& base_dir = ".");

/// Reads and parses a scenario file; base_dir is the file's directory.
scenario::ScenarioConfig load_config(const std::string& path);

}  // namespace fbguard::experiment
