#include "fbguard/idps/service.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbguard::idps {

std::string_view to_string(Status status) {
  switch (status) {
    case Status::Stopped: return "STOPPED";
    case Status::Running: return "RUNNING";
    case Status::Fault: return "FAULT";
  }
  return "?";
}

RulesetLoader file_loader(std::string base_dir) {
  return [base = std::move(base_dir)](std::string_view ref) {
    std::filesystem::path path(ref);
    if (path.is_relative() && !base.empty()) path = std::filesystem::path(base) / path;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read ruleset " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
  };
}

std::variant<StartPlan, std::string> IdpsService::prepare(std::string_view params) const {
  StartPlan plan{{}, defaults_};
  std::optional<std::string> ruleset;
  while (!params.empty()) {
    auto semi = params.find(';');
    auto item = params.substr(0, semi);
    params = semi == std::string_view::npos ? std::string_view{} : params.substr(semi + 1);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string_view::npos) return "PARAMS item '" + std::string(item) + "' is not key=value";
    auto key = item.substr(0, eq);
    auto value = item.substr(eq + 1);
    if (key == "ruleset") {
      ruleset = std::string(value);
    } else if (key == "mode") {
      auto mode = parse_mode(value);
      if (!mode) return "unknown mode '" + std::string(value) + "'";
      plan.config.mode = *mode;
    } else if (key == "capacity") {
      double cap = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), cap);
      if (ec != std::errc() || ptr != value.data() + value.size() || cap < 0) {
        return "bad capacity '" + std::string(value) + "'";
      }
      plan.config.inspection_capacity = cap;
    } else {
      return "unknown PARAMS key '" + std::string(key) + "'";
    }
  }
  if (!ruleset) {
    if (plan.config.mode == Mode::Off) return plan;
    return "PARAMS lacks ruleset";
  }
  try {
    plan.rules = parse_rules(loader_(*ruleset));
  } catch (const RuleSyntaxError& e) {
    return *ruleset + ": " + e.what();
  } catch (const std::exception& e) {
    return e.what();
  }
  return plan;
}

void IdpsService::start(StartPlan plan) {
  shadow_ = std::make_unique<Engine>(plan.rules, EngineConfig{Mode::Ids, 0, false});
  engine_ = std::make_unique<Engine>(std::move(plan.rules), plan.config);
  status_ = Status::Running;
  diagnostic_.clear();
}

void IdpsService::fault(std::string diagnostic) {
  status_ = Status::Fault;
  diagnostic_ = std::move(diagnostic);
}

void IdpsService::stop() { status_ = Status::Stopped; }

bool IdpsService::admit(const net::WirePacket& packet, Tick now) {
  if (status_ != Status::Running) return true;
  const auto before = engine_->alert_seq();
  const Verdict verdict = engine_->inspect(packet, now);
  if (engine_->mode() != Mode::Off) shadow_->inspect(packet, now);
  if (listener_ && engine_->alert_seq() != before) listener_(engine_->alert_seq());
  return verdict.admitted();
}

}  // namespace fbguard::idps
