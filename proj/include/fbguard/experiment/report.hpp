#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbguard/scenario/scenario.hpp"

namespace fbguard::experiment {

/// A conservation identity failed; the run's numbers cannot be trusted.
class InternalError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

enum ExitStatus : int {
  kExitClean = 0,
  kExitInternal = 1,
  kExitUsage = 2,
  kExitHazard = 10,
  kExitCollapse = 11,
};

struct DeviceReport {
  std::string name;
  net::DeviceCounters counters;
  std::uint64_t legit_offered = 0;
  std::uint64_t legit_dropped_capacity = 0;
  std::uint64_t legit_dropped_unresponsive = 0;
  std::uint64_t attack_offered = 0;
  net::DeviceState final_state = net::DeviceState::Responsive;
  std::vector<net::StateTransition> transitions;
};

struct EngineReport {
  idps::EngineCounters counters;
  std::uint64_t alerts = 0;
  std::uint64_t true_matches = 0;
  std::string status;
};

struct MetricsReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<DeviceReport> devices;  // PLC1, PLC2
  std::optional<EngineReport> engine;
  scenario::Detection detection;
  std::size_t cycles = 0;
  bool hazard = false;
  std::optional<Tick> hazard_time;
  double availability = 1.0;
  std::uint64_t arrivals = 0;
  std::uint64_t blocked_arrivals = 0;
  std::uint64_t malformed = 0;
  std::uint64_t attack_packets_sent = 0;
  int exit_status = kExitClean;

  const DeviceReport& device(std::string_view name) const;
};

/// Collects the report from a finished scenario and checks every
/// conservation identity. Throws InternalError on a violation.
MetricsReport build_report(const scenario::Scenario& s);

void check_conservation(const MetricsReport& report);

/// 10 if the hazard latched, else 11 if a PLC is UNRESPONSIVE, else 0.
int exit_status(bool hazard, bool collapsed);

/// `scope,metric,value` rows.
std::string metrics_csv(const MetricsReport& report);
/// `time_us,device,from,to` rows.
std::string transitions_csv(const MetricsReport& report);

std::string format_ratio(double v);

}  // namespace fbguard::experiment
