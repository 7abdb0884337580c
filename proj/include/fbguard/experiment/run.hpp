#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbguard/experiment/report.hpp"
#include "fbguard/scenario/config.hpp"

namespace fbguard::experiment {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunOutputs {
  MetricsReport report;
  std::string metrics_csv;
  std::string alerts_csv;
  std::string plant_csv;
  std::string transitions_csv;
  std::string trace;
};

RunOutputs run(const scenario::ScenarioConfig& config);

/// Writes metrics.csv, alerts.csv, plant.csv, transitions.csv and trace.txt.
void write_outputs(const RunOutputs& outputs, const std::string& dir);

struct SweepRow {
  std::uint64_t rate = 0;
  std::uint64_t offered = 0;
  std::uint64_t ingested = 0;
  std::uint64_t dropped_capacity = 0;
  std::uint64_t dropped_by_engine = 0;
  std::uint64_t alerts = 0;
  std::uint64_t true_matches = 0;
  double availability = 1.0;
  net::DeviceState device_final_state = net::DeviceState::Responsive;
};

/// Comma-separated positive rates ("100,1e3,5e4"), strictly increasing.
std::vector<std::uint64_t> parse_rates(std::string_view text);

/// One run per rate with the named attack's rate substituted. Counts are
/// taken at the attack's target PLC (PLC2 for a multicast target).
std::vector<SweepRow> sweep(const scenario::ScenarioConfig& config, std::string_view attack,
                            const std::vector<std::uint64_t>& rates);

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace fbguard::experiment
