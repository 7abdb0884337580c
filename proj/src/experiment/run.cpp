#include "fbguard/experiment/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fbguard/scenario/scenario.hpp"

namespace fbguard::experiment {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

}  // namespace

RunOutputs run(const scenario::ScenarioConfig& config) {
  scenario::Scenario s(config);
  s.run();
  RunOutputs out;
  out.report = build_report(s);
  out.metrics_csv = metrics_csv(out.report);
  out.alerts_csv = idps::alerts_csv(s.idps() && s.idps()->engine() ? s.idps()->engine()->alerts()
                                                                   : std::vector<idps::Alert>{});
  out.plant_csv = scenario::plant_csv(s.plant().rows());
  out.transitions_csv = transitions_csv(out.report);
  out.trace = s.trace().str();
  return out;
}

void write_outputs(const RunOutputs& o, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  write_file(fs::path(dir) / "metrics.csv", o.metrics_csv);
  write_file(fs::path(dir) / "alerts.csv", o.alerts_csv);
  write_file(fs::path(dir) / "plant.csv", o.plant_csv);
  write_file(fs::path(dir) / "transitions.csv", o.transitions_csv);
  write_file(fs::path(dir) / "trace.txt", o.trace);
}

std::vector<std::uint64_t> parse_rates(std::string_view text) {
  std::vector<std::uint64_t> rates;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw UsageError("bad rate '" + item + "'");
    }
    if (used != item.size() || !(v >= 1) || v != std::floor(v) || v > 1e15)
      throw UsageError("bad rate '" + item + "'");
    const auto r = static_cast<std::uint64_t>(v);
    if (!rates.empty() && r <= rates.back()) throw UsageError("rates must be strictly increasing");
    rates.push_back(r);
  }
  if (rates.empty()) throw UsageError("empty rate list");
  return rates;
}

std::vector<SweepRow> sweep(const scenario::ScenarioConfig& config, std::string_view attack,
                            const std::vector<std::uint64_t>& rates) {
  if (rates.empty()) throw UsageError("empty rate list");
  for (std::size_t i = 1; i < rates.size(); ++i)
    if (rates[i] <= rates[i - 1]) throw UsageError("rates must be strictly increasing");
  auto it = std::find_if(config.attacks.begin(), config.attacks.end(),
                         [&](const attack::AttackSpec& a) { return a.name == attack; });
  if (it == config.attacks.end()) throw UsageError("no attack named '" + std::string(attack) + "'");
  if (it->kind == attack::AttackKind::SpoofPublish) throw UsageError("cannot sweep a SPOOF_PUBLISH attack");
  const auto index = static_cast<std::size_t>(it - config.attacks.begin());
  const bool to_plc1 = it->target.addr == *net::parse_address(scenario::kPlc1Address);

  std::vector<SweepRow> rows;
  for (const auto rate : rates) {
    auto c = config;
    c.trace = false;
    c.attacks[index].rate = rate;
    scenario::Scenario s(c);
    s.run();
    const auto report = build_report(s);
    const auto& dev = report.devices.at(to_plc1 ? 0 : 1);
    SweepRow row;
    row.rate = rate;
    row.offered = dev.counters.offered;
    row.ingested = dev.counters.ingested;
    row.dropped_capacity = dev.counters.dropped_capacity;
    if (report.engine && !to_plc1) {
      row.dropped_by_engine = report.engine->counters.dropped_by_engine;
      row.alerts = report.engine->alerts;
      row.true_matches = report.engine->true_matches;
    }
    row.availability = report.availability;
    row.device_final_state = dev.final_state;
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "rate,offered,ingested,dropped_capacity,dropped_by_engine,alerts,true_matches,availability,"
         "device_final_state\n";
  for (const auto& r : rows)
    out << r.rate << ',' << r.offered << ',' << r.ingested << ',' << r.dropped_capacity << ','
        << r.dropped_by_engine << ',' << r.alerts << ',' << r.true_matches << ',' << format_ratio(r.availability)
        << ',' << net::to_string(r.device_final_state) << '\n';
  return out.str();
}

}  // namespace fbguard::experiment
