#include "fbguard/experiment/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace fbguard::experiment {

namespace {

std::uint64_t sum(const std::map<net::Outcome, std::uint64_t>& m) {
  std::uint64_t n = 0;
  for (const auto& [o, c] : m) n += c;
  return n;
}

std::uint64_t get(const std::map<net::Outcome, std::uint64_t>& m, net::Outcome o) {
  auto it = m.find(o);
  return it == m.end() ? 0 : it->second;
}

void check_engine(const idps::EngineCounters& c, const std::string& what) {
  if (c.inspected + c.dropped_by_engine != c.presented)
    throw InternalError(what + ": inspected + dropped_by_engine != presented");
  if (c.matched > c.inspected) throw InternalError(what + ": matched > inspected");
  if (c.blocked > c.matched) throw InternalError(what + ": blocked > matched");
}

}  // namespace

const DeviceReport& MetricsReport::device(std::string_view name) const {
  for (const auto& d : devices)
    if (d.name == name) return d;
  throw std::out_of_range("no device " + std::string(name));
}

int exit_status(bool hazard, bool collapsed) {
  if (hazard) return kExitHazard;
  if (collapsed) return kExitCollapse;
  return kExitClean;
}

std::string format_ratio(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

MetricsReport build_report(const scenario::Scenario& s) {
  if (!s.finished()) throw std::logic_error("report on a scenario that has not run");
  MetricsReport r;
  r.name = s.config().name;
  r.seed = s.config().seed.value_or(0);
  const auto& t = s.transport();
  for (int which : {1, 2}) {
    const auto id = s.plc(which);
    const auto& dev = t.device(id);
    const auto& traffic = s.traffic(id);
    DeviceReport d;
    d.name = dev.name();
    d.counters = dev.counters();
    d.legit_offered = sum(traffic.legit);
    d.legit_dropped_capacity = get(traffic.legit, net::Outcome::DroppedCapacity);
    d.legit_dropped_unresponsive = get(traffic.legit, net::Outcome::DroppedUnresponsive);
    d.attack_offered = sum(traffic.attack);
    d.final_state = dev.state();
    d.transitions = dev.transitions();
    r.devices.push_back(std::move(d));
  }
  if (const auto* svc = s.idps(); svc && svc->engine()) {
    EngineReport e;
    e.counters = svc->engine()->counters();
    e.alerts = svc->engine()->alerts().size();
    e.true_matches = svc->shadow() ? svc->shadow()->counters().matched : 0;
    e.status = std::string(idps::to_string(svc->status()));
    r.engine = e;
  }
  r.detection = s.detection();
  const auto cycles = s.cycles();
  r.cycles = cycles.completions.size();
  r.availability = cycles.availability;
  r.hazard = s.plant().state().hazard;
  r.hazard_time = s.plant().hazard_time();
  r.arrivals = s.plant().arrivals();
  r.blocked_arrivals = s.plant().blocked_arrivals();
  r.malformed = s.malformed();
  r.attack_packets_sent = s.harness().sent();
  r.exit_status = exit_status(r.hazard, s.any_plc_unresponsive());
  check_conservation(r);
  if (const auto* svc = s.idps(); svc && svc->shadow()) check_engine(svc->shadow()->counters(), "shadow engine");
  return r;
}

void check_conservation(const MetricsReport& r) {
  for (const auto& d : r.devices) {
    const auto& c = d.counters;
    if (c.offered != c.ingested + c.dropped_capacity + c.dropped_unresponsive)
      throw InternalError(d.name + ": offered != ingested + dropped_capacity + dropped_unresponsive");
    if (c.offered != d.legit_offered + d.attack_offered)
      throw InternalError(d.name + ": offered != legit + attack arrivals");
  }
  if (r.engine) {
    check_engine(r.engine->counters, "engine");
    if (r.engine->alerts != r.engine->counters.matched) throw InternalError("engine: alerts != matched");
  }
}

std::string metrics_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "scope,metric,value\n";
  auto row = [&out](std::string_view scope, std::string_view metric, const auto& value) {
    out << scope << ',' << metric << ',' << value << '\n';
  };
  row("run", "name", r.name);
  row("run", "seed", r.seed);
  row("run", "exit_status", r.exit_status);
  row("run", "attack_packets_sent", r.attack_packets_sent);
  for (const auto& d : r.devices) {
    const auto& c = d.counters;
    row(d.name, "offered", c.offered);
    row(d.name, "ingested", c.ingested);
    row(d.name, "dropped_capacity", c.dropped_capacity);
    row(d.name, "dropped_unresponsive", c.dropped_unresponsive);
    row(d.name, "blocked", c.blocked);
    row(d.name, "syn_refused", c.syn_refused);
    row(d.name, "stray_acks", c.stray_acks);
    row(d.name, "stray_data", c.stray_data);
    row(d.name, "sender_down", c.sender_down);
    row(d.name, "legit_offered", d.legit_offered);
    row(d.name, "legit_dropped_capacity", d.legit_dropped_capacity);
    row(d.name, "legit_dropped_unresponsive", d.legit_dropped_unresponsive);
    row(d.name, "attack_offered", d.attack_offered);
    row(d.name, "final_state", net::to_string(d.final_state));
  }
  if (r.engine) {
    const auto& e = *r.engine;
    row("engine", "status", e.status);
    row("engine", "presented", e.counters.presented);
    row("engine", "inspected", e.counters.inspected);
    row("engine", "dropped_by_engine", e.counters.dropped_by_engine);
    row("engine", "alerts", e.alerts);
    row("engine", "blocked", e.counters.blocked);
    row("engine", "true_matches", e.true_matches);
    const auto& d = r.detection;
    const double tp = static_cast<double>(d.true_positive);
    row("detection", "true_positive", d.true_positive);
    row("detection", "false_positive", d.false_positive);
    row("detection", "false_negative", d.false_negative);
    row("detection", "true_negative", d.true_negative);
    row("detection", "precision", format_ratio(d.true_positive + d.false_positive ? tp / (tp + static_cast<double>(d.false_positive)) : NAN));
    row("detection", "recall", format_ratio(d.true_positive + d.false_negative ? tp / (tp + static_cast<double>(d.false_negative)) : NAN));
    row("detection", "attack_blocked", d.attack_blocked);
    row("detection", "attack_delivered", d.attack_delivered);
    row("detection", "legit_blocked", d.legit_blocked);
  }
  row("plant", "cycles", r.cycles);
  row("plant", "hazard", r.hazard ? "true" : "false");
  row("plant", "hazard_time_us", r.hazard_time ? std::to_string(*r.hazard_time) : std::string());
  row("plant", "availability", format_ratio(r.availability));
  row("plant", "arrivals", r.arrivals);
  row("plant", "blocked_arrivals", r.blocked_arrivals);
  row("csifb", "malformed", r.malformed);
  return out.str();
}

std::string transitions_csv(const MetricsReport& r) {
  std::ostringstream out;
  out << "time_us,device,from,to\n";
  for (const auto& d : r.devices)
    for (const auto& t : d.transitions)
      out << t.time << ',' << d.name << ',' << net::to_string(t.from) << ',' << net::to_string(t.to) << '\n';
  return out.str();
}

}  // namespace fbguard::experiment
