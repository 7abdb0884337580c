#include "fbguard/scenario/plant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace fbguard::scenario {

std::string_view to_string(Command cmd) {
  switch (cmd) {
    case Command::Hold: return "HOLD";
    case Command::Extend: return "EXTEND";
    case Command::Retract: return "RETRACT";
  }
  return "?";
}

namespace {

double advance(double pos, Command cmd, double delta) {
  if (cmd == Command::Extend) pos += delta;
  if (cmd == Command::Retract) pos -= delta;
  pos = std::clamp(pos, 0.0, 1.0);
  if (pos < 1e-9) pos = 0;
  if (pos > 1 - 1e-9) pos = 1;
  return pos;
}

bool unsafe_retract(const PlantState& p) {
  return p.cyl2_cmd == Command::Retract && p.box_present && !p.box_pushed_off;
}

}  // namespace

void command(PlantState& plant, int cylinder, Command cmd) {
  Command& slot = cylinder == 1 ? plant.cyl1_cmd : plant.cyl2_cmd;
  const Command prev = slot;
  slot = cmd;
  if (cylinder == 2 && prev != Command::Retract && unsafe_retract(plant)) plant.hazard = true;
}

void plant_step(PlantState& plant, double rate, std::uint64_t ticks) {
  for (std::uint64_t i = 0; i < ticks; ++i) {
    plant.cyl1_pos = advance(plant.cyl1_pos, plant.cyl1_cmd, rate);
    plant.cyl2_pos = advance(plant.cyl2_pos, plant.cyl2_cmd, rate);
    if (plant.cyl1_pos == 1 && plant.cyl2_pos == 1 && plant.box_present) {
      plant.box_pushed_off = true;
      plant.box_present = false;
    }
    if (unsafe_retract(plant) && plant.cyl2_pos > 0) plant.hazard = true;
  }
}

void Plant::note_hazard(Tick now) {
  if (state_.hazard && !hazard_time_) hazard_time_ = now;
}

void Plant::command(int cylinder, Command cmd, Tick now) {
  scenario::command(state_, cylinder, cmd);
  note_hazard(now);
}

void Plant::step(Tick now) {
  if (now > 0) plant_step(state_, params_.rate);
  note_hazard(now);
  if (now >= next_box_) {
    if (state_.idle()) {
      state_.box_present = true;
      state_.box_pushed_off = false;
      ++arrivals_;
    } else {
      ++blocked_;
    }
    next_box_ += params_.box_period;
  }
  rows_.push_back({now, state_.cyl1_pos, state_.cyl2_pos, state_.box_present, state_.box_pushed_off, state_.hazard});
}

std::string plant_csv(const std::vector<PlantRow>& rows) {
  std::string out = "time_us,cyl1_pos,cyl2_pos,box_present,box_pushed_off,hazard\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%.4f,%.4f,%d,%d,%d\n", static_cast<unsigned long long>(r.time), r.cyl1_pos,
                  r.cyl2_pos, r.box_present, r.box_pushed_off, r.hazard);
    out += buf;
  }
  return out;
}

CycleReport cycle_detector(const std::vector<PlantRow>& rows, Tick duration, Tick stall_grace) {
  CycleReport report;
  bool in_cycle = false;
  bool prev_box = false;
  Tick still_since = 0;
  bool still = false;
  Tick stalled = 0;
  std::optional<Tick> hazard_at;
  auto close_still = [&](Tick end) {
    if (still && end - still_since > stall_grace) stalled += end - still_since;
    still = false;
  };
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.hazard && !hazard_at) {
      hazard_at = r.time;
      close_still(r.time);
    }
    if (hazard_at) break;
    const bool arrived = r.box_present && !prev_box && !r.box_pushed_off && !in_cycle;
    if (arrived) in_cycle = true;
    prev_box = r.box_present;
    if (in_cycle && !arrived && i > 0) {
      const auto& p = rows[i - 1];
      const bool moved = p.cyl1_pos != r.cyl1_pos || p.cyl2_pos != r.cyl2_pos;
      if (moved) {
        close_still(p.time);
      } else if (!still) {
        still = true;
        still_since = p.time;
      }
    }
    if (in_cycle && r.box_pushed_off && r.cyl1_pos == 0 && r.cyl2_pos == 0) {
      close_still(r.time);
      report.completions.push_back(r.time);
      in_cycle = false;
    }
  }
  if (!hazard_at) close_still(duration);
  report.unavailable = stalled + (hazard_at ? duration - std::min(*hazard_at, duration) : 0);
  report.unavailable = std::min(report.unavailable, duration);
  report.availability = duration == 0 ? 1.0 : 1.0 - static_cast<double>(report.unavailable) / static_cast<double>(duration);
  return report;
}

}  // namespace fbguard::scenario
