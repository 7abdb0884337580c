#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fbguard/time.hpp"

namespace fbguard::scenario {

enum class Command : std::int64_t { Hold = 0, Extend = 1, Retract = 2 };

std::string_view to_string(Command cmd);

struct PlantParams {
  Tick tick = millis(10);
  double rate = 0.01;  // stroke fraction per tick
  Tick first_box = seconds(5);
  Tick box_period = seconds(5);
  Tick stall_grace = millis(100);
};

struct PlantState {
  double cyl1_pos = 0;
  double cyl2_pos = 0;
  Command cyl1_cmd = Command::Hold;
  Command cyl2_cmd = Command::Hold;
  bool box_present = false;
  bool box_pushed_off = false;
  bool hazard = false;

  bool idle() const { return cyl1_pos == 0 && cyl2_pos == 0 && !box_present; }
  bool operator==(const PlantState&) const = default;
};

/// Applies a command. Commanding cylinder 2 to retract while an un-pushed box
/// sits on it latches the hazard.
void command(PlantState& plant, int cylinder, Command cmd);

/// Moves both cylinders `ticks` steps of `rate` toward their commanded end,
/// then evaluates push-off and hazard. Positions within 1e-9 of an end snap
/// to it.
void plant_step(PlantState& plant, double rate, std::uint64_t ticks = 1);

struct PlantRow {
  Tick time;
  double cyl1_pos;
  double cyl2_pos;
  bool box_present;
  bool box_pushed_off;
  bool hazard;
};

/// CSV with header `time_us,cyl1_pos,cyl2_pos,box_present,box_pushed_off,hazard`.
std::string plant_csv(const std::vector<PlantRow>& rows);

/// Plant with its box-arrival schedule. An arrival only happens when the
/// plant is idle; otherwise that box is counted as blocked.
class Plant {
 public:
  explicit Plant(PlantParams params = {}) : params_(params), next_box_(params.first_box) {}

  /// One tick at time `now`: motion, push-off/hazard, then arrival.
  void step(Tick now);
  void command(int cylinder, Command cmd, Tick now);

  const PlantState& state() const { return state_; }
  const PlantParams& params() const { return params_; }
  const std::vector<PlantRow>& rows() const { return rows_; }
  std::uint64_t arrivals() const { return arrivals_; }
  std::uint64_t blocked_arrivals() const { return blocked_; }
  std::optional<Tick> hazard_time() const { return hazard_time_; }

 private:
  void note_hazard(Tick now);

  PlantParams params_;
  PlantState state_;
  Tick next_box_;
  std::uint64_t arrivals_ = 0;
  std::uint64_t blocked_ = 0;
  std::optional<Tick> hazard_time_;
  std::vector<PlantRow> rows_;
};

struct CycleReport {
  std::vector<Tick> completions;
  Tick unavailable = 0;
  double availability = 1.0;
};

/// Cycles and availability from plant rows. A cycle runs from a box arrival
/// until both cylinders are retracted with the box pushed off. Unavailable
/// time is everything after the hazard latched plus every stretch longer
/// than `stall_grace` in which a cycle is running but nothing moves.
CycleReport cycle_detector(const std::vector<PlantRow>& rows, Tick duration, Tick stall_grace);

}  // namespace fbguard::scenario
