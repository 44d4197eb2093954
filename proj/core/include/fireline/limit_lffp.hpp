#pragma once

// Exact simulation of the limit forest fire process on [-A, A].
//
// Between marks nothing random happens: every point's smallness Z grows at
// unit speed up to 1 and every barrier clock H decays at unit speed down to 0.
// The state therefore only stores, per cell and per past mark location, the
// value and the time it was last set. A mark at (t, x) is
//   - macroscopic when Z_{t-}(x) = 1: the whole cluster D_{t-}(x) = [a, b] is
//     reset to Z = 0, the endpoints only if they were saturated;
//   - microscopic otherwise: x becomes a barrier with H_t(x) = Z_{t-}(x).
// Clusters are delimited by points with Z < 1 or H > 0, clamped at +-A.

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "fireline/event_sources.hpp"

namespace fireline {

struct ClosedInterval {
  double a = 0.0;
  double b = 0.0;

  [[nodiscard]] double length() const noexcept { return b - a; }
  friend bool operator==(const ClosedInterval&, const ClosedInterval&) = default;
};

// Z = min(1, z_base + (t - z_time)) seen as a clock that saturates at
// z_time + (1 - z_base). Saturation at exactly t counts as saturated.
struct SmallnessClock {
  double z_base = 0.0;
  double z_time = 0.0;

  [[nodiscard]] double saturation_time() const noexcept { return z_time + (1.0 - z_base); }
  [[nodiscard]] bool below_one(double t) const noexcept { return t < saturation_time(); }
  [[nodiscard]] double at(double t) const noexcept {
    return below_one(t) ? z_base + (t - z_time) : 1.0;
  }
  void reset(double t) noexcept {
    z_base = 0.0;
    z_time = t;
  }
};

struct Breakpoint {
  double x = 0.0;
  SmallnessClock z;
  // H = h_base - (t - h_time) while positive. Sentinels never carry H.
  double h_base = 0.0;
  double h_time = 0.0;
  bool sentinel = false;

  [[nodiscard]] double barrier_end() const noexcept { return h_time + h_base; }
  [[nodiscard]] double h_at(double t) const noexcept {
    return t < barrier_end() ? barrier_end() - t : 0.0;
  }
  [[nodiscard]] bool blocking(double t) const noexcept {
    return z.below_one(t) || t < barrier_end();
  }
};

// Open interval between two consecutive breakpoints; Z is constant on it.
struct Cell {
  SmallnessClock z;

  [[nodiscard]] bool blocking(double t) const noexcept { return z.below_one(t); }
};

enum class FireKind { microscopic, macroscopic };

struct EventRecord {
  SpaceTimeMark mark;
  FireKind kind = FireKind::microscopic;
  // D_{t-}(x) for macroscopic fires.
  std::optional<ClosedInterval> burned;
  // Z_{t-}(x) for microscopic fires (the barrier lifetime).
  double z_before = 0.0;
};

// Per-time partition of [-A, A] into clusters, computed in one sweep.
class ClusterMap {
 public:
  [[nodiscard]] ClosedInterval cluster(double x) const;

 private:
  friend class LffpState;
  std::vector<double> xs_;  // breakpoint coordinates
  // Element 2j is breakpoint j, element 2j+1 is the cell to its right.
  std::vector<char> blocked_;
  std::vector<double> left_;
  std::vector<double> right_;
};

class LffpState {
 public:
  // All of (-A, A) one cell with Z = H = 0 at time 0; sentinels at +-A.
  explicit LffpState(double half_width);

  [[nodiscard]] double time() const noexcept { return time_; }
  [[nodiscard]] double half_width() const noexcept { return half_width_; }
  [[nodiscard]] std::span<const Breakpoint> breakpoints() const noexcept { return points_; }
  [[nodiscard]] std::span<const Cell> cells() const noexcept { return cells_; }

  // Queries at any t >= time(), assuming no mark in (time(), t].
  [[nodiscard]] double z_at(double t, double x) const;
  [[nodiscard]] double h_at(double t, double x) const;
  // True while Z_t(x) < 1, i.e. Z is still increasing at unit speed.
  [[nodiscard]] bool z_growing(double t, double x) const;
  [[nodiscard]] ClosedInterval cluster_at(double t, double x) const;
  [[nodiscard]] ClusterMap cluster_map(double t) const;

  // Times in (from, to) where some Z saturates or some H expires: the only
  // times at which clusters can change between marks.
  [[nodiscard]] std::vector<double> change_times(double from, double to) const;

  EventRecord apply_mark(const SpaceTimeMark& mark);

  // Throws InvariantError on a malformed state.
  void check_invariants() const;

 private:
  struct Location {
    std::size_t index;
    bool at_point;  // else inside cell `index`
  };
  [[nodiscard]] Location locate(double x) const;
  [[nodiscard]] bool element_blocking(double t, std::size_t element) const;
  [[nodiscard]] std::size_t left_bound(double t, std::size_t element) const;
  [[nodiscard]] std::size_t right_bound(double t, std::size_t element) const;
  void check_query(double t, double x) const;

  double half_width_;
  double time_ = 0.0;
  std::vector<Breakpoint> points_;
  std::vector<Cell> cells_;
};

// Full event history of one A-box realization, queryable at any (t, x).
class Timeline {
 public:
  Timeline(double half_width, double horizon);

  [[nodiscard]] double half_width() const noexcept { return half_width_; }
  [[nodiscard]] double horizon() const noexcept { return horizon_; }
  [[nodiscard]] const std::vector<EventRecord>& events() const noexcept { return events_; }
  // Right-continuous state in force at time t.
  [[nodiscard]] const LffpState& state_at(double t) const;
  [[nodiscard]] const LffpState& state_after(std::size_t event) const { return states_.at(event + 1); }

  [[nodiscard]] double query_z(double t, double x) const;
  [[nodiscard]] double query_h(double t, double x) const;
  [[nodiscard]] ClosedInterval query_d(double t, double x) const;

  void append(const SpaceTimeMark& mark);

 private:
  void check_query(double t, double x) const;

  double half_width_;
  double horizon_;
  std::vector<EventRecord> events_;
  // states_[0] is the initial state; states_[k+1] follows events_[k].
  std::vector<LffpState> states_;
};

// Folds apply_mark over the marks of [0, T] x (-A, A).
Timeline simulate(double half_width, double horizon, const MarkSet& marks);

// Only the state at time t (marks after t are ignored). Cheaper than a Timeline.
LffpState state_at_time(double half_width, const MarkSet& marks, double t);

void write_timeline_csv(std::ostream& out, const Timeline& timeline);
// One line per time: `t;x:Z:H,...;left:right:Z,...` with values evaluated at t.
void write_state_dump(std::ostream& out, const Timeline& timeline, const std::vector<double>& times);

}  // namespace fireline
