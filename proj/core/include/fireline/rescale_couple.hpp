#pragma once

// Rescaling of lattice clusters into the limit's units, the interval and path
// distances, and runs of the lattice and limit processes driven by one shared
// mark set.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fireline/event_sources.hpp"
#include "fireline/lattice_ffp.hpp"
#include "fireline/limit_lffp.hpp"

namespace fireline {

// Empty, or a closed interval [a, b] with a <= b (a == b is a point cluster).
class Interval {
 public:
  Interval() = default;
  static Interval empty() { return Interval(); }
  static Interval closed(double a, double b);
  static Interval from(const ClosedInterval& c) { return closed(c.a, c.b); }

  [[nodiscard]] bool is_empty() const noexcept { return !bounds_; }
  [[nodiscard]] double a() const { return bounds_.value().a; }
  [[nodiscard]] double b() const { return bounds_.value().b; }
  [[nodiscard]] double length() const noexcept { return bounds_ ? bounds_->b - bounds_->a : 0.0; }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  std::optional<ClosedInterval> bounds_;
};

// |a-c| + |b-d|; against the empty set the length of the other; 0 for two empties.
double interval_delta(const Interval& i, const Interval& j);

// [l, r] -> [l s, r s] with s = lambda log(1/lambda); empty stays empty.
Interval rescale_cluster(const Cluster& cluster, double lambda);
// log(1 + #C) / log(1/lambda).
double rescale_size_exponent(const Cluster& cluster, double lambda);

struct TrajectorySegment {
  double t_start = 0.0;
  double z_start = 0.0;
  // 0 or 1 in practice.
  double z_slope = 0.0;
  Interval d;

  friend bool operator==(const TrajectorySegment&, const TrajectorySegment&) = default;
};

// Right-continuous path t -> (z(t), D(t)) on [0, horizon].
struct RescaledTrajectory {
  double x0 = 0.0;
  double horizon = 0.0;
  std::vector<TrajectorySegment> segments;

  [[nodiscard]] double z_at(double t) const;
  [[nodiscard]] Interval d_at(double t) const;
  [[nodiscard]] double segment_end(std::size_t k) const {
    return k + 1 < segments.size() ? segments[k + 1].t_start : horizon;
  }
};

struct PathDistance {
  double sup_z = 0.0;
  double int_d = 0.0;
  [[nodiscard]] double total() const noexcept { return sup_z + int_d; }
};

// sup |z - z'| + integral of delta(D, D') over [0, horizon], evaluated exactly
// on the merged breakpoints.
PathDistance path_distance(const RescaledTrajectory& p, const RescaledTrajectory& q, double horizon);

// Lattice probe record in rescaled time (raw / log(1/lambda)) and space.
RescaledTrajectory rescale_probe(const ProbeRecord& record, double lambda, double horizon);

// Exact (Z_t(x0), D_t(x0)) paths of the A-box limit process for several probes.
// Consecutive segments describing the same path are merged.
std::vector<RescaledTrajectory> limit_trajectories(double half_width, double horizon,
                                                   const MarkSet& marks,
                                                   const std::vector<double>& probes);

struct ProbeComparison {
  double x0 = 0.0;
  RescaledTrajectory lattice;
  RescaledTrajectory limit;
  PathDistance distance;
};

struct CoupledRun {
  double lambda = 0.0;
  double half_width = 0.0;
  double horizon = 0.0;
  std::uint64_t mark_seed = 0;
  std::uint64_t growth_seed = 0;
  MarkSet marks;
  std::vector<ProbeComparison> probes;
};

// Samples one MarkSet on [0,T] x [-A,A] and drives both processes with it:
// the limit directly, the lattice through marks_to_ignitions plus the growth
// clocks of growth_seed.
CoupledRun coupled_run(double lambda, double half_width, double horizon, std::uint64_t mark_seed,
                       std::uint64_t growth_seed, const std::vector<double>& probes);
// Same with a caller-supplied mark set (fixtures, forced empty marks).
CoupledRun coupled_run(double lambda, const MarkSet& marks, std::uint64_t growth_seed,
                       const std::vector<double>& probes);

// CSV `t_start,t_end,z,L,R`; the empty interval is written as L=1, R=0.
void write_trajectory_csv(std::ostream& out, const RescaledTrajectory& trajectory);

}  // namespace fireline
