#pragma once

// Event-driven simulation of the discrete forest fire process on the clamped
// box [-A_lambda, A_lambda]: trees grow at rate 1 on vacant sites, fires hit
// each site at rate lambda and instantly burn the whole occupied run.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fireline/event_sources.hpp"
#include "fireline/rng.hpp"
#include "fireline/vacant_set.hpp"

namespace fireline {

// Closed integer interval [l, r].
struct SiteInterval {
  std::int64_t l = 0;
  std::int64_t r = 0;

  [[nodiscard]] std::int64_t size() const noexcept { return r - l + 1; }
  [[nodiscard]] bool contains(std::int64_t i) const noexcept { return l <= i && i <= r; }
  friend bool operator==(const SiteInterval&, const SiteInterval&) = default;
};

// Empty when the site is vacant.
using Cluster = std::optional<SiteInterval>;

struct BurnEvent {
  double raw_time = 0.0;
  SiteInterval interval;
  std::int64_t trigger = 0;

  friend bool operator==(const BurnEvent&, const BurnEvent&) = default;
};

// Occupancy of [-half_sites, half_sites]. Only vacant sites are stored; the
// occupied clusters are the maximal runs between them.
class LatticeState {
 public:
  explicit LatticeState(std::int64_t half_sites);

  [[nodiscard]] std::int64_t half_sites() const noexcept { return half_sites_; }
  [[nodiscard]] std::int64_t site_count() const noexcept { return 2 * half_sites_ + 1; }
  [[nodiscard]] double raw_time() const noexcept { return raw_time_; }
  [[nodiscard]] bool in_box(std::int64_t i) const noexcept {
    return i >= -half_sites_ && i <= half_sites_;
  }
  [[nodiscard]] bool occupied(std::int64_t i) const;

  [[nodiscard]] Cluster cluster_of(std::int64_t i) const;

  // Returns true when a tree was planted (false on an occupied site).
  bool apply_growth(double raw_time, std::int64_t site);
  std::optional<BurnEvent> apply_ignition(double raw_time, std::int64_t site);

  [[nodiscard]] double vacant_density() const noexcept;
  [[nodiscard]] std::size_t vacant_count() const noexcept { return vacant_.size(); }
  [[nodiscard]] std::vector<SiteInterval> occupied_runs() const;
  [[nodiscard]] std::vector<std::uint8_t> occupancy() const;
  [[nodiscard]] const VacantSet& vacant() const noexcept { return vacant_; }

  // Overwrites the occupancy, sites listed left to right. Test helper.
  void set_occupancy(const std::vector<std::uint8_t>& occupancy);

 private:
  void check_site(std::int64_t i) const;
  void advance_to(double raw_time);

  std::int64_t half_sites_;
  double raw_time_ = 0.0;
  VacantSet vacant_;
};

enum class IgnitionSource { schedule, internal };

struct LatticeConfig {
  double lambda = 0.5;
  std::int64_t half_sites = 1;
  double raw_horizon = 1.0;
  SeedSpec growth_seed{0, "growth"};
  IgnitionSource ignition_source = IgnitionSource::internal;
  // Used when ignition_source == schedule.
  IgnitionSchedule ignitions;
  // Used when ignition_source == internal: rate lambda per site.
  SeedSpec ignition_seed{0, "ignition"};

  void validate() const;
};

// Box from a rescaled half width: half_sites = floor(A / (lambda log(1/lambda))).
LatticeConfig make_lattice_config(double lambda, double half_width, double raw_horizon,
                                  std::uint64_t seed);

struct ProbeSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Cluster cluster;

  friend bool operator==(const ProbeSegment&, const ProbeSegment&) = default;
};

// Piecewise-constant cluster history of one site over [0, raw_horizon].
struct ProbeRecord {
  double x0 = 0.0;
  std::int64_t site = 0;
  std::vector<ProbeSegment> segments;

  friend bool operator==(const ProbeRecord&, const ProbeRecord&) = default;
};

struct Snapshot {
  double raw_time = 0.0;
  std::vector<SiteInterval> runs;
};

struct RunOptions {
  // Rescaled positions; each maps to site floor(x0 / (lambda log(1/lambda))).
  std::vector<double> probes;
  // Raw times in [0, raw_horizon].
  std::vector<double> snapshot_times;
  bool record_burns = true;
  // Full-scan invariant checks after every event (small boxes only).
  bool verify = false;
};

struct RunCounters {
  std::uint64_t growth_generated = 0;
  std::uint64_t growth_applied = 0;
  std::uint64_t ignitions_consumed = 0;
  std::uint64_t ignitions_scheduled = 0;
  std::uint64_t burns = 0;
};

struct LatticeRun {
  std::vector<BurnEvent> burns;
  std::vector<ProbeRecord> probes;
  std::vector<Snapshot> snapshots;
  LatticeState final_state{1};
  RunCounters counters;
};

LatticeRun run(const LatticeConfig& config, const RunOptions& options = {});

// `raw_time,l,r,trigger`
void write_burns_csv(std::ostream& out, const std::vector<BurnEvent>& burns);
// `t_start,t_end,l,r` in raw time; an empty cluster is the pair l=1, r=0.
void write_probe_csv(std::ostream& out, const ProbeRecord& record);
// One line per snapshot: `raw_time;l1-r1,l2-r2,...` listing occupied runs.
void write_snapshots(std::ostream& out, const std::vector<Snapshot>& snapshots);

}  // namespace fireline
