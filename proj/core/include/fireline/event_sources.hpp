#pragma once

// Shared randomness: the space-time Poisson measure of fire marks, the per-site
// rate-1 growth clocks, and the map from marks to lattice ignitions.

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "fireline/rng.hpp"

namespace fireline {

// A point of the rate-1 space-time Poisson measure, in rescaled units.
struct SpaceTimeMark {
  double t = 0.0;
  double x = 0.0;

  friend bool operator==(const SpaceTimeMark&, const SpaceTimeMark&) = default;
};

// Marks on [0, horizon] x [-half_width, half_width], sorted by t. Times are
// strictly increasing and positions pairwise distinct.
struct MarkSet {
  double horizon = 0.0;
  double half_width = 0.0;
  std::vector<SpaceTimeMark> marks;

  friend bool operator==(const MarkSet&, const MarkSet&) = default;
};

// Builds a MarkSet from explicit marks (fixtures, restrictions). Sorts by time
// and throws DuplicateCoordinateError on repeated t or x, ConfigError on marks
// outside the box.
MarkSet make_mark_set(double horizon, double half_width, std::vector<SpaceTimeMark> marks);

// Homogeneous rate-1 sampling on [0,T] x [-A,A]. Duplicate coordinates are
// redrawn from the same stream.
MarkSet sample_marks(double horizon, double half_width, const SeedSpec& seed);

// Marks restricted to |x| < half_width (and t <= horizon).
MarkSet restrict_marks(const MarkSet& marks, double horizon, double half_width);

// lambda * log(1/lambda): the rescaled width of one lattice site.
double site_width(double lambda);
// log(1/lambda): the rescaled-to-raw time factor.
double time_factor(double lambda);
// floor(A / (lambda log(1/lambda))).
std::int64_t box_half_sites(double half_width, double lambda);
// floor(x / (lambda log(1/lambda))).
std::int64_t site_of(double x, double lambda);
void validate_lambda(double lambda);

struct Ignition {
  double raw_time = 0.0;
  std::int64_t site = 0;

  friend bool operator==(const Ignition&, const Ignition&) = default;
};

struct IgnitionSchedule {
  std::vector<Ignition> events;
};

// Maps (t,x) to (t log(1/lambda), floor(x / (lambda log(1/lambda)))) and drops
// sites outside [-half_sites, half_sites]. The default box is the one derived
// from the mark set's half width.
IgnitionSchedule marks_to_ignitions(const MarkSet& marks, double lambda);
IgnitionSchedule marks_to_ignitions(const MarkSet& marks, double lambda, std::int64_t half_sites);

// Rate-1 Poisson arrivals for one site on [0, horizon]. The stream is keyed by
// (seed, site) only, so the same family is shared by every lambda.
std::vector<double> site_growth_times(std::int64_t site, double horizon, const SeedSpec& seed);

// Sequential cursor over one site's growth arrivals.
class GrowthClock {
 public:
  GrowthClock(const SeedSpec& seed, std::int64_t site) noexcept
      : stream_(seed, site), next_(stream_.next_exponential(1.0)) {}

  [[nodiscard]] double next() const noexcept { return next_; }
  void advance() noexcept { next_ += stream_.next_exponential(1.0); }
  [[nodiscard]] std::uint64_t draws() const noexcept { return stream_.counter(); }

 private:
  CounterStream stream_;
  double next_;
};

void write_marks_csv(std::ostream& out, const MarkSet& marks);
// Reads a `t,x` CSV. The box is supplied by the caller; validation as make_mark_set.
MarkSet read_marks_csv(std::istream& in, double horizon, double half_width);
void write_ignitions_csv(std::ostream& out, const IgnitionSchedule& schedule);

}  // namespace fireline
