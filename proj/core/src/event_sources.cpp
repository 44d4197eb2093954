#include "fireline/event_sources.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/text_io.hpp"

namespace fireline {

namespace {

void validate_box(double horizon, double half_width) {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError(fmt::format("horizon T must be positive, got {}", horizon));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError(fmt::format("half width A must be positive, got {}", half_width));
  }
}

}  // namespace

MarkSet make_mark_set(double horizon, double half_width, std::vector<SpaceTimeMark> marks) {
  validate_box(horizon, half_width);
  std::stable_sort(marks.begin(), marks.end(),
                   [](const SpaceTimeMark& a, const SpaceTimeMark& b) { return a.t < b.t; });
  std::vector<double> xs;
  xs.reserve(marks.size());
  for (std::size_t i = 0; i < marks.size(); ++i) {
    const auto& m = marks[i];
    if (!(m.t >= 0.0 && m.t <= horizon) || !(m.x >= -half_width && m.x <= half_width)) {
      throw ConfigError(fmt::format("mark ({}, {}) outside [0,{}]x[-{},{}]", m.t, m.x, horizon,
                                    half_width, half_width));
    }
    if (i > 0 && marks[i - 1].t == m.t) {
      throw DuplicateCoordinateError(fmt::format("two marks at time {}", m.t));
    }
    xs.push_back(m.x);
  }
  std::sort(xs.begin(), xs.end());
  if (auto it = std::adjacent_find(xs.begin(), xs.end()); it != xs.end()) {
    throw DuplicateCoordinateError(fmt::format("two marks at position {}", *it));
  }
  return MarkSet{horizon, half_width, std::move(marks)};
}

MarkSet sample_marks(double horizon, double half_width, const SeedSpec& seed) {
  validate_box(horizon, half_width);
  CounterStream stream(seed);
  const double rate = 2.0 * half_width;
  MarkSet out{horizon, half_width, {}};
  std::unordered_set<double> seen_x;
  double t = 0.0;
  while (true) {
    const double next_t = t + stream.next_exponential(rate);
    if (next_t > horizon) break;
    double x = half_width * (2.0 * stream.next_uniform() - 1.0);
    while (seen_x.contains(x)) x = half_width * (2.0 * stream.next_uniform() - 1.0);
    if (next_t == t && !out.marks.empty()) continue;  // coincident time: redraw the gap
    seen_x.insert(x);
    out.marks.push_back({next_t, x});
    t = next_t;
  }
  return out;
}

MarkSet restrict_marks(const MarkSet& marks, double horizon, double half_width) {
  validate_box(horizon, half_width);
  MarkSet out{horizon, half_width, {}};
  for (const auto& m : marks.marks) {
    if (m.t <= horizon && m.x > -half_width && m.x < half_width) out.marks.push_back(m);
  }
  return out;
}

void validate_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ConfigError(fmt::format(
        "lambda must lie in (0,1) so that log(1/lambda) > 0, got {}", lambda));
  }
}

double time_factor(double lambda) {
  validate_lambda(lambda);
  return std::log(1.0 / lambda);
}

double site_width(double lambda) { return lambda * time_factor(lambda); }

std::int64_t box_half_sites(double half_width, double lambda) {
  return static_cast<std::int64_t>(std::floor(half_width / site_width(lambda)));
}

std::int64_t site_of(double x, double lambda) {
  return static_cast<std::int64_t>(std::floor(x / site_width(lambda)));
}

IgnitionSchedule marks_to_ignitions(const MarkSet& marks, double lambda) {
  return marks_to_ignitions(marks, lambda, box_half_sites(marks.half_width, lambda));
}

IgnitionSchedule marks_to_ignitions(const MarkSet& marks, double lambda, std::int64_t half_sites) {
  const double factor = time_factor(lambda);
  const double width = lambda * factor;
  IgnitionSchedule out;
  out.events.reserve(marks.marks.size());
  for (const auto& m : marks.marks) {
    const auto site = static_cast<std::int64_t>(std::floor(m.x / width));
    if (site < -half_sites || site > half_sites) continue;
    out.events.push_back({m.t * factor, site});
  }
  return out;
}

std::vector<double> site_growth_times(std::int64_t site, double horizon, const SeedSpec& seed) {
  if (!(horizon > 0.0)) {
    throw ConfigError(fmt::format("growth horizon must be positive, got {}", horizon));
  }
  std::vector<double> out;
  for (GrowthClock clock(seed, site); clock.next() <= horizon; clock.advance()) {
    out.push_back(clock.next());
  }
  return out;
}

void write_marks_csv(std::ostream& out, const MarkSet& marks) {
  out << "t,x\n";
  for (const auto& m : marks.marks) out << format_double(m.t) << ',' << format_double(m.x) << '\n';
}

MarkSet read_marks_csv(std::istream& in, double horizon, double half_width) {
  std::string line;
  std::vector<SpaceTimeMark> marks;
  bool header = true;
  while (std::getline(in, line)) {
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    if (header) {
      header = false;
      if (body != "t,x") throw ConfigError(fmt::format("expected header 't,x', got '{}'", body));
      continue;
    }
    const auto fields = split(body, ',');
    if (fields.size() != 2) throw ConfigError(fmt::format("malformed mark line '{}'", body));
    marks.push_back({parse_double(fields[0]), parse_double(fields[1])});
  }
  if (header) throw ConfigError("marks file is empty");
  return make_mark_set(horizon, half_width, std::move(marks));
}

void write_ignitions_csv(std::ostream& out, const IgnitionSchedule& schedule) {
  out << "raw_time,site\n";
  for (const auto& e : schedule.events) out << format_double(e.raw_time) << ',' << e.site << '\n';
}

}  // namespace fireline
