#include "fireline/limit_lffp.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/text_io.hpp"

namespace fireline {

LffpState::LffpState(double half_width) : half_width_(half_width) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError(fmt::format("half width A must be positive, got {}", half_width));
  }
  Breakpoint left;
  left.x = -half_width;
  left.sentinel = true;
  Breakpoint right = left;
  right.x = half_width;
  points_ = {left, right};
  cells_ = {Cell{}};
}

LffpState::Location LffpState::locate(double x) const {
  const auto it = std::lower_bound(points_.begin(), points_.end(), x,
                                   [](const Breakpoint& p, double v) { return p.x < v; });
  const auto index = static_cast<std::size_t>(it - points_.begin());
  if (it != points_.end() && it->x == x) return {index, true};
  return {index - 1, false};
}

bool LffpState::element_blocking(double t, std::size_t element) const {
  return element % 2 == 0 ? points_[element / 2].blocking(t)
                          : cells_[(element - 1) / 2].blocking(t);
}

// Index of the breakpoint carrying L_t for a non-blocking element.
std::size_t LffpState::left_bound(double t, std::size_t element) const {
  std::size_t k = element;
  while (k > 0) {
    --k;
    if (element_blocking(t, k)) return k % 2 == 0 ? k / 2 : (k + 1) / 2;
  }
  return 0;
}

std::size_t LffpState::right_bound(double t, std::size_t element) const {
  const std::size_t last = 2 * points_.size() - 2;
  std::size_t k = element;
  while (k < last) {
    ++k;
    if (element_blocking(t, k)) return k % 2 == 0 ? k / 2 : (k - 1) / 2;
  }
  return points_.size() - 1;
}

void LffpState::check_query(double t, double x) const {
  if (!(t >= time_)) {
    throw DomainError(fmt::format("query at t={} before state time {}", t, time_));
  }
  if (!(x >= -half_width_ && x <= half_width_)) {
    throw DomainError(fmt::format("x={} outside [-{}, {}]", x, half_width_, half_width_));
  }
}

double LffpState::z_at(double t, double x) const {
  check_query(t, x);
  const auto loc = locate(x);
  return loc.at_point ? points_[loc.index].z.at(t) : cells_[loc.index].z.at(t);
}

bool LffpState::z_growing(double t, double x) const {
  check_query(t, x);
  const auto loc = locate(x);
  return loc.at_point ? points_[loc.index].z.below_one(t) : cells_[loc.index].z.below_one(t);
}

double LffpState::h_at(double t, double x) const {
  check_query(t, x);
  const auto loc = locate(x);
  return loc.at_point ? points_[loc.index].h_at(t) : 0.0;
}

ClosedInterval LffpState::cluster_at(double t, double x) const {
  check_query(t, x);
  const auto loc = locate(x);
  const std::size_t element = loc.at_point ? 2 * loc.index : 2 * loc.index + 1;
  if (element_blocking(t, element)) return {x, x};
  return {points_[left_bound(t, element)].x, points_[right_bound(t, element)].x};
}

ClusterMap LffpState::cluster_map(double t) const {
  ClusterMap map;
  const std::size_t elements = 2 * points_.size() - 1;
  map.xs_.reserve(points_.size());
  for (const auto& p : points_) map.xs_.push_back(p.x);
  map.blocked_.resize(elements);
  map.left_.resize(elements);
  map.right_.resize(elements);
  for (std::size_t e = 0; e < elements; ++e) map.blocked_[e] = element_blocking(t, e);

  double edge = -half_width_;
  for (std::size_t e = 0; e < elements; ++e) {
    map.left_[e] = edge;
    if (map.blocked_[e]) edge = map.xs_[e % 2 == 0 ? e / 2 : (e + 1) / 2];
  }
  edge = half_width_;
  for (std::size_t e = elements; e-- > 0;) {
    map.right_[e] = edge;
    if (map.blocked_[e]) edge = map.xs_[e % 2 == 0 ? e / 2 : (e - 1) / 2];
  }
  return map;
}

ClosedInterval ClusterMap::cluster(double x) const {
  if (xs_.empty() || x < xs_.front() || x > xs_.back()) {
    throw DomainError(fmt::format("x={} outside the box", x));
  }
  const auto it = std::lower_bound(xs_.begin(), xs_.end(), x);
  const auto i = static_cast<std::size_t>(it - xs_.begin());
  const std::size_t e = (*it == x) ? 2 * i : 2 * (i - 1) + 1;
  if (blocked_[e]) return {x, x};
  return {left_[e], right_[e]};
}

std::vector<double> LffpState::change_times(double from, double to) const {
  std::vector<double> out;
  auto consider = [&](double s) {
    if (s > from && s < to) out.push_back(s);
  };
  for (const auto& c : cells_) consider(c.z.saturation_time());
  for (const auto& p : points_) {
    consider(p.z.saturation_time());
    if (!p.sentinel) consider(p.barrier_end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EventRecord LffpState::apply_mark(const SpaceTimeMark& mark) {
  const double t = mark.t;
  if (!(t >= time_)) {
    throw DomainError(fmt::format("mark at t={} precedes state time {}", t, time_));
  }
  if (!(mark.x > -half_width_ && mark.x < half_width_)) {
    throw DomainError(fmt::format("mark x={} not inside (-{}, {})", mark.x, half_width_, half_width_));
  }
  const auto loc = locate(mark.x);
  if (loc.at_point) {
    throw DuplicateCoordinateError(
        fmt::format("mark at x={} hits an existing breakpoint", mark.x));
  }
  const std::size_t j = loc.index;
  EventRecord record{mark, FireKind::microscopic, std::nullopt, 0.0};

  if (!cells_[j].z.below_one(t)) {
    // Macroscopic: burn D_{t-}(x).
    record.kind = FireKind::macroscopic;
    record.z_before = 1.0;
    const std::size_t element = 2 * j + 1;
    const std::size_t a = left_bound(t, element);
    const std::size_t b = right_bound(t, element);
    record.burned = ClosedInterval{points_[a].x, points_[b].x};
    for (std::size_t c = a; c < b; ++c) cells_[c].z.reset(t);
    for (std::size_t p = a + 1; p < b; ++p) points_[p].z.reset(t);
    // Endpoints are reset only when they were saturated.
    if (!points_[a].z.below_one(t)) points_[a].z.reset(t);
    if (!points_[b].z.below_one(t)) points_[b].z.reset(t);
  } else {
    // Microscopic: new barrier at x with lifetime Z_{t-}(x).
    const SmallnessClock z = cells_[j].z;
    const double z_before = z.at(t);
    record.z_before = z_before;
    Breakpoint point;
    point.x = mark.x;
    point.z = z;
    point.h_base = z_before;
    point.h_time = t;
    points_.insert(points_.begin() + static_cast<std::ptrdiff_t>(j + 1), point);
    cells_.insert(cells_.begin() + static_cast<std::ptrdiff_t>(j + 1), Cell{z});
  }
  time_ = t;
  return record;
}

void LffpState::check_invariants() const {
  if (points_.size() < 2 || cells_.size() + 1 != points_.size()) {
    throw InvariantError("cells and breakpoints do not tile the box");
  }
  if (points_.front().x != -half_width_ || points_.back().x != half_width_ ||
      !points_.front().sentinel || !points_.back().sentinel) {
    throw InvariantError("sentinels missing at +-A");
  }
  for (std::size_t k = 0; k < points_.size(); ++k) {
    const auto& p = points_[k];
    if (k > 0 && !(points_[k - 1].x < p.x)) throw InvariantError("breakpoints not increasing");
    if (k > 0 && k + 1 < points_.size() && p.sentinel) throw InvariantError("interior sentinel");
    if (!(p.z.z_base >= 0.0 && p.z.z_base <= 1.0)) throw InvariantError("z base out of range");
    if (!(p.h_base >= 0.0 && p.h_base < 1.0)) throw InvariantError("h base out of range");
    if (p.sentinel && p.h_base != 0.0) throw InvariantError("sentinel carries H");
    if (p.h_time > time_ || p.z.z_time > time_) throw InvariantError("base time in the future");
  }
  for (const auto& c : cells_) {
    if (!(c.z.z_base >= 0.0 && c.z.z_base <= 1.0)) throw InvariantError("cell z out of range");
  }
}

Timeline::Timeline(double half_width, double horizon)
    : half_width_(half_width), horizon_(horizon), states_{LffpState(half_width)} {
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw ConfigError(fmt::format("horizon T must be positive, got {}", horizon));
  }
}

void Timeline::append(const SpaceTimeMark& mark) {
  if (mark.t > horizon_) {
    throw DomainError(fmt::format("mark at t={} beyond horizon {}", mark.t, horizon_));
  }
  if (!events_.empty() && !(mark.t > events_.back().mark.t)) {
    throw DuplicateCoordinateError(fmt::format("mark times not strictly increasing at {}", mark.t));
  }
  LffpState next = states_.back();
  events_.push_back(next.apply_mark(mark));
  states_.push_back(std::move(next));
}

const LffpState& Timeline::state_at(double t) const {
  const auto it = std::upper_bound(events_.begin(), events_.end(), t,
                                   [](double v, const EventRecord& e) { return v < e.mark.t; });
  return states_[static_cast<std::size_t>(it - events_.begin())];
}

void Timeline::check_query(double t, double x) const {
  if (!(t >= 0.0 && t <= horizon_)) {
    throw DomainError(fmt::format("t={} outside [0, {}]", t, horizon_));
  }
  if (!(x >= -half_width_ && x <= half_width_)) {
    throw DomainError(fmt::format("x={} outside [-{}, {}]", x, half_width_, half_width_));
  }
}

double Timeline::query_z(double t, double x) const {
  check_query(t, x);
  return state_at(t).z_at(t, x);
}

double Timeline::query_h(double t, double x) const {
  check_query(t, x);
  return state_at(t).h_at(t, x);
}

ClosedInterval Timeline::query_d(double t, double x) const {
  check_query(t, x);
  return state_at(t).cluster_at(t, x);
}

Timeline simulate(double half_width, double horizon, const MarkSet& marks) {
  Timeline timeline(half_width, horizon);
  for (const auto& m : marks.marks) {
    if (m.t > horizon) break;
    timeline.append(m);
  }
  return timeline;
}

LffpState state_at_time(double half_width, const MarkSet& marks, double t) {
  LffpState state(half_width);
  for (const auto& m : marks.marks) {
    if (m.t > t) break;
    state.apply_mark(m);
  }
  return state;
}

void write_timeline_csv(std::ostream& out, const Timeline& timeline) {
  out << "t,x,kind,a,b\n";
  for (const auto& e : timeline.events()) {
    out << format_double(e.mark.t) << ',' << format_double(e.mark.x) << ',';
    if (e.kind == FireKind::macroscopic) {
      out << "macroscopic," << format_double(e.burned->a) << ',' << format_double(e.burned->b);
    } else {
      out << "microscopic,,";
    }
    out << '\n';
  }
}

void write_state_dump(std::ostream& out, const Timeline& timeline, const std::vector<double>& times) {
  for (double t : times) {
    const auto& state = timeline.state_at(t);
    out << format_double(t) << ';';
    const auto points = state.breakpoints();
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (k > 0) out << ',';
      out << format_double(points[k].x) << ':' << format_double(points[k].z.at(t)) << ':'
          << format_double(points[k].h_at(t));
    }
    out << ';';
    const auto cells = state.cells();
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k > 0) out << ',';
      out << format_double(points[k].x) << ':' << format_double(points[k + 1].x) << ':'
          << format_double(cells[k].z.at(t));
    }
    out << '\n';
  }
}

}  // namespace fireline
