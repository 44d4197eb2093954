#include "fireline/rescale_couple.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/text_io.hpp"

namespace fireline {

Interval Interval::closed(double a, double b) {
  if (!(a <= b)) throw DomainError(fmt::format("interval [{}, {}] has a > b", a, b));
  Interval out;
  out.bounds_ = ClosedInterval{a, b};
  return out;
}

double interval_delta(const Interval& i, const Interval& j) {
  if (i.is_empty() && j.is_empty()) return 0.0;
  if (i.is_empty()) return j.length();
  if (j.is_empty()) return i.length();
  return std::abs(i.a() - j.a()) + std::abs(i.b() - j.b());
}

Interval rescale_cluster(const Cluster& cluster, double lambda) {
  const double width = site_width(lambda);
  if (!cluster) return Interval::empty();
  return Interval::closed(static_cast<double>(cluster->l) * width,
                          static_cast<double>(cluster->r) * width);
}

double rescale_size_exponent(const Cluster& cluster, double lambda) {
  const double factor = time_factor(lambda);
  if (!cluster) return 0.0;
  return std::log1p(static_cast<double>(cluster->size())) / factor;
}

namespace {

std::size_t segment_index(const std::vector<TrajectorySegment>& segments, double t) {
  const auto it = std::upper_bound(segments.begin(), segments.end(), t,
                                   [](double v, const TrajectorySegment& s) { return v < s.t_start; });
  if (it == segments.begin()) throw DomainError(fmt::format("t={} before trajectory start", t));
  return static_cast<std::size_t>(it - segments.begin()) - 1;
}

double z_on(const TrajectorySegment& s, double t) { return s.z_start + s.z_slope * (t - s.t_start); }

}  // namespace

double RescaledTrajectory::z_at(double t) const { return z_on(segments[segment_index(segments, t)], t); }

Interval RescaledTrajectory::d_at(double t) const { return segments[segment_index(segments, t)].d; }

PathDistance path_distance(const RescaledTrajectory& p, const RescaledTrajectory& q, double horizon) {
  if (p.horizon != horizon || q.horizon != horizon) {
    throw DomainError(fmt::format("trajectory horizons {} and {} do not match {}", p.horizon,
                                  q.horizon, horizon));
  }
  if (p.segments.empty() || q.segments.empty() || p.segments.front().t_start != 0.0 ||
      q.segments.front().t_start != 0.0) {
    throw DomainError("trajectories must start at t = 0");
  }
  std::vector<double> cuts;
  cuts.reserve(p.segments.size() + q.segments.size() + 1);
  for (const auto& s : p.segments) cuts.push_back(s.t_start);
  for (const auto& s : q.segments) cuts.push_back(s.t_start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  while (!cuts.empty() && cuts.back() >= horizon) cuts.pop_back();
  cuts.push_back(horizon);

  PathDistance out;
  std::size_t ip = 0;
  std::size_t iq = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double s = cuts[k];
    const double e = cuts[k + 1];
    while (ip + 1 < p.segments.size() && p.segments[ip + 1].t_start <= s) ++ip;
    while (iq + 1 < q.segments.size() && q.segments[iq + 1].t_start <= s) ++iq;
    const auto& sp = p.segments[ip];
    const auto& sq = q.segments[iq];
    // The difference is affine on [s, e): its sup is at s or at e-.
    out.sup_z = std::max({out.sup_z, std::abs(z_on(sp, s) - z_on(sq, s)),
                          std::abs(z_on(sp, e) - z_on(sq, e))});
    out.int_d += interval_delta(sp.d, sq.d) * (e - s);
  }
  return out;
}

RescaledTrajectory rescale_probe(const ProbeRecord& record, double lambda, double horizon) {
  const double factor = time_factor(lambda);
  RescaledTrajectory out{record.x0, horizon, {}};
  for (const auto& seg : record.segments) {
    const double t = out.segments.empty() ? 0.0 : seg.t_start / factor;
    if (!out.segments.empty() && t >= horizon) break;
    out.segments.push_back(
        {t, rescale_size_exponent(seg.cluster, lambda), 0.0, rescale_cluster(seg.cluster, lambda)});
  }
  return out;
}

std::vector<RescaledTrajectory> limit_trajectories(double half_width, double horizon,
                                                   const MarkSet& marks,
                                                   const std::vector<double>& probes) {
  for (double x0 : probes) {
    if (!(x0 >= -half_width && x0 <= half_width)) {
      throw ConfigError(fmt::format("probe {} outside [-{}, {}]", x0, half_width, half_width));
    }
  }
  std::vector<RescaledTrajectory> out(probes.size());
  for (std::size_t k = 0; k < probes.size(); ++k) out[k] = {probes[k], horizon, {}};

  LffpState state(half_width);
  auto emit = [&](double s) {
    const ClusterMap map = state.cluster_map(s);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const double x0 = probes[k];
      TrajectorySegment seg{s, state.z_at(s, x0), state.z_growing(s, x0) ? 1.0 : 0.0,
                            Interval::from(map.cluster(x0))};
      auto& segs = out[k].segments;
      if (!segs.empty()) {
        const auto& last = segs.back();
        // Same path continuing: drop the redundant cut. The tolerance only
        // absorbs rounding of z; real jumps in z are resets to 0.
        if (last.d == seg.d && last.z_slope == seg.z_slope &&
            std::abs(z_on(last, s) - seg.z_start) <= 1e-12) {
          continue;
        }
      }
      segs.push_back(seg);
    }
  };

  double previous = 0.0;
  emit(0.0);
  for (const auto& m : marks.marks) {
    if (m.t > horizon) break;
    for (double c : state.change_times(previous, m.t)) emit(c);
    state.apply_mark(m);
    emit(m.t);
    previous = m.t;
  }
  for (double c : state.change_times(previous, horizon)) emit(c);
  return out;
}

CoupledRun coupled_run(double lambda, double half_width, double horizon, std::uint64_t mark_seed,
                       std::uint64_t growth_seed, const std::vector<double>& probes) {
  auto run = coupled_run(lambda, sample_marks(horizon, half_width, {mark_seed, "marks"}),
                         growth_seed, probes);
  run.mark_seed = mark_seed;
  return run;
}

CoupledRun coupled_run(double lambda, const MarkSet& marks, std::uint64_t growth_seed,
                       const std::vector<double>& probes) {
  const double factor = time_factor(lambda);
  const double a = marks.half_width;
  const double horizon = marks.horizon;
  for (double x0 : probes) {
    if (!(x0 > -a && x0 < a)) throw ConfigError(fmt::format("probe {} not inside (-{}, {})", x0, a, a));
  }

  CoupledRun out;
  out.lambda = lambda;
  out.half_width = a;
  out.horizon = horizon;
  out.growth_seed = growth_seed;
  out.marks = marks;

  LatticeConfig config;
  config.lambda = lambda;
  config.half_sites = box_half_sites(a, lambda);
  config.raw_horizon = horizon * factor;
  config.growth_seed = {growth_seed, "growth"};
  config.ignition_source = IgnitionSource::schedule;
  config.ignitions = marks_to_ignitions(marks, lambda, config.half_sites);
  RunOptions options;
  options.probes = probes;
  options.record_burns = false;
  const LatticeRun lattice = run(config, options);

  auto limit = limit_trajectories(a, horizon, marks, probes);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    ProbeComparison cmp;
    cmp.x0 = probes[k];
    cmp.lattice = rescale_probe(lattice.probes[k], lambda, horizon);
    cmp.limit = std::move(limit[k]);
    cmp.distance = path_distance(cmp.lattice, cmp.limit, horizon);
    out.probes.push_back(std::move(cmp));
  }
  return out;
}

void write_trajectory_csv(std::ostream& out, const RescaledTrajectory& trajectory) {
  out << "t_start,t_end,z,L,R\n";
  for (std::size_t k = 0; k < trajectory.segments.size(); ++k) {
    const auto& s = trajectory.segments[k];
    out << format_double(s.t_start) << ',' << format_double(trajectory.segment_end(k)) << ','
        << format_double(s.z_start) << ',';
    if (s.d.is_empty()) out << "1,0\n";
    else out << format_double(s.d.a()) << ',' << format_double(s.d.b()) << '\n';
  }
}

}  // namespace fireline
