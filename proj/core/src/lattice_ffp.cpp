#include "fireline/lattice_ffp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/text_io.hpp"

namespace fireline {

LatticeState::LatticeState(std::int64_t half_sites)
    : half_sites_(half_sites), vacant_(-half_sites, half_sites, /*full=*/true) {
  if (half_sites < 0) throw ConfigError("LatticeState: negative half width");
}

void LatticeState::check_site(std::int64_t i) const {
  if (!in_box(i)) {
    throw DomainError(fmt::format("site {} outside box [{}, {}]", i, -half_sites_, half_sites_));
  }
}

void LatticeState::advance_to(double raw_time) {
  if (raw_time < raw_time_) {
    throw DomainError(fmt::format("event at time {} precedes state time {}", raw_time, raw_time_));
  }
  raw_time_ = raw_time;
}

bool LatticeState::occupied(std::int64_t i) const {
  check_site(i);
  return !vacant_.contains(i);
}

Cluster LatticeState::cluster_of(std::int64_t i) const {
  check_site(i);
  if (vacant_.contains(i)) return std::nullopt;
  const auto left = vacant_.floor(i - 1);
  const auto right = vacant_.ceil(i + 1);
  return SiteInterval{left ? *left + 1 : -half_sites_, right ? *right - 1 : half_sites_};
}

bool LatticeState::apply_growth(double raw_time, std::int64_t site) {
  check_site(site);
  advance_to(raw_time);
  return vacant_.erase(site);
}

std::optional<BurnEvent> LatticeState::apply_ignition(double raw_time, std::int64_t site) {
  check_site(site);
  advance_to(raw_time);
  const auto cluster = cluster_of(site);
  if (!cluster) return std::nullopt;
  vacant_.insert_range(cluster->l, cluster->r);
  return BurnEvent{raw_time, *cluster, site};
}

double LatticeState::vacant_density() const noexcept {
  return static_cast<double>(vacant_.size()) / static_cast<double>(site_count());
}

std::vector<SiteInterval> LatticeState::occupied_runs() const {
  std::vector<SiteInterval> runs;
  std::int64_t start = -half_sites_;
  vacant_.for_each([&](std::int64_t v) {
    if (v > start) runs.push_back({start, v - 1});
    start = v + 1;
  });
  if (start <= half_sites_) runs.push_back({start, half_sites_});
  return runs;
}

std::vector<std::uint8_t> LatticeState::occupancy() const {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(site_count()), 1);
  vacant_.for_each([&](std::int64_t v) { out[static_cast<std::size_t>(v + half_sites_)] = 0; });
  return out;
}

void LatticeState::set_occupancy(const std::vector<std::uint8_t>& occupancy) {
  if (occupancy.size() != static_cast<std::size_t>(site_count())) {
    throw ConfigError("set_occupancy: length does not match the box");
  }
  for (std::size_t k = 0; k < occupancy.size(); ++k) {
    const auto site = static_cast<std::int64_t>(k) - half_sites_;
    if (occupancy[k]) {
      vacant_.erase(site);
    } else {
      vacant_.insert(site);
    }
  }
}

void LatticeConfig::validate() const {
  validate_lambda(lambda);
  if (half_sites < 1) {
    throw ConfigError(fmt::format(
        "degenerate lattice box: A_lambda = {} < 1 (increase A or lambda)", half_sites));
  }
  if (!(raw_horizon >= 0.0) || !std::isfinite(raw_horizon)) {
    throw ConfigError(fmt::format("raw horizon must be non-negative, got {}", raw_horizon));
  }
  if (ignition_source == IgnitionSource::schedule) {
    for (std::size_t k = 0; k < ignitions.events.size(); ++k) {
      const auto& e = ignitions.events[k];
      if (e.site < -half_sites || e.site > half_sites) {
        throw ConfigError(fmt::format("ignition site {} outside the box", e.site));
      }
      if (k > 0 && e.raw_time < ignitions.events[k - 1].raw_time) {
        throw ConfigError("ignition schedule is not sorted by time");
      }
    }
  }
}

LatticeConfig make_lattice_config(double lambda, double half_width, double raw_horizon,
                                  std::uint64_t seed) {
  LatticeConfig config;
  config.lambda = lambda;
  config.half_sites = box_half_sites(half_width, lambda);
  config.raw_horizon = raw_horizon;
  config.growth_seed = {seed, "growth"};
  config.ignition_seed = {seed, "ignition"};
  config.ignition_source = IgnitionSource::internal;
  return config;
}

namespace {

struct GrowthEntry {
  double t;
  std::int64_t site;
};

struct LaterGrowth {
  bool operator()(const GrowthEntry& a, const GrowthEntry& b) const noexcept {
    return a.t > b.t || (a.t == b.t && a.site > b.site);
  }
};

std::vector<Ignition> internal_ignitions(const LatticeConfig& config) {
  std::vector<Ignition> out;
  const std::int64_t n = 2 * config.half_sites + 1;
  const double rate = config.lambda * static_cast<double>(n);
  CounterStream stream(config.ignition_seed);
  double t = 0.0;
  while (true) {
    t += stream.next_exponential(rate);
    if (t > config.raw_horizon) break;
    auto offset = static_cast<std::int64_t>(stream.next_uniform() * static_cast<double>(n));
    offset = std::min(offset, n - 1);
    out.push_back({t, offset - config.half_sites});
  }
  return out;
}

void verify_state(const LatticeState& state) {
  const auto occ = state.occupancy();
  const std::int64_t h = state.half_sites();
  std::size_t vacant = 0;
  for (std::int64_t i = -h; i <= h; ++i) {
    const bool here = occ[static_cast<std::size_t>(i + h)] != 0;
    const auto c = state.cluster_of(i);
    if (!here) {
      ++vacant;
      if (c) throw InvariantError(fmt::format("vacant site {} reports a cluster", i));
      continue;
    }
    std::int64_t l = i;
    while (l > -h && occ[static_cast<std::size_t>(l - 1 + h)]) --l;
    std::int64_t r = i;
    while (r < h && occ[static_cast<std::size_t>(r + 1 + h)]) ++r;
    if (!c || c->l != l || c->r != r) {
      throw InvariantError(fmt::format("cluster of site {} disagrees with full scan", i));
    }
  }
  if (vacant != state.vacant_count()) throw InvariantError("vacant count out of sync");
}

class ProbeTracker {
 public:
  ProbeTracker(double x0, std::int64_t site) {
    record_.x0 = x0;
    record_.site = site;
  }

  void start(const LatticeState& state) {
    current_ = state.cluster_of(record_.site);
    record_.segments.push_back({0.0, 0.0, current_});
  }

  void on_growth(const LatticeState& state, double t, std::int64_t g) {
    const std::int64_t s = record_.site;
    const bool touches = current_ ? (g == current_->l - 1 || g == current_->r + 1) : g == s;
    if (touches) update(t, state.cluster_of(s));
  }

  void on_burn(double t, const SiteInterval& burned) {
    if (current_ && burned.contains(record_.site)) update(t, std::nullopt);
  }

  ProbeRecord finish(double horizon) && {
    for (std::size_t k = 0; k + 1 < record_.segments.size(); ++k) {
      record_.segments[k].t_end = record_.segments[k + 1].t_start;
    }
    record_.segments.back().t_end = horizon;
    return std::move(record_);
  }

 private:
  void update(double t, Cluster next) {
    if (next == current_) return;
    current_ = next;
    auto& last = record_.segments.back();
    if (last.t_start == t) {
      last.cluster = next;
      if (record_.segments.size() > 1 && record_.segments[record_.segments.size() - 2].cluster == next) {
        record_.segments.pop_back();
      }
    } else {
      record_.segments.push_back({t, t, next});
    }
  }

  ProbeRecord record_;
  Cluster current_;
};

}  // namespace

LatticeRun run(const LatticeConfig& config, const RunOptions& options) {
  config.validate();
  const std::int64_t h = config.half_sites;
  const double horizon = config.raw_horizon;
  const double width = site_width(config.lambda);

  LatticeRun result;
  result.final_state = LatticeState(h);
  LatticeState& state = result.final_state;

  std::vector<ProbeTracker> probes;
  for (double x0 : options.probes) {
    const auto site = static_cast<std::int64_t>(std::floor(x0 / width));
    if (site < -h || site > h) {
      throw ConfigError(fmt::format("probe {} maps to site {} outside the box", x0, site));
    }
    probes.emplace_back(x0, site);
    probes.back().start(state);
  }

  std::vector<double> snapshot_times = options.snapshot_times;
  std::sort(snapshot_times.begin(), snapshot_times.end());
  for (double s : snapshot_times) {
    if (!(s >= 0.0 && s <= horizon)) {
      throw ConfigError(fmt::format("snapshot time {} outside [0, {}]", s, horizon));
    }
  }
  std::size_t next_snapshot = 0;
  auto take_snapshots_before = [&](double t) {
    while (next_snapshot < snapshot_times.size() && snapshot_times[next_snapshot] < t) {
      result.snapshots.push_back({snapshot_times[next_snapshot], state.occupied_runs()});
      ++next_snapshot;
    }
  };

  const std::vector<Ignition> internal =
      config.ignition_source == IgnitionSource::internal ? internal_ignitions(config)
                                                          : std::vector<Ignition>{};
  const std::vector<Ignition>& ignitions =
      config.ignition_source == IgnitionSource::internal ? internal : config.ignitions.events;
  for (const auto& e : ignitions) {
    if (e.raw_time <= horizon) ++result.counters.ignitions_scheduled;
  }

  // Every site starts vacant, so every site has a pending growth arrival.
  std::vector<GrowthClock> clocks;
  clocks.reserve(static_cast<std::size_t>(2 * h + 1));
  std::vector<GrowthEntry> heap_storage;
  heap_storage.reserve(static_cast<std::size_t>(2 * h + 1));
  for (std::int64_t i = -h; i <= h; ++i) {
    clocks.emplace_back(config.growth_seed, i);
    heap_storage.push_back({clocks.back().next(), i});
  }
  std::priority_queue<GrowthEntry, std::vector<GrowthEntry>, LaterGrowth> pending(
      LaterGrowth{}, std::move(heap_storage));
  auto clock_of = [&](std::int64_t site) -> GrowthClock& {
    return clocks[static_cast<std::size_t>(site + h)];
  };

  std::size_t next_ignition = 0;
  while (true) {
    const bool have_growth = !pending.empty() && pending.top().t <= horizon;
    const bool have_ignition =
        next_ignition < ignitions.size() && ignitions[next_ignition].raw_time <= horizon;
    if (!have_growth && !have_ignition) break;

    bool growth_first = have_growth;
    if (have_growth && have_ignition) {
      const auto& g = pending.top();
      const auto& f = ignitions[next_ignition];
      // (time, site, kind) order with growth before ignition.
      growth_first = g.t < f.raw_time || (g.t == f.raw_time && g.site <= f.site);
    }

    if (growth_first) {
      const GrowthEntry g = pending.top();
      pending.pop();
      take_snapshots_before(g.t);
      ++result.counters.growth_generated;
      if (!state.apply_growth(g.t, g.site)) {
        throw InvariantError(fmt::format("growth queued for occupied site {}", g.site));
      }
      ++result.counters.growth_applied;
      clock_of(g.site).advance();
      for (auto& p : probes) p.on_growth(state, g.t, g.site);
      if (options.verify) verify_state(state);
      continue;
    }

    const Ignition f = ignitions[next_ignition++];
    take_snapshots_before(f.raw_time);
    ++result.counters.ignitions_consumed;
    std::optional<SiteInterval> pre_cluster;
    if (options.verify) pre_cluster = state.cluster_of(f.site);
    const auto burn = state.apply_ignition(f.raw_time, f.site);
    if (!burn) continue;
    ++result.counters.burns;
    if (options.record_burns) result.burns.push_back(*burn);
    for (std::int64_t j = burn->interval.l; j <= burn->interval.r; ++j) {
      // Arrivals at occupied sites are consumed without effect. Arrivals at
      // the burn time that order before the ignition also fall here.
      auto& clock = clock_of(j);
      while (clock.next() < f.raw_time || (clock.next() == f.raw_time && j <= f.site)) {
        ++result.counters.growth_generated;
        clock.advance();
      }
      pending.push({clock.next(), j});
    }
    for (auto& p : probes) p.on_burn(f.raw_time, burn->interval);
    if (options.verify) {
      if (!pre_cluster || *pre_cluster != burn->interval) {
        throw InvariantError("burned interval is not the pre-event cluster");
      }
      const auto& iv = burn->interval;
      for (std::int64_t j = iv.l; j <= iv.r; ++j) {
        if (state.occupied(j)) throw InvariantError("burned site still occupied");
      }
      verify_state(state);
    }
  }
  take_snapshots_before(std::numeric_limits<double>::infinity());

  if (result.counters.growth_applied > result.counters.growth_generated ||
      result.counters.ignitions_consumed != result.counters.ignitions_scheduled) {
    throw InvariantError("event accounting mismatch");
  }

  result.probes.reserve(probes.size());
  for (auto& p : probes) result.probes.push_back(std::move(p).finish(horizon));
  return result;
}

void write_burns_csv(std::ostream& out, const std::vector<BurnEvent>& burns) {
  out << "raw_time,l,r,trigger\n";
  for (const auto& b : burns) {
    out << format_double(b.raw_time) << ',' << b.interval.l << ',' << b.interval.r << ',' << b.trigger
        << '\n';
  }
}

void write_probe_csv(std::ostream& out, const ProbeRecord& record) {
  out << "t_start,t_end,l,r\n";
  for (const auto& s : record.segments) {
    out << format_double(s.t_start) << ',' << format_double(s.t_end) << ',';
    if (s.cluster) out << s.cluster->l << ',' << s.cluster->r << '\n';
    else out << "1,0\n";
  }
}

void write_snapshots(std::ostream& out, const std::vector<Snapshot>& snapshots) {
  for (const auto& snap : snapshots) {
    out << format_double(snap.raw_time) << ';';
    for (std::size_t k = 0; k < snap.runs.size(); ++k) {
      if (k > 0) out << ',';
      out << snap.runs[k].l << '-' << snap.runs[k].r;
    }
    out << '\n';
  }
}

}  // namespace fireline
