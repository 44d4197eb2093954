#include "fireline/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "fireline/errors.hpp"
#include "fireline/event_sources.hpp"
#include "fireline/lattice_ffp.hpp"
#include "fireline/limit_lffp.hpp"
#include "fireline/parallel.hpp"
#include "fireline/rescale_couple.hpp"
#include "fireline/rng.hpp"

namespace fireline {

double binomial_se(double p_hat, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(n));
}

TailEstimate make_estimate(std::string estimator, std::size_t successes, std::size_t n) {
  TailEstimate e;
  e.estimator = std::move(estimator);
  e.successes = successes;
  e.n = n;
  e.p_hat = n == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(n);
  e.se = binomial_se(e.p_hat, n);
  return e;
}

namespace {

void require_replicas(const MonteCarloPlan& plan) {
  if (plan.replicas == 0) throw ConfigError("replica count must be positive");
}

void require_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError(fmt::format("t must be >= 0, got {}", t));
}

void require_window(double a, double b) {
  if (!(a >= 0.0 && a < b && b < 1.0)) {
    throw ConfigError(fmt::format("window must satisfy 0 <= a < b < 1, got ({}, {})", a, b));
  }
}

}  // namespace

std::vector<std::int64_t> lattice_origin_sizes(double lambda, double t, double box_a,
                                               const MonteCarloPlan& plan) {
  require_replicas(plan);
  require_time(t);
  const double raw_horizon = t * time_factor(lambda);
  std::vector<std::int64_t> sizes(plan.replicas, 0);
  {
    // Validate the box once up front so every replica fails the same way.
    make_lattice_config(lambda, box_a, raw_horizon, 0).validate();
  }
  RunOptions options;
  options.record_burns = false;
  parallel_for(plan.replicas, plan.threads, [&](std::size_t i) {
    const auto config = make_lattice_config(lambda, box_a, raw_horizon, replica_seed(plan.seed, i));
    const LatticeRun result = run(config, options);
    const auto cluster = result.final_state.cluster_of(0);
    sizes[i] = cluster ? cluster->size() : 0;
  });
  return sizes;
}

TailEstimate window_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t,
                               double a, double b) {
  require_window(a, b);
  const double lo = std::pow(lambda, -a);
  const double hi = std::pow(lambda, -b);
  const auto hits = static_cast<std::size_t>(std::count_if(sizes.begin(), sizes.end(), [&](std::int64_t s) {
    const auto v = static_cast<double>(s);
    return v >= lo && v <= hi;
  }));
  auto e = make_estimate("cluster_window", hits, sizes.size());
  e.lambda = lambda;
  e.t = t;
  e.window_a = a;
  e.window_b = b;
  e.in_regime = t >= 2.5;
  return e;
}

TailEstimate cluster_window_prob(double lambda, double t, double a, double b, double box_a,
                                 const MonteCarloPlan& plan) {
  require_window(a, b);
  return window_from_sizes(lattice_origin_sizes(lambda, t, box_a, plan), lambda, t, a, b);
}

TailEstimate tail_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t,
                             double threshold) {
  if (!(threshold > 0.0)) throw ConfigError(fmt::format("B must be positive, got {}", threshold));
  const double min_size = threshold / site_width(lambda);
  const auto hits = static_cast<std::size_t>(std::count_if(
      sizes.begin(), sizes.end(), [&](std::int64_t s) { return static_cast<double>(s) >= min_size; }));
  auto e = make_estimate("macroscopic_tail", hits, sizes.size());
  e.lambda = lambda;
  e.t = t;
  e.threshold_b = threshold;
  e.in_regime = t >= 1.5;
  return e;
}

TailEstimate macroscopic_tail(double lambda, double t, double threshold, double box_a,
                              const MonteCarloPlan& plan) {
  if (!(threshold > 0.0)) throw ConfigError(fmt::format("B must be positive, got {}", threshold));
  return tail_from_sizes(lattice_origin_sizes(lambda, t, box_a, plan), lambda, t, threshold);
}

TailEstimate vacancy_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t) {
  const auto hits = static_cast<std::size_t>(std::count(sizes.begin(), sizes.end(), 0));
  auto e = make_estimate("vacant_probability", hits, sizes.size());
  e.lambda = lambda;
  e.t = t;
  e.in_regime = t >= 3.0;
  return e;
}

TailEstimate vacant_probability(double lambda, double t, double box_a, const MonteCarloPlan& plan) {
  return vacancy_from_sizes(lattice_origin_sizes(lambda, t, box_a, plan), lambda, t);
}

std::vector<double> lffp_origin_lengths(double t, double box_a, double horizon,
                                        const MonteCarloPlan& plan) {
  require_replicas(plan);
  require_time(t);
  if (t > horizon) throw ConfigError(fmt::format("t={} beyond horizon T={}", t, horizon));
  std::vector<double> lengths(plan.replicas, 0.0);
  parallel_for(plan.replicas, plan.threads, [&](std::size_t i) {
    const auto marks = sample_marks(horizon, box_a, {replica_seed(plan.seed, i), "marks"});
    lengths[i] = state_at_time(box_a, marks, t).cluster_at(t, 0.0).length();
  });
  return lengths;
}

TailEstimate length_tail_from(const std::vector<double>& lengths, double t, double threshold,
                              double box_a) {
  if (!(threshold > 0.0)) throw ConfigError(fmt::format("B must be positive, got {}", threshold));
  if (box_a < threshold + 4.0) {
    throw ConfigError(fmt::format("box half width {} too small for B={} (need A >= B + 4)", box_a,
                                  threshold));
  }
  const auto hits = static_cast<std::size_t>(std::count_if(
      lengths.begin(), lengths.end(), [&](double len) { return len >= threshold; }));
  auto e = make_estimate("lffp_length_tail", hits, lengths.size());
  e.t = t;
  e.threshold_b = threshold;
  e.in_regime = t >= 1.5;
  return e;
}

TailEstimate lffp_length_tail(double t, double threshold, double box_a, double horizon,
                              const MonteCarloPlan& plan) {
  if (box_a < threshold + 4.0) {
    throw ConfigError(fmt::format("box half width {} too small for B={} (need A >= B + 4)", box_a,
                                  threshold));
  }
  return length_tail_from(lffp_origin_lengths(t, box_a, horizon, plan), t, threshold, box_a);
}

std::vector<double> lffp_origin_z(double t, double box_a, const MonteCarloPlan& plan) {
  require_replicas(plan);
  if (!(t > 0.0)) throw ConfigError(fmt::format("t must be positive, got {}", t));
  std::vector<double> values(plan.replicas, 0.0);
  parallel_for(plan.replicas, plan.threads, [&](std::size_t i) {
    const auto marks = sample_marks(t, box_a, {replica_seed(plan.seed, i), "marks"});
    values[i] = state_at_time(box_a, marks, t).z_at(t, 0.0);
  });
  return values;
}

AtomlessReport atomless_from(const std::vector<double>& z_samples, double t,
                             const std::vector<double>& z_values,
                             const std::vector<std::pair<double, double>>& windows) {
  AtomlessReport report;
  report.t = t;
  report.n = z_samples.size();
  for (double z : z_values) {
    const auto hits = static_cast<std::size_t>(std::count(z_samples.begin(), z_samples.end(), z));
    report.atoms.push_back({z, hits});
  }
  for (const auto& [a, b] : windows) {
    if (!(a >= 0.0 && a < b && b <= 1.0)) {
      throw ConfigError(fmt::format("window must satisfy 0 <= a < b <= 1, got ({}, {})", a, b));
    }
    const auto hits = static_cast<std::size_t>(std::count_if(
        z_samples.begin(), z_samples.end(), [&](double z) { return z >= a && z <= b; }));
    auto e = make_estimate("lffp_z_window", hits, z_samples.size());
    e.t = t;
    e.window_a = a;
    e.window_b = b;
    e.in_regime = t >= 2.5;
    report.windows.push_back(std::move(e));
  }
  return report;
}

AtomlessReport lffp_z_atomless(double t, const std::vector<double>& z_values,
                               const std::vector<std::pair<double, double>>& windows,
                               double box_a, const MonteCarloPlan& plan) {
  return atomless_from(lffp_origin_z(t, box_a, plan), t, z_values, windows);
}

std::string LocalizationProcess::name() const {
  return lattice_lambda ? "lattice" : "limit";
}

namespace {

std::vector<double> probe_grid(double half_width) {
  std::vector<double> probes(kLocalizationProbes);
  for (std::size_t k = 0; k < kLocalizationProbes; ++k) {
    probes[k] = -half_width / 2.0 +
                half_width * static_cast<double>(k) / static_cast<double>(kLocalizationProbes - 1);
  }
  return probes;
}

}  // namespace

bool localization_coincides(double half_width, double horizon, std::uint64_t replica,
                            const LocalizationProcess& process) {
  const auto probes = probe_grid(half_width);
  const MarkSet big_marks = sample_marks(horizon, 2.0 * half_width, {replica, "marks"});

  if (!process.lattice_lambda) {
    const MarkSet small_marks = restrict_marks(big_marks, horizon, half_width);
    const auto big = limit_trajectories(2.0 * half_width, horizon, big_marks, probes);
    const auto small = limit_trajectories(half_width, horizon, small_marks, probes);
    for (std::size_t k = 0; k < probes.size(); ++k) {
      if (big[k].segments != small[k].segments) return false;
    }
    return true;
  }

  const double lambda = *process.lattice_lambda;
  const double raw_horizon = horizon * time_factor(lambda);
  auto lattice_probes = [&](double box) {
    LatticeConfig config;
    config.lambda = lambda;
    config.half_sites = box_half_sites(box, lambda);
    config.raw_horizon = raw_horizon;
    config.growth_seed = {replica, "growth"};
    config.ignition_source = IgnitionSource::schedule;
    config.ignitions = marks_to_ignitions(big_marks, lambda, config.half_sites);
    RunOptions options;
    options.probes = probes;
    options.record_burns = false;
    return run(config, options).probes;
  };
  return lattice_probes(2.0 * half_width) == lattice_probes(half_width);
}

CoincidenceReport localization_coincidence(double half_width, double horizon,
                                           const LocalizationProcess& process,
                                           const MonteCarloPlan& plan) {
  require_replicas(plan);
  if (!(half_width >= 2.0)) {
    throw ConfigError(fmt::format("localization needs A >= 2, got {}", half_width));
  }
  if (!(horizon > 0.0)) throw ConfigError(fmt::format("T must be positive, got {}", horizon));
  if (process.lattice_lambda) validate_lambda(*process.lattice_lambda);

  std::vector<char> hits(plan.replicas, 0);
  parallel_for(plan.replicas, plan.threads, [&](std::size_t i) {
    hits[i] = localization_coincides(half_width, horizon, replica_seed(plan.seed, i), process) ? 1 : 0;
  });
  CoincidenceReport report;
  report.process = process.name();
  report.lambda = process.lattice_lambda;
  report.half_width = half_width;
  report.horizon = horizon;
  report.replicas = plan.replicas;
  report.coincident = static_cast<std::size_t>(std::count(hits.begin(), hits.end(), 1));
  report.fraction = static_cast<double>(report.coincident) / static_cast<double>(plan.replicas);
  report.se = binomial_se(report.fraction, plan.replicas);
  return report;
}

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw ConfigError("slope needs at least two paired points");
  }
  const auto n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw ConfigError("slope undefined for constant abscissae");
  return sxy / sxx;
}

double median(std::vector<double> values) {
  if (values.empty()) throw ConfigError("median of an empty sample");
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

MedianSummary median_with_bootstrap(const std::vector<double>& values, std::size_t resamples,
                                    std::uint64_t seed) {
  MedianSummary out;
  out.median = median(values);
  if (resamples < 2) return out;
  CounterStream stream(seed, "bootstrap");
  const std::size_t n = values.size();
  std::vector<double> draw(n);
  std::vector<double> medians;
  medians.reserve(resamples);
  for (std::size_t r = 0; r < resamples; ++r) {
    for (auto& v : draw) {
      auto k = static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(n));
      v = values[std::min(k, n - 1)];
    }
    medians.push_back(median(draw));
  }
  const double mean = std::accumulate(medians.begin(), medians.end(), 0.0) / static_cast<double>(resamples);
  double ss = 0.0;
  for (double m : medians) ss += (m - mean) * (m - mean);
  out.bootstrap_se = std::sqrt(ss / static_cast<double>(resamples - 1));
  return out;
}

}  // namespace fireline
