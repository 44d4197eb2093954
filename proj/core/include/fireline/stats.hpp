#pragma once

// Monte Carlo estimators for cluster-size laws of the lattice and limit
// processes, and the box-localization coincidence experiment. All estimators
// are plain frequencies with binomial standard errors; replica i depends only
// on (seed, i).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fireline {

struct TailEstimate {
  std::string estimator;
  std::optional<double> lambda;
  double t = 0.0;
  std::optional<double> window_a;
  std::optional<double> window_b;
  std::optional<double> threshold_b;
  std::size_t successes = 0;
  std::size_t n = 0;
  double p_hat = 0.0;
  double se = 0.0;
  // False when the parameters sit outside the regime the asymptotic law covers.
  bool in_regime = true;
};

// sqrt(p (1 - p) / n).
double binomial_se(double p_hat, std::size_t n);
TailEstimate make_estimate(std::string estimator, std::size_t successes, std::size_t n);

struct MonteCarloPlan {
  std::size_t replicas = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

// #C(0) at raw time t log(1/lambda) for independent lattice replicas on the
// box of rescaled half width box_a; 0 when the origin is vacant.
std::vector<std::int64_t> lattice_origin_sizes(double lambda, double t, double box_a,
                                               const MonteCarloPlan& plan);

// Frequency of #C(0) in [lambda^-a, lambda^-b].
TailEstimate cluster_window_prob(double lambda, double t, double a, double b, double box_a,
                                 const MonteCarloPlan& plan);
TailEstimate window_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t,
                               double a, double b);

// Frequency of #C(0) >= B / (lambda log(1/lambda)).
TailEstimate macroscopic_tail(double lambda, double t, double threshold, double box_a,
                              const MonteCarloPlan& plan);
TailEstimate tail_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t,
                             double threshold);

// Frequency of the origin being vacant.
TailEstimate vacant_probability(double lambda, double t, double box_a, const MonteCarloPlan& plan);
TailEstimate vacancy_from_sizes(const std::vector<std::int64_t>& sizes, double lambda, double t);

// |D_t(0)| of independent limit processes on [-box_a, box_a], marks on [0, horizon].
std::vector<double> lffp_origin_lengths(double t, double box_a, double horizon,
                                        const MonteCarloPlan& plan);
// Frequency of |D_t(0)| >= B. Requires box_a >= B + 4.
TailEstimate lffp_length_tail(double t, double threshold, double box_a, double horizon,
                              const MonteCarloPlan& plan);
TailEstimate length_tail_from(const std::vector<double>& lengths, double t, double threshold,
                              double box_a);

// Z_t(0) of independent limit processes.
std::vector<double> lffp_origin_z(double t, double box_a, const MonteCarloPlan& plan);

struct AtomCount {
  double z = 0.0;
  std::size_t hits = 0;
};

struct AtomlessReport {
  double t = 0.0;
  std::size_t n = 0;
  std::vector<AtomCount> atoms;
  // One estimate per [a, b] window: frequency of Z_t(0) in [a, b].
  std::vector<TailEstimate> windows;
};

AtomlessReport lffp_z_atomless(double t, const std::vector<double>& z_values,
                               const std::vector<std::pair<double, double>>& windows,
                               double box_a, const MonteCarloPlan& plan);
AtomlessReport atomless_from(const std::vector<double>& z_samples, double t,
                             const std::vector<double>& z_values,
                             const std::vector<std::pair<double, double>>& windows);

struct LocalizationProcess {
  // Empty for the limit process.
  std::optional<double> lattice_lambda;

  static LocalizationProcess limit() { return {}; }
  static LocalizationProcess lattice(double lambda) { return {lambda}; }
  [[nodiscard]] std::string name() const;
};

struct CoincidenceReport {
  std::string process;
  std::optional<double> lambda;
  double half_width = 0.0;
  double horizon = 0.0;
  std::size_t replicas = 0;
  std::size_t coincident = 0;
  double fraction = 0.0;
  double se = 0.0;
};

// Number of probes in the [-A/2, A/2] grid.
inline constexpr std::size_t kLocalizationProbes = 21;

// Whether the A-box and 2A-box processes, sharing all randomness, have the same
// probe trajectories on [-A/2, A/2] throughout [0, T] for one replica seed.
bool localization_coincides(double half_width, double horizon, std::uint64_t replica,
                            const LocalizationProcess& process);
CoincidenceReport localization_coincidence(double half_width, double horizon,
                                           const LocalizationProcess& process,
                                           const MonteCarloPlan& plan);

double least_squares_slope(const std::vector<double>& xs, const std::vector<double>& ys);
double median(std::vector<double> values);

struct MedianSummary {
  double median = 0.0;
  double bootstrap_se = 0.0;
};

// Median with the standard deviation of `resamples` bootstrap medians.
MedianSummary median_with_bootstrap(const std::vector<double>& values, std::size_t resamples,
                                    std::uint64_t seed);

}  // namespace fireline
