#pragma once

// Independent reference implementations used only by the tests: a fixed-step
// lattice simulator, two-sample Kolmogorov-Smirnov and chi-square tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

namespace oracle {

// Forest fire on [-h, h] advanced in steps of dt: every vacant site turns
// occupied with probability dt, then every site ignites with probability
// lambda * dt and burns its whole occupied run.
class NaiveLattice {
 public:
  NaiveLattice(int half_sites, double lambda, double dt)
      : half_(half_sites),
        occupied_(static_cast<std::size_t>(2 * half_sites + 1), 0),
        grow_(threshold(dt)),
        fire_(threshold(lambda * dt)) {}

  template <class Rng>
  void step(Rng& rng) {
    const std::size_t n = occupied_.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (!occupied_[i] && rng() < grow_) occupied_[i] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() < fire_ && occupied_[i]) burn(i);
    }
  }

  template <class Rng>
  void advance(double horizon, double dt, Rng& rng) {
    const auto steps = static_cast<long>(std::llround(horizon / dt));
    for (long s = 0; s < steps; ++s) step(rng);
  }

  [[nodiscard]] const std::vector<std::uint8_t>& occupancy() const { return occupied_; }

  // Size of the occupied run through site i (0 when vacant).
  [[nodiscard]] int cluster_size(int site) const {
    const auto c = static_cast<std::size_t>(site + half_);
    if (!occupied_[c]) return 0;
    std::size_t l = c;
    std::size_t r = c;
    while (l > 0 && occupied_[l - 1]) --l;
    while (r + 1 < occupied_.size() && occupied_[r + 1]) ++r;
    return static_cast<int>(r - l + 1);
  }

 private:
  static std::uint64_t threshold(double p) {
    return static_cast<std::uint64_t>(p * 18446744073709551616.0);
  }
  void burn(std::size_t i) {
    std::size_t l = i;
    while (l > 0 && occupied_[l - 1]) --l;
    for (std::size_t k = l; k < occupied_.size() && occupied_[k]; ++k) occupied_[k] = 0;
  }

  int half_;
  std::vector<std::uint8_t> occupied_;
  std::uint64_t grow_;
  std::uint64_t fire_;
};

// sup |F_a - F_b| over the pooled sample, ties handled by stepping past equal values.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

// Kolmogorov survival function Q(x) = 2 sum (-1)^(k-1) exp(-2 k^2 x^2).
inline double kolmogorov_q(double x) {
  if (x < 1e-3) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

// Asymptotic two-sample p-value with the Stephens small-sample correction.
// With ties (discrete data) the test is conservative.
inline double ks_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
  const double d = ks_statistic(a, b);
  const double ne = static_cast<double>(a.size()) * static_cast<double>(b.size()) /
                    static_cast<double>(a.size() + b.size());
  const double s = std::sqrt(ne);
  return kolmogorov_q((s + 0.12 + 0.11 / s) * d);
}

// Chi-square homogeneity of two count vectors over the same categories.
inline double chi2_homogeneity_pvalue(const std::vector<double>& x, const std::vector<double>& y) {
  double nx = 0.0;
  double ny = 0.0;
  for (double v : x) nx += v;
  for (double v : y) ny += v;
  double stat = 0.0;
  int cells = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double tot = x[k] + y[k];
    if (tot == 0.0) continue;
    const double ex = tot * nx / (nx + ny);
    const double ey = tot * ny / (nx + ny);
    stat += (x[k] - ex) * (x[k] - ex) / ex + (y[k] - ey) * (y[k] - ey) / ey;
    ++cells;
  }
  if (cells < 2) return 1.0;
  boost::math::chi_squared dist(cells - 1);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// Goodness of fit of integer counts against Poisson(mean). Tail bins are
// pooled so every expected count is at least 5.
inline double chi2_poisson_pvalue(const std::vector<long>& counts, double mean) {
  const double n = static_cast<double>(counts.size());
  long top = 0;
  for (long c : counts) top = std::max(top, c);
  std::vector<double> observed(static_cast<std::size_t>(top) + 2, 0.0);
  for (long c : counts) observed[static_cast<std::size_t>(c)] += 1.0;
  std::vector<double> expected(observed.size(), 0.0);
  double cdf = 0.0;
  for (std::size_t k = 0; k + 1 < expected.size(); ++k) {
    const double kk = static_cast<double>(k);
    expected[k] = n * std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
    cdf += expected[k];
  }
  expected.back() = std::max(0.0, n - cdf);

  // Pool from both ends toward the mode.
  std::vector<double> obs;
  std::vector<double> exp;
  double po = 0.0;
  double pe = 0.0;
  for (std::size_t k = 0; k < expected.size(); ++k) {
    po += observed[k];
    pe += expected[k];
    if (pe >= 5.0) {
      obs.push_back(po);
      exp.push_back(pe);
      po = pe = 0.0;
    }
  }
  if (pe > 0.0 || po > 0.0) {
    obs.back() += po;
    exp.back() += pe;
  }
  double stat = 0.0;
  for (std::size_t k = 0; k < obs.size(); ++k) stat += (obs[k] - exp[k]) * (obs[k] - exp[k]) / exp[k];
  boost::math::chi_squared dist(static_cast<double>(obs.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace oracle
