#include <doctest.h>

#include <cmath>

#include "fireline/errors.hpp"
#include "fireline/stats.hpp"

using namespace fireline;

TEST_CASE("binomial standard error") {
  CHECK(binomial_se(0.0, 10) == 0.0);
  CHECK(binomial_se(1.0, 10) == 0.0);
  CHECK(binomial_se(0.5, 100) == doctest::Approx(0.05));
  for (double p : {0.1, 0.3, 0.49, 0.51, 0.9}) CHECK(binomial_se(p, 100) < binomial_se(0.5, 100));
  const auto e = make_estimate("x", 3, 12);
  CHECK(e.p_hat == 0.25);
  CHECK(e.n == 12);
}

TEST_CASE("estimators are exact recounts of the stored sizes") {
  const MonteCarloPlan plan{.replicas = 300, .seed = 4, .threads = 2};
  const double lambda = 1e-2;
  const auto sizes = lattice_origin_sizes(lambda, 3.0, 5.0, plan);
  REQUIRE(sizes.size() == 300);

  std::size_t vacant = 0;
  std::size_t window = 0;
  std::size_t tail = 0;
  const double lo = std::pow(lambda, -0.2);
  const double hi = std::pow(lambda, -0.6);
  const double big = 1.0 / (lambda * std::log(1.0 / lambda));
  for (auto s : sizes) {
    vacant += s == 0;
    window += s >= lo && s <= hi;
    tail += static_cast<double>(s) >= big;
  }
  CHECK(vacancy_from_sizes(sizes, lambda, 3.0).successes == vacant);
  CHECK(window_from_sizes(sizes, lambda, 3.0, 0.2, 0.6).successes == window);
  CHECK(tail_from_sizes(sizes, lambda, 3.0, 1.0).successes == tail);
  CHECK(vacant_probability(lambda, 3.0, 5.0, plan).p_hat ==
        static_cast<double>(vacant) / 300.0);
}

TEST_CASE("replica results depend only on (seed, index)") {
  const auto a = lattice_origin_sizes(1e-2, 2.0, 5.0, {.replicas = 20, .seed = 6, .threads = 1});
  const auto b = lattice_origin_sizes(1e-2, 2.0, 5.0, {.replicas = 40, .seed = 6, .threads = 3});
  for (std::size_t k = 0; k < 20; ++k) CHECK(a[k] == b[k]);
  const auto la = lffp_origin_lengths(2.0, 6.0, 2.5, {.replicas = 30, .seed = 2, .threads = 1});
  const auto lb = lffp_origin_lengths(2.0, 6.0, 2.5, {.replicas = 60, .seed = 2, .threads = 2});
  for (std::size_t k = 0; k < 30; ++k) CHECK(la[k] == lb[k]);
}

TEST_CASE("lattice estimator edge cases") {
  const MonteCarloPlan plan{.replicas = 100, .seed = 1, .threads = 1};
  CHECK(vacant_probability(1e-2, 0.0, 5.0, plan).p_hat == 1.0);
  CHECK(cluster_window_prob(1e-2, 0.0, 0.1, 0.3, 5.0, plan).p_hat == 0.0);
  CHECK(macroscopic_tail(1e-2, 3.0, 11.0, 5.0, plan).p_hat == 0.0);
  CHECK_THROWS_AS(cluster_window_prob(1e-2, 3.0, 0.5, 0.3, 5.0, plan), ConfigError);
  CHECK_THROWS_AS(vacant_probability(1e-2, 3.0, 5.0, {.replicas = 0}), ConfigError);
  CHECK_FALSE(cluster_window_prob(1e-2, 1.0, 0.1, 0.3, 5.0, plan).in_regime);

  // A window narrower than one integer holds no cluster size.
  const auto narrow = cluster_window_prob(1e-2, 3.0, 0.51, 0.5101, 5.0, plan);
  CHECK(narrow.p_hat == 0.0);
}

TEST_CASE("macroscopic tail decays with B") {
  const MonteCarloPlan plan{.replicas = 600, .seed = 3, .threads = 1};
  const auto sizes = lattice_origin_sizes(1e-3, 3.0, 5.0, plan);
  std::vector<double> bs{1.0, 2.0, 4.0};
  std::vector<double> logs;
  for (double b : bs) {
    const auto e = tail_from_sizes(sizes, 1e-3, 3.0, b);
    REQUIRE(e.p_hat > 0.0);
    logs.push_back(std::log(e.p_hat));
  }
  CHECK(least_squares_slope(bs, logs) < 0.0);
  CHECK(tail_from_sizes(sizes, 1e-3, 3.0, 1e-9).p_hat > 0.2);
}

TEST_CASE("limit length tail") {
  const MonteCarloPlan plan{.replicas = 500, .seed = 5, .threads = 1};
  CHECK(lffp_length_tail(0.5, 1.0, 6.0, 1.0, plan).p_hat == 0.0);
  CHECK_THROWS_AS(lffp_length_tail(2.0, 8.0, 10.0, 2.5, plan), ConfigError);
  const auto e = lffp_length_tail(2.0, 8.0, 12.0, 2.5, plan);
  CHECK(e.p_hat <= 2.0 * std::exp(-1.0) + 3.0 * e.se);
}

TEST_CASE("atomlessness report") {
  const MonteCarloPlan plan{.replicas = 200, .seed = 7, .threads = 1};
  const auto early = lffp_z_atomless(0.7, {0.7}, {{0.6, 0.8}}, 5.0, plan);
  REQUIRE(early.atoms.size() == 1);
  CHECK(early.atoms[0].hits == 200);
  CHECK(early.windows[0].p_hat == 1.0);

  const auto late = lffp_z_atomless(3.0, {0.25, 0.5, 0.75}, {{0.1, 0.3}, {0.5, 0.7}}, 5.0, plan);
  for (const auto& atom : late.atoms) CHECK(atom.hits == 0);
  CHECK(late.windows.size() == 2);
}

TEST_CASE("localization") {
  CHECK_THROWS_AS(localization_coincidence(1.0, 3.0, LocalizationProcess::limit(), {.replicas = 1}),
                  ConfigError);
  const auto r = localization_coincidence(4.0, 0.9, LocalizationProcess::limit(), {.replicas = 20, .seed = 1});
  // Before time 1 no fire can be macroscopic, so nothing propagates.
  CHECK(r.fraction == 1.0);
  const auto l = localization_coincidence(2.0, 3.0, LocalizationProcess::lattice(1e-2),
                                          {.replicas = 20, .seed = 1});
  CHECK(l.fraction >= 0.0);
  CHECK(l.fraction <= 1.0);
  CHECK(l.process == "lattice");
  CHECK(localization_coincides(2.0, 3.0, 77, LocalizationProcess::limit()) ==
        localization_coincides(2.0, 3.0, 77, LocalizationProcess::limit()));
}

TEST_CASE("least squares and medians") {
  CHECK(least_squares_slope({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2.0));
  CHECK(least_squares_slope({0, 1, 2, 3}, {1, 0, -1, -2}) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(least_squares_slope({1}, {1}), ConfigError);
  CHECK_THROWS_AS(least_squares_slope({1, 1}, {1, 2}), ConfigError);
  CHECK(median({3, 1, 2}) == 2.0);
  CHECK(median({4, 1, 2, 3}) == 2.5);
  CHECK_THROWS_AS(median({}), ConfigError);
  const auto m = median_with_bootstrap({1, 2, 3, 4, 5, 6, 7, 8, 9}, 500, 1);
  CHECK(m.median == 5.0);
  CHECK(m.bootstrap_se > 0.0);
  CHECK(median_with_bootstrap({1, 2, 3, 4, 5}, 200, 1).bootstrap_se ==
        median_with_bootstrap({1, 2, 3, 4, 5}, 200, 1).bootstrap_se);
}
