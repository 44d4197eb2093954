#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fireline/errors.hpp"
#include "fireline/rescale_couple.hpp"

using namespace fireline;

namespace {

RescaledTrajectory constant_path(double z, Interval d, double horizon, double slope = 0.0) {
  return {0.0, horizon, {{0.0, z, slope, d}}};
}

}  // namespace

TEST_CASE("interval_delta") {
  CHECK(interval_delta(Interval::closed(0, 1), Interval::closed(0, 1)) == 0.0);
  CHECK(interval_delta(Interval::closed(0, 1), Interval::closed(0.5, 2)) == 1.5);
  CHECK(interval_delta(Interval::closed(2, 5), Interval::empty()) == 3.0);
  CHECK(interval_delta(Interval::empty(), Interval::closed(2, 5)) == 3.0);
  CHECK(interval_delta(Interval::empty(), Interval::empty()) == 0.0);
  CHECK_THROWS_AS(Interval::closed(1, 0), DomainError);
}

TEST_CASE("interval_delta is a metric on closed intervals") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  auto draw = [&] {
    const double p = u(rng);
    const double q = u(rng);
    return Interval::closed(std::min(p, q), std::max(p, q));
  };
  for (int k = 0; k < 2000; ++k) {
    const auto i = draw();
    const auto j = draw();
    const auto l = draw();
    CHECK(interval_delta(i, j) == interval_delta(j, i));
    CHECK(interval_delta(i, i) == 0.0);
    CHECK(interval_delta(i, j) > 0.0);
    CHECK(interval_delta(i, l) <= interval_delta(i, j) + interval_delta(j, l) + 1e-12);
  }
}

TEST_CASE("rescale_cluster") {
  const double inv_e = std::exp(-1.0);
  CHECK(rescale_cluster(std::nullopt, 0.1).is_empty());
  const auto c = rescale_cluster(SiteInterval{0, 9}, inv_e);
  CHECK(c.a() == 0.0);
  CHECK(c.b() == doctest::Approx(9.0 / std::exp(1.0)));
  const auto p = rescale_cluster(SiteInterval{-2, -2}, inv_e);
  CHECK(p.a() == doctest::Approx(-2.0 / std::exp(1.0)));
  CHECK(p.a() == p.b());
  CHECK_THROWS_AS(rescale_cluster(SiteInterval{0, 1}, 2.0), ConfigError);

  for (double lambda : {0.3, 1e-2, 1e-4}) {
    for (std::int64_t l : {-40, 0, 7}) {
      const SiteInterval s{l, l + 12};
      const auto r = rescale_cluster(s, lambda);
      CHECK(r.length() / site_width(lambda) + 1.0 == doctest::Approx(13.0));
    }
  }
}

TEST_CASE("rescale_size_exponent") {
  CHECK(rescale_size_exponent(std::nullopt, 0.01) == 0.0);
  CHECK(rescale_size_exponent(SiteInterval{0, 98}, 0.01) == doctest::Approx(1.0));
  CHECK(rescale_size_exponent(SiteInterval{0, 8}, 0.01) == doctest::Approx(0.5));
}

TEST_CASE("path_distance on constructed paths") {
  const auto p = constant_path(0.0, Interval::empty(), 1.0);
  const auto q = constant_path(0.5, Interval::closed(0, 2), 1.0);
  CHECK(path_distance(p, p, 1.0).total() == 0.0);
  CHECK(path_distance(p, q, 1.0).total() == doctest::Approx(2.5));

  const auto ramp = constant_path(0.0, Interval::empty(), 1.0, 1.0);
  const auto d = path_distance(ramp, p, 1.0);
  CHECK(d.sup_z == doctest::Approx(1.0));
  CHECK(d.int_d == 0.0);
  CHECK(d.total() == doctest::Approx(1.0));

  CHECK_THROWS_AS(path_distance(p, constant_path(0.0, Interval::empty(), 2.0), 1.0), DomainError);

  // Piecewise paths that agree everywhere but are cut at different points.
  RescaledTrajectory a{0.0, 2.0, {{0.0, 0.0, 1.0, Interval::empty()}, {1.0, 1.0, 0.0, Interval::closed(-1, 1)}}};
  RescaledTrajectory b{0.0, 2.0,
                       {{0.0, 0.0, 1.0, Interval::empty()},
                        {0.5, 0.5, 1.0, Interval::empty()},
                        {1.0, 1.0, 0.0, Interval::closed(-1, 1)},
                        {1.5, 1.0, 0.0, Interval::closed(-1, 1)}}};
  CHECK(path_distance(a, b, 2.0).total() == 0.0);
  b.segments[3].d = Interval::closed(-1, 2);
  CHECK(path_distance(a, b, 2.0).int_d == doctest::Approx(0.5));
  CHECK(path_distance(a, b, 2.0).sup_z == 0.0);
}

TEST_CASE("trajectory lookups") {
  RescaledTrajectory a{0.0, 2.0, {{0.0, 0.0, 1.0, Interval::empty()}, {1.0, 1.0, 0.0, Interval::closed(-1, 1)}}};
  CHECK(a.z_at(0.25) == 0.25);
  CHECK(a.z_at(1.5) == 1.0);
  CHECK(a.d_at(0.5).is_empty());
  CHECK(a.d_at(1.0) == Interval::closed(-1, 1));
  CHECK(a.segment_end(0) == 1.0);
  CHECK(a.segment_end(1) == 2.0);
  std::stringstream out;
  write_trajectory_csv(out, a);
  CHECK(out.str() == "t_start,t_end,z,L,R\n0,1,0,1,0\n1,2,1,-1,1\n");
}

TEST_CASE("limit trajectories follow the timeline") {
  const auto marks = sample_marks(3.0, 5.0, {8, "marks"});
  const auto tl = simulate(5.0, 3.0, marks);
  const auto paths = limit_trajectories(5.0, 3.0, marks, {0.0, 1.3});
  REQUIRE(paths.size() == 2);
  for (const auto& p : paths) {
    for (int k = 0; k < 300; ++k) {
      const double s = 0.01 * k + 0.003;
      CHECK(p.z_at(s) == doctest::Approx(tl.query_z(s, p.x0)).epsilon(1e-12));
      CHECK(p.d_at(s) == Interval::from(tl.query_d(s, p.x0)));
    }
  }
}

TEST_CASE("coupled runs") {
  SUBCASE("without marks the lattice grows toward the limit") {
    const MarkSet empty{3.0, 5.0, {}};
    double prev = 1e9;
    for (double lambda : {1e-2, 1e-3, 1e-4}) {
      const auto run = coupled_run(lambda, empty, 4, {0.0});
      REQUIRE(run.probes.size() == 1);
      const auto& cmp = run.probes[0];
      for (double s : {0.2, 0.6, 1.5, 2.5}) CHECK(cmp.limit.z_at(s) == std::min(s, 1.0));
      CHECK(cmp.lattice.z_at(2.9) > 0.9);
      CHECK(cmp.distance.total() < prev);
      prev = cmp.distance.total();
    }
  }

  SUBCASE("same seeds give identical runs") {
    const auto a = coupled_run(1e-2, 5.0, 3.0, 11, 12, {0.0, 1.0});
    const auto b = coupled_run(1e-2, 5.0, 3.0, 11, 12, {0.0, 1.0});
    CHECK(a.marks == b.marks);
    REQUIRE(a.probes.size() == 2);
    for (std::size_t k = 0; k < 2; ++k) {
      CHECK(a.probes[k].lattice.segments == b.probes[k].lattice.segments);
      CHECK(a.probes[k].limit.segments == b.probes[k].limit.segments);
      CHECK(a.probes[k].distance.total() == b.probes[k].distance.total());
    }
  }

  SUBCASE("lattice size exponent never exceeds the box bound") {
    const double lambda = 1e-2;
    const auto run = coupled_run(lambda, 5.0, 3.0, 21, 22, {0.0});
    const double sites = 2.0 * static_cast<double>(box_half_sites(5.0, lambda)) + 1.0;
    for (const auto& s : run.probes[0].lattice.segments) {
      CHECK(s.z_start <= std::log1p(sites) / time_factor(lambda) + 1e-12);
    }
  }

  CHECK_THROWS_AS(coupled_run(1e-2, 5.0, 3.0, 1, 2, {6.0}), ConfigError);
}
