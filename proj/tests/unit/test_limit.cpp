#include <doctest.h>

#include <cmath>
#include <sstream>

#include "figure2.hpp"
#include "fireline/errors.hpp"
#include "fireline/limit_lffp.hpp"

using namespace fireline;
using figure2::t;
using figure2::x;

namespace {

// D_t(x) rebuilt from the public Z and H queries alone: blocking points are the
// breakpoints with Z < 1 or H > 0, blocking cells those with Z < 1 (probed at
// their midpoint).
ClosedInterval brute_cluster(const Timeline& tl, double time, double at) {
  const auto& st = tl.state_at(time);
  const auto pts = st.breakpoints();
  const double a = tl.half_width();
  auto blocks = [&](double y) { return tl.query_z(time, y) < 1.0 || tl.query_h(time, y) > 0.0; };
  if (blocks(at)) return {at, at};
  double left = -a;
  double right = a;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const double p = pts[k].x;
    if (blocks(p)) {
      if (p < at) left = std::max(left, p);
      if (p > at) right = std::min(right, p);
    }
    if (k + 1 < pts.size()) {
      const double q = pts[k + 1].x;
      if (blocks(0.5 * (p + q))) {
        if (q <= at) left = std::max(left, q);
        if (p >= at) right = std::min(right, p);
      }
    }
  }
  return {left, right};
}

bool contains(const ClosedInterval& outer, const ClosedInterval& inner) {
  return outer.a <= inner.a && inner.b <= outer.b;
}

std::vector<double> probe_grid(double a, int n) {
  std::vector<double> xs;
  for (int k = 0; k < n; ++k) xs.push_back(-a + 2.0 * a * (k + 0.5) / n);
  return xs;
}

}  // namespace

TEST_CASE("initial state") {
  CHECK_THROWS_AS(LffpState(0.0), ConfigError);
  for (double a : {0.5, 4.0, 30.0}) {
    const auto tl = simulate(a, 2.0, MarkSet{2.0, a, {}});
    CHECK(tl.query_z(0.5, 0.0) == 0.5);
    CHECK(tl.query_d(0.5, 0.0) == ClosedInterval{0.0, 0.0});
    CHECK(tl.query_h(0.5, 0.1) == 0.0);
    CHECK(tl.query_d(1.2, 0.0) == ClosedInterval{-a, a});
    for (double y : probe_grid(a, 7)) CHECK(tl.query_d(0.5, y) == ClosedInterval{y, y});
    // Mark-free evolution.
    for (double s : {0.0, 0.25, 0.999, 1.0, 1.75}) CHECK(tl.query_z(s, 0.3 * a) == std::min(s, 1.0));
    CHECK(tl.events().empty());
  }
}

TEST_CASE("queries outside the timeline are domain errors") {
  const auto tl = simulate(2.0, 1.0, MarkSet{1.0, 2.0, {}});
  CHECK_THROWS_AS((void)tl.query_z(1.5, 0.0), DomainError);
  CHECK_THROWS_AS((void)tl.query_d(0.5, 2.5), DomainError);
  CHECK_THROWS_AS((void)tl.query_h(-0.1, 0.0), DomainError);
}

TEST_CASE("a microscopic mark on a fresh state opens a barrier of its own age") {
  LffpState s(2.0);
  const auto ev = s.apply_mark({0.3, 0.2});
  CHECK(ev.kind == FireKind::microscopic);
  CHECK(ev.z_before == 0.3);
  CHECK(s.h_at(0.3, 0.2) > 0.0);
  CHECK(s.h_at(std::nextafter(0.6, 0.0), 0.2) > 0.0);
  CHECK(s.h_at(0.6, 0.2) == 0.0);
  CHECK(s.breakpoints().size() == 3);
  CHECK(s.cells().size() == 2);
  CHECK_THROWS_AS(s.apply_mark({0.4, 0.2}), DuplicateCoordinateError);
  CHECK_THROWS_AS(s.apply_mark({0.1, 0.5}), DomainError);
  CHECK_THROWS_AS(s.apply_mark({0.5, 2.0}), DomainError);
}

TEST_CASE("first mark after saturation burns the whole box") {
  LffpState s(3.0);
  const auto ev = s.apply_mark({1.5, 0.4});
  CHECK(ev.kind == FireKind::macroscopic);
  REQUIRE(ev.burned.has_value());
  CHECK(*ev.burned == ClosedInterval{-3.0, 3.0});
  for (double y : {-2.9, -1.0, 0.4, 2.5}) CHECK(s.z_at(1.5, y) == 0.0);
  CHECK(s.z_at(2.0, 0.0) == 0.5);
  CHECK(s.breakpoints().size() == 2);
}

TEST_CASE("figure 2 trace") {
  const auto tl = simulate(figure2::kHalfWidth, figure2::kHorizon, figure2::mark_set());
  const auto& ev = tl.events();
  REQUIRE(ev.size() == 15);

  SUBCASE("growth from zero up to time 1") {
    for (int k = 0; k <= 16; ++k) {
      const double s = k / 16.0;
      CHECK(tl.query_z(s, 0.0) == s);
      if (s < 1.0) CHECK(tl.query_d(s, 0.0) == ClosedInterval{0.0, 0.0});
    }
  }

  SUBCASE("fire kinds") {
    for (int k = 1; k <= 15; ++k) {
      const bool macro = k == 9 || k == 10 || k == 15;
      CHECK((ev[k - 1].kind == FireKind::macroscopic) == macro);
    }
    CHECK(*ev[8].burned == ClosedInterval{x(6), x(8)});
  }

  SUBCASE("barrier above the first mark ends at 2 t1") {
    CHECK(ev[0].z_before == t(1));
    CHECK(tl.query_h(t(1), x(1)) > 0.0);
    CHECK(tl.query_h(std::nextafter(2 * t(1), 0.0), x(1)) > 0.0);
    CHECK(tl.query_h(2 * t(1), x(1)) == 0.0);
    const auto& st = tl.state_at(3.0);
    bool found = false;
    for (const auto& p : st.breakpoints()) {
      if (p.x == x(1)) {
        found = true;
        CHECK(p.barrier_end() == 2 * t(1));
      }
    }
    CHECK(found);
  }

  SUBCASE("barrier above mark 12 ends at 2 t12 - t9") {
    CHECK(ev[11].z_before == t(12) - t(9));
    const double end = 2 * t(12) - t(9);
    CHECK(tl.query_h(std::nextafter(end, 0.0), x(12)) > 0.0);
    CHECK(tl.query_h(end, x(12)) == 0.0);
    for (const auto& p : tl.state_at(end).breakpoints()) {
      if (p.x == x(12)) CHECK(p.barrier_end() == end);
    }
  }

  SUBCASE("cluster history of the origin") {
    auto d = [&](double s) { return tl.query_d(s, 0.0); };
    CHECK(d(1.0) == ClosedInterval{x(8), x(5)});
    CHECK(d(std::nextafter(2 * t(5), 0.0)) == ClosedInterval{x(8), x(5)});
    CHECK(d(2 * t(5)) == ClosedInterval{x(8), x(7)});
    CHECK(d(std::nextafter(t(10), 0.0)) == ClosedInterval{x(8), x(7)});
    CHECK(d(t(10)) == ClosedInterval{0.0, 0.0});
    CHECK(d(std::nextafter(t(10) + 1, 0.0)) == ClosedInterval{0.0, 0.0});
    CHECK(d(t(10) + 1) == ClosedInterval{x(12), x(14)});
    CHECK(d(2 * t(12) - t(9)) == ClosedInterval{-4.0, x(14)});
    CHECK(d(t(14) + (t(14) - t(10))) == ClosedInterval{-4.0, 4.0});
    CHECK(ev[14].burned.has_value());
    CHECK(*ev[14].burned == ClosedInterval{-4.0, 4.0});
  }

  SUBCASE("replay is bit-identical") {
    const auto again = simulate(figure2::kHalfWidth, figure2::kHorizon, figure2::mark_set());
    std::stringstream a;
    std::stringstream b;
    write_timeline_csv(a, tl);
    write_timeline_csv(b, again);
    CHECK(a.str() == b.str());
    std::stringstream dump;
    write_state_dump(dump, tl, {0.5, 2.0});
    CHECK(dump.str().find(';') != std::string::npos);
  }
}

TEST_CASE("limit process properties on random mark sets") {
  const double a = 5.0;
  const double horizon = 3.0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const auto marks = sample_marks(horizon, a, {seed, "marks"});
    const auto tl = simulate(a, horizon, marks);
    const auto& ev = tl.events();

    std::vector<double> times{0.0};
    for (const auto& e : ev) times.push_back(e.mark.t);
    for (std::size_t k = 0; k < times.size(); ++k) {
      const double next = k + 1 < times.size() ? times[k + 1] : horizon;
      const auto& st = tl.state_at(times[k]);
      st.check_invariants();
      // Probe the open inter-mark interval at its change times and midpoints.
      std::vector<double> probes{times[k]};
      for (double c : st.change_times(times[k], next)) probes.push_back(c);
      probes.push_back(next);
      std::vector<double> ts;
      for (std::size_t j = 0; j + 1 < probes.size(); ++j) {
        ts.push_back(probes[j]);
        ts.push_back(0.5 * (probes[j] + probes[j + 1]));
      }
      std::vector<ClosedInterval> prev;
      for (double s : ts) {
        const auto map = st.cluster_map(s);
        std::vector<ClosedInterval> now;
        for (double y : probe_grid(a, 23)) {
          const double z = tl.query_z(s, y);
          const double h = tl.query_h(s, y);
          CHECK(z >= 0.0);
          CHECK(z <= 1.0);
          CHECK(h == 0.0);  // grid points are not mark coordinates
          const auto d = tl.query_d(s, y);
          CHECK(d == brute_cluster(tl, s, y));
          CHECK(map.cluster(y) == d);
          CHECK(d.a <= y);
          CHECK(y <= d.b);
          if (d.a < d.b) {
            for (double f : {0.1, 0.5, 0.9}) CHECK(tl.query_d(s, d.a + f * (d.b - d.a)) == d);
          }
          now.push_back(d);
        }
        if (!prev.empty()) {
          for (std::size_t j = 0; j < now.size(); ++j) CHECK(contains(now[j], prev[j]));
        }
        prev = now;
      }
    }

    std::size_t micro = 0;
    for (const auto& e : ev) {
      if (e.kind == FireKind::microscopic) {
        ++micro;
        const double end = e.mark.t + e.z_before;
        CHECK(e.z_before < 1.0);
        if (e.z_before > 0.0) CHECK(tl.query_h(e.mark.t, e.mark.x) == doctest::Approx(e.z_before));
        if (end <= horizon) {
          CHECK(tl.query_h(end, e.mark.x) == 0.0);
          CHECK(tl.query_h(std::nextafter(end, 0.0), e.mark.x) > 0.0);
        }
      } else {
        REQUIRE(e.burned.has_value());
        const double mid = 0.5 * (e.burned->a + e.burned->b);
        CHECK(tl.query_z(e.mark.t, mid) == 0.0);
      }
    }
    const auto& last = tl.state_at(horizon);
    CHECK(last.breakpoints().size() == micro + 2);
    CHECK(last.cells().size() == micro + 1);
  }
}

TEST_CASE("state_at_time agrees with the timeline") {
  const auto marks = sample_marks(3.0, 4.0, {5, "marks"});
  const auto tl = simulate(4.0, 3.0, marks);
  for (double s : {0.7, 1.4, 2.2, 3.0}) {
    const auto st = state_at_time(4.0, marks, s);
    for (double y : probe_grid(4.0, 11)) {
      CHECK(st.z_at(s, y) == tl.query_z(s, y));
      CHECK(st.cluster_at(s, y) == tl.query_d(s, y));
    }
  }
}
