#include <cmath>

#include "doctest.h"
#include "triclock/basin.hpp"
#include "triclock/dynamics.hpp"

using namespace triclock;

namespace {

CouplingParams with_eps(double e) {
  CouplingParams p;
  p.epsilon = e;
  return p;
}

}  // namespace

TEST_CASE("point classification examples") {
  const auto p = with_eps(0.05);
  const int n = default_max_iterations(0.05);
  CHECK(classify_point({kPi / 2, 3 * kPi / 2}, p, 1e-6, n).label == BasinLabel::upper);
  CHECK(classify_point({3 * kPi / 2, kPi / 2}, p, 1e-6, n).label == BasinLabel::lower);
  CHECK(classify_point({1.0, 1.0}, p, 1e-6, n).label == BasinLabel::boundary);
  CHECK(classify_point({0.0, 2.0}, p, 1e-6, n).label == BasinLabel::boundary);
  CHECK(classify_point({2.0, kTwoPi}, p, 1e-6, n).label == BasinLabel::boundary);

  const PointClass at = classify_point(region_attractor(Region::upper), p, 1e-6, n);
  CHECK(at.label == BasinLabel::upper);
  CHECK(at.iterations == 0);

  // too few iterations to arrive
  CHECK(classify_point({0.01, 6.0}, p, 1e-6, 5).label == BasinLabel::unresolved);
}

TEST_CASE("resolution three grid") {
  const BasinGrid g = rasterize(3, with_eps(0.05));
  REQUIRE(g.labels.size() == 9);
  REQUIRE(g.iterations.size() == 9);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      const BasinLabel want = i == j ? BasinLabel::boundary : (j > i ? BasinLabel::upper : BasinLabel::lower);
      CHECK(g.label(i, j) == want);
    }
  CHECK(g.cell_center(0, 2).x == doctest::Approx(kPi / 3));
  CHECK(g.cell_center(0, 2).y == doctest::Approx(5 * kPi / 3));
  CHECK(g.max_iter == default_max_iterations(0.05));
}

TEST_CASE("resolution 200 is symmetric and fully resolved") {
  const BasinGrid g = rasterize(200, with_eps(0.05), kBasinTolerance, 0, 4);
  CHECK(g.count(BasinLabel::unresolved) == 0);
  CHECK(g.count(BasinLabel::upper) == g.count(BasinLabel::lower));
  CHECK(g.count(BasinLabel::boundary) == 200);
  for (int j = 0; j < 200; ++j)
    for (int i = 0; i < 200; ++i) {
      CHECK(g.label(i, j) == mirror(g.label(j, i)));
      const BasinLabel l = g.label(i, j);
      if (l == BasinLabel::upper || l == BasinLabel::lower) {
        CHECK(g.iterations[g.index(i, j)] <= static_cast<std::uint32_t>(g.max_iter));
      }
    }
}

TEST_CASE("rasterization is identical for any worker count") {
  const BasinGrid a = rasterize(64, with_eps(0.07), kBasinTolerance, 0, 1);
  for (unsigned w : {2u, 3u, 8u}) {
    const BasinGrid b = rasterize(64, with_eps(0.07), kBasinTolerance, 0, w);
    CHECK(a.labels == b.labels);
    CHECK(a.iterations == b.iterations);
  }
}

TEST_CASE("rasterization rejects bad input") {
  CHECK_THROWS_AS(rasterize(1, with_eps(0.05)), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(10, with_eps(0.05), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(10, with_eps(0.2)), std::invalid_argument);
  CHECK_THROWS_AS(rasterize(10, with_eps(0.0)), std::invalid_argument);
}

TEST_CASE("orbits") {
  const auto p = with_eps(0.05);
  const PhasePoint fp = region_attractor(Region::upper);
  const auto still = orbit(fp, p, 20);
  CHECK(still.size() == 21);
  for (PhasePoint q : still) CHECK(norm_inf(q - fp) < 1e-15);

  CHECK(orbit({1, 2}, p, 0) == std::vector<PhasePoint>{{1, 2}});
  CHECK_THROWS_AS(orbit({1, 2}, p, -1), std::invalid_argument);

  const auto o = orbit({kPi / 2, 3 * kPi / 2}, p, 300);
  for (std::size_t k = 1; k < o.size(); ++k) {
    CHECK(o[k] == three_clock_step(o[k - 1], p));
    CHECK(lyapunov_value(o[k], Region::upper) <= lyapunov_value(o[k - 1], Region::upper));
  }
  CHECK(norm_inf(o.back() - fp) < 1e-6);
}

TEST_CASE("no orbit leaves its open triangle") {
  const auto p = with_eps(0.1);
  for (int i = 1; i < 30; ++i)
    for (int j = i + 1; j < 30; ++j) {
      for (PhasePoint q : orbit({kTwoPi * i / 30, kTwoPi * j / 30}, p, 200)) CHECK(q.y > q.x);
    }
}

TEST_CASE("label strings") {
  for (auto l : {BasinLabel::upper, BasinLabel::lower, BasinLabel::boundary, BasinLabel::unresolved})
    CHECK(basin_label_from_string(to_string(l)) == l);
  CHECK(mirror(BasinLabel::upper) == BasinLabel::lower);
  CHECK(mirror(BasinLabel::boundary) == BasinLabel::boundary);
  CHECK_THROWS(basin_label_from_string("sideways"));
}
