// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <random>

#include "doctest.h"
#include "fairrank/feasibility.hpp"
#include "fairrank/geometry.hpp"
#include "fairrank/lp.hpp"
#include "support.hpp"

using namespace fairrank;

namespace {

AngleHyperplane plane(std::vector<double> h, bool homogeneous = false) {
  return AngleHyperplane{std::move(h), homogeneous, 0, 0};
}

// Largest margin over a grid of points, the brute-force feasibility oracle.
double grid_depth(std::span<const AngleHyperplane> planes, std::span<const HalfSpace> halves,
                  const Box& box, int steps) {
  double best = -1e300;
  std::vector<double> t(2);
  for (int i = 0; i <= steps; ++i) {
    for (int j = 0; j <= steps; ++j) {
      t[0] = box.lo[0] + (box.hi[0] - box.lo[0]) * i / steps;
      t[1] = box.lo[1] + (box.hi[1] - box.lo[1]) * j / steps;
      double depth = 1e300;
      for (const auto& h : halves) {
        depth = std::min(depth, halfspace_margin(planes[h.plane], h.positive, t));
      }
      for (std::size_t k = 0; k < 2; ++k) {
        depth = std::min({depth, t[k] - box.lo[k], box.hi[k] - t[k]});
      }
      best = std::max(best, depth);
    }
  }
  return best;
}

}  // namespace

TEST_SUITE("lp") {
  TEST_CASE("small LP") {
    // max x + y s.t. x <= 2, y <= 3, x + y <= 4.
    LpProblem lp(2);
    lp.c = {1.0, 1.0};
    lp.add_row(std::vector{1.0, 0.0}, 2.0);
    lp.add_row(std::vector{0.0, 1.0}, 3.0);
    lp.add_row(std::vector{1.0, 1.0}, 4.0);
    const std::vector<std::size_t> basis{0, 1};
    const auto sol = maximize(lp, basis);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(sol.objective == doctest::Approx(4.0));
  }

  TEST_CASE("infeasible LP") {
    LpProblem lp(1);
    lp.c = {1.0};
    lp.add_row(std::vector{1.0}, 1.0);
    lp.add_row(std::vector{-1.0}, -2.0);  // x >= 2
    const std::vector<std::size_t> basis{0};
    CHECK(maximize(lp, basis).status == LpStatus::kInfeasible);
  }
}

TEST_SUITE("feasibility") {
  TEST_CASE("one angle dimension") {
    const std::vector planes{plane({2.0})};
    const Box box{std::vector<double>{0.0}, std::vector<double>{kHalfPi}};
    const std::vector<HalfSpace> minus{{0, false}};
    const auto p = find_feasible_point(planes, minus, box);
    REQUIRE(p);
    CHECK(p->theta[0] <= 0.5 - kFeasibilityMargin);
    CHECK(p->depth >= kFeasibilityMargin);

    const std::vector<HalfSpace> both{{0, false}, {0, true}};
    CHECK_FALSE(find_feasible_point(planes, both, box));
  }

  TEST_CASE("plane and box crossing") {
    const auto h = plane({1.0, 1.0});
    CHECK_FALSE(plane_crosses_box(h, Box({0.0, 0.0}, {0.4, 0.4})));
    CHECK(plane_crosses_box(h, Box({0.0, 0.0}, {1.0, 1.0})));
    CHECK_FALSE(plane_crosses_box(h, Box({0.2, 0.2}, {0.3, 0.3})));
    CHECK(plane_crosses_box(plane({2.0, 2.0}), Box({0.2, 0.2}, {0.3, 0.3})));

    const std::vector<AngleHyperplane> none;
    CHECK_FALSE(hyperplane_crosses(h, none, {}, Box({0.0, 0.0}, {0.4, 0.4})));
    CHECK(hyperplane_crosses(h, none, {}, Box({0.0, 0.0}, {1.0, 1.0})));
  }

  TEST_CASE("corner test agrees with the LP test") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(0.0, kHalfPi), s(-3.0, 3.0);
    const std::vector<AngleHyperplane> none;
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
      const Box box({std::min(a, b), std::min(c, d)}, {std::max(a, b), std::max(c, d)});
      const auto h = plane({s(rng), s(rng)});
      // Skip planes within the LP margin of a corner, where both answers are
      // legitimately ambiguous.
      double lo = 1e300, hi = -1e300;
      for (int m = 0; m < 4; ++m) {
        const double v = h.coeffs[0] * (m & 1 ? box.hi[0] : box.lo[0]) +
                         h.coeffs[1] * (m & 2 ? box.hi[1] : box.lo[1]);
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (std::min(std::abs(lo - 1.0), std::abs(hi - 1.0)) < 1e-5 * h.norm()) continue;
      if (box.hi[0] - box.lo[0] < 1e-5 || box.hi[1] - box.lo[1] < 1e-5) continue;
      CHECK(plane_crosses_box(h, box) == hyperplane_crosses(h, none, {}, box));
    }
  }

  TEST_CASE("random systems agree with a grid scan") {
    std::mt19937_64 rng(33);
    const Box box = Box::orthant(2);
    const double cell = kHalfPi / 1000;
    int feasible = 0, infeasible = 0;
    for (int trial = 0; trial < 30; ++trial) {
      std::vector<AngleHyperplane> planes;
      std::vector<HalfSpace> halves;
      const int count = trial < 20 ? 20 : 4;
      for (int k = 0; k < count; ++k) {
        planes.push_back(testing::random_plane(rng, box));
        halves.push_back({static_cast<std::uint32_t>(k), (rng() & 1) != 0});
      }
      const auto lp = find_feasible_point(planes, halves, box);
      const double depth = grid_depth(planes, halves, box, 1000);
      if (depth > cell) {
        CHECK(lp.has_value());
      }
      if (lp) {
        // The LP witness really is inside, and the grid comes within one
        // cell diagonal of its depth.
        for (const auto& h : halves) {
          CHECK(halfspace_margin(planes[h.plane], h.positive, lp->theta) >= kFeasibilityMargin * 0.99);
        }
        CHECK(depth >= lp->depth - cell * 1.5);
        ++feasible;
      } else {
        CHECK(depth <= cell);
        ++infeasible;
      }
    }
    CHECK(feasible > 0);
    CHECK(infeasible > 0);
  }

  TEST_CASE("point on a plane") {
    const std::vector planes{plane({1.0, 1.0}), plane({4.0, 0.0})};
    const Box box = Box::orthant(2);
    const std::vector<HalfSpace> halves{{1, false}};  // theta_1 < 0.25
    const auto p = find_point_on_plane(planes[0], planes, halves, box);
    REQUIRE(p);
    CHECK(std::abs(planes[0].eval(p->theta) - 1.0) <= kFeasibilityMargin * planes[0].norm() * 1.01);
    CHECK(p->theta[0] < 0.25);
    const std::vector<HalfSpace> far{{1, true}};
    const auto missing = plane({0.2, 0.2});  // theta_1 + theta_2 = 5, outside the box
    CHECK_FALSE(find_point_on_plane(missing, planes, far, box));
  }

  TEST_CASE("extreme point") {
    const std::vector planes{plane({1.0, 1.0})};
    const Box box = Box::orthant(2);
    const std::vector<HalfSpace> halves{{0, false}};
    const std::vector<double> c{1.0, 0.0};
    const auto p = extreme_point(planes, halves, box, c, 1e-6);
    REQUIRE(p);
    CHECK(std::abs((*p)[0] - (1.0 - 1e-6 * std::sqrt(2.0) - 1e-6)) < 1e-5);
    CHECK(region_rows(planes, halves, box).depth(*p) >= 1e-6 - 1e-12);
  }

  TEST_CASE("region rows") {
    const std::vector planes{plane({2.0, 0.0})};
    const Box box = Box::orthant(2);
    const std::vector<HalfSpace> halves{{0, true}};
    const auto rows = region_rows(planes, halves, box);
    CHECK(rows.rows() == 5);
    const std::vector<double> inside{0.75, 0.5}, outside{0.25, 0.5};
    CHECK(rows.depth(inside) == doctest::Approx(0.25));
    CHECK(rows.depth(outside) == doctest::Approx(-0.25));
  }
}
