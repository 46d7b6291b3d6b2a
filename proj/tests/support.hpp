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

#ifndef FAIRRANK_TESTS_SUPPORT_HPP_
#define FAIRRANK_TESTS_SUPPORT_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fairrank/dataset.hpp"
#include "fairrank/exchange.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/feasibility.hpp"
#include "fairrank/geometry.hpp"
#include "fairrank/planner2d.hpp"

namespace fairrank::testing {

/// n rows of uniform [0,1) attributes plus a "color" column with `groups`
/// groups drawn uniformly.
inline std::shared_ptr<const Dataset> random_dataset(std::size_t n, std::size_t d,
                                                     std::uint64_t seed, int groups = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> g(0, groups - 1);
  std::vector<double> v(n * d);
  for (double& x : v) x = u(rng);
  Dataset data(d, std::move(v));
  TypeColumn col{"color", {}, {}};
  for (int k = 0; k < groups; ++k) col.labels.push_back("g" + std::to_string(k));
  for (std::size_t i = 0; i < n; ++i) col.codes.push_back(g(rng));
  data.add_type(std::move(col));
  return std::make_shared<const Dataset>(std::move(data));
}

/// Same, but the last attribute is one constant for every row. For d = 3 all
/// exchange surfaces are then lines theta_1 = const in angle space, so the
/// linearized arrangement is exact.
inline std::shared_ptr<const Dataset> flat_dataset(std::size_t n, std::uint64_t seed,
                                                   int groups = 2) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> g(0, groups - 1);
  std::vector<double> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back(u(rng));
    v.push_back(u(rng));
    v.push_back(0.5);
  }
  Dataset data(3, std::move(v));
  TypeColumn col{"color", {}, {}};
  for (int k = 0; k < groups; ++k) col.labels.push_back("g" + std::to_string(k));
  for (std::size_t i = 0; i < n; ++i) col.codes.push_back(g(rng));
  data.add_type(std::move(col));
  return std::make_shared<const Dataset>(std::move(data));
}

/// Two-color layout where x+y puts 3 orange and 1 blue in the top 4, and
/// 0.97x+1.3y puts 2 of each.
inline std::shared_ptr<const Dataset> two_color_layout() {
  Dataset data = Dataset::from_rows(
      {{0.9, 0.9}, {0.85, 0.85}, {1.05, 0.6}, {0.55, 1.0}, {0.4, 1.2}, {0.3, 0.3}});
  data.add_type(TypeColumn{"color", {0, 0, 0, 1, 1, 0}, {"orange", "blue"}});
  return std::make_shared<const Dataset>(std::move(data));
}

/// Five items of the small 2D example.
inline std::shared_ptr<const Dataset> five_items() {
  Dataset data = Dataset::from_rows({{1, 3.5}, {1.5, 3.1}, {1.91, 2.3}, {2.3, 1.8}, {3.2, 0.9}});
  data.add_type(TypeColumn{"color", {0, 1, 0, 1, 0}, {"g0", "g1"}});
  return std::make_shared<const Dataset>(std::move(data));
}

/// At most `max` rows of group g0 in the top k.
inline OracleConfig at_most(std::size_t k, std::size_t max, const std::string& group = "g0") {
  OracleConfig cfg;
  cfg.constraints.push_back({"color", group, Amount::count(static_cast<double>(k)), std::nullopt,
                             Amount::count(static_cast<double>(max))});
  return cfg;
}

inline std::vector<double> ray_of(std::span<const double> theta) {
  std::vector<double> w(theta.size() + 1);
  unit_ray(theta, w);
  return w;
}

inline std::vector<double> random_angles(std::mt19937_64& rng, std::size_t m) {
  std::uniform_real_distribution<double> u(0.0, kHalfPi);
  std::vector<double> t(m);
  for (double& x : t) x = u(rng);
  return t;
}

inline bool passes(const Dataset& data, const FairnessOracle& oracle,
                   std::span<const double> theta) {
  const auto w = ray_of(theta);
  return oracle.satisfied_by(data, w);
}

/// A plane h.theta = 1 through a uniform point of the box, random normal.
inline AngleHyperplane random_plane(std::mt19937_64& rng, const Box& box) {
  std::uniform_real_distribution<double> u(0.0, 1.0), s(-1.0, 1.0);
  for (;;) {
    std::vector<double> p(box.dim()), n(box.dim());
    double np = 0.0;
    for (std::size_t k = 0; k < box.dim(); ++k) {
      p[k] = box.lo[k] + u(rng) * (box.hi[k] - box.lo[k]);
      n[k] = s(rng);
      np += n[k] * p[k];
    }
    if (std::abs(np) < 0.05) continue;
    for (double& x : n) x /= np;
    return AngleHyperplane{n, false, 0, 0};
  }
}

/// Oracle verdicts at m evenly spaced probe angles (i + 0.5) * (pi/2) / m.
struct DenseSweep2D {
  double step = 0.0;
  std::vector<double> probes;
  std::vector<char> ok;
};

inline DenseSweep2D dense_sweep_2d(const Dataset& data, const FairnessOracle& oracle,
                                   std::size_t m) {
  DenseSweep2D out;
  out.step = kHalfPi / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * out.step;
    const double w[2] = {std::cos(t), std::sin(t)};
    out.probes.push_back(t);
    out.ok.push_back(static_cast<char>(oracle.satisfied_by(data, w)));
  }
  return out;
}

/// Empty when `ranges` agrees with the sweep: every probe at least 1e-9 from
/// a boundary is classified the same way, every verdict change in the sweep
/// has a range boundary within `tol`, and every range boundary has a verdict
/// change within `tol` unless the range or gap it closes is too thin for
/// the sweep to see.
inline std::string compare_with_sweep(const SatisfactoryRanges2D& ranges, const DenseSweep2D& s,
                                      double tol) {
  std::vector<double> bounds;
  for (const auto& r : ranges.ranges) {
    if (r.lo > 0.0) bounds.push_back(r.lo);
    if (r.hi < kHalfPi) bounds.push_back(r.hi);
  }
  auto near_bound = [&](double t, double eps) {
    auto it = std::lower_bound(bounds.begin(), bounds.end(), t - eps);
    return it != bounds.end() && *it <= t + eps;
  };
  std::vector<double> changes;
  for (std::size_t i = 0; i < s.probes.size(); ++i) {
    const bool inside = ranges.find(s.probes[i]) >= 0;
    if (inside != static_cast<bool>(s.ok[i]) && !near_bound(s.probes[i], 1e-9)) {
      return "probe " + std::to_string(s.probes[i]) + " misclassified";
    }
    if (i > 0 && s.ok[i] != s.ok[i - 1]) changes.push_back(0.5 * (s.probes[i] + s.probes[i - 1]));
  }
  for (double c : changes) {
    if (!near_bound(c, tol)) return "sweep change at " + std::to_string(c) + " unmatched";
  }
  for (std::size_t b = 0; b < bounds.size(); ++b) {
    auto it = std::lower_bound(changes.begin(), changes.end(), bounds[b] - tol);
    if (it != changes.end() && *it <= bounds[b] + tol) continue;
    const double prev = b > 0 ? bounds[b - 1] : 0.0;
    const double next = b + 1 < bounds.size() ? bounds[b + 1] : kHalfPi;
    if (std::min(bounds[b] - prev, next - bounds[b]) < 2.0 * s.step) continue;
    return "boundary " + std::to_string(bounds[b]) + " unmatched";
  }
  return {};
}

/// Oracle verdicts on the centres of an m x m grid over [0, pi/2]^2 (d = 3).
struct DenseGrid3 {
  std::size_t m = 0;
  double step = 0.0;
  std::vector<std::vector<double>> points;  // satisfactory centres only
};

inline DenseGrid3 dense_grid_3(const Dataset& data, const FairnessOracle& oracle, std::size_t m) {
  DenseGrid3 g;
  g.m = m;
  g.step = kHalfPi / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const std::vector<double> t{(static_cast<double>(i) + 0.5) * g.step,
                                  (static_cast<double>(j) + 0.5) * g.step};
      if (passes(data, oracle, t)) g.points.push_back(t);
    }
  }
  return g;
}

/// Smallest angle from target to a satisfactory grid centre.
inline double grid_optimum(const DenseGrid3& g, std::span<const double> target) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : g.points) best = std::min(best, angle_distance(p, target));
  return best;
}

}  // namespace fairrank::testing

#endif  // FAIRRANK_TESTS_SUPPORT_HPP_
