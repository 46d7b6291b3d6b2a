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

#include "fairrank/query.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>

namespace fairrank {
namespace {

constexpr double kGradientStep = 1e-7;
constexpr double kMinStep = 1e-10;
constexpr double kActiveTolerance = 1e-10;
constexpr int kMaxIterations = 2000;
constexpr int kRepairSteps = 60;

double ray_distance(std::span<const double> theta, std::span<const double> target_ray) {
  double u[16];
  std::vector<double> heap;
  std::span<double> ray(u, std::min<std::size_t>(16, theta.size() + 1));
  if (theta.size() + 1 > 16) {
    heap.resize(theta.size() + 1);
    ray = heap;
  }
  unit_ray(theta, ray);
  return weight_angle(ray, target_ray);
}

// Rosen's gradient projection on min angle(theta, target) subject to
// a.theta <= b - margin.
std::vector<double> descend(const LinearRows& rows, double margin, std::vector<double> x,
                            std::span<const double> target_ray) {
  const std::size_t m = rows.dim;
  const auto M = static_cast<Eigen::Index>(m);
  auto f = [&](std::span<const double> t) { return ray_distance(t, target_ray); };
  auto slack = [&](std::size_t i, std::span<const double> t) {
    auto r = rows.row(i);
    double s = rows.b[i] - margin;
    for (std::size_t k = 0; k < m; ++k) s -= r[k] * t[k];
    return s;
  };

  std::vector<double> xn(m), probe(m);
  Eigen::VectorXd g(M), dir(M);
  double fx = f(x);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t k = 0; k < m; ++k) {
      probe = x;
      probe[k] = x[k] + kGradientStep;
      const double up = f(probe);
      probe[k] = x[k] - kGradientStep;
      g[static_cast<Eigen::Index>(k)] = (up - f(probe)) / (2.0 * kGradientStep);
    }
    std::vector<std::size_t> work;
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      if (slack(i, x) <= kActiveTolerance) work.push_back(i);
    }
    bool kkt = false;
    while (true) {
      if (work.empty()) {
        dir = -g;
      } else {
        Eigen::MatrixXd N(static_cast<Eigen::Index>(work.size()), M);
        for (std::size_t r = 0; r < work.size(); ++r) {
          auto row = rows.row(work[r]);
          for (std::size_t k = 0; k < m; ++k) {
            N(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = row[k];
          }
        }
        Eigen::MatrixXd nnt = N * N.transpose();
        Eigen::VectorXd lambda = -nnt.completeOrthogonalDecomposition().solve(N * g);
        dir = -(g + N.transpose() * lambda);
        if (dir.norm() <= 1e-12 * (1.0 + g.norm())) {
          Eigen::Index worst = 0;
          if (lambda.minCoeff(&worst) >= -1e-12) {
            kkt = true;
            break;
          }
          work.erase(work.begin() + worst);
          continue;
        }
      }
      break;
    }
    if (kkt || dir.norm() == 0.0) break;

    double tmax = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rows.rows(); ++i) {
      auto r = rows.row(i);
      double ad = 0.0;
      for (std::size_t k = 0; k < m; ++k) ad += r[k] * dir[static_cast<Eigen::Index>(k)];
      if (ad > 1e-15) tmax = std::min(tmax, std::max(0.0, slack(i, x)) / ad);
    }
    const double dn = dir.norm();
    double t = std::min(tmax, 0.2 / dn);
    bool accepted = false;
    while (t * dn > kMinStep) {
      for (std::size_t k = 0; k < m; ++k) xn[k] = x[k] + t * dir[static_cast<Eigen::Index>(k)];
      const double fn = f(xn);
      if (fn < fx - 1e-4 * t * dn * dn || (fn < fx && t == tmax)) {
        accepted = true;
        fx = fn;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
    x = xn;
  }
  return x;
}

QueryResult as_is(const WeightVector& w, QueryMode mode) {
  return QueryResult{w, true, w, 0.0, true, mode};
}

WeightVector at_norm(double r, std::span<const double> theta) {
  return to_cartesian(r, AngleVector(std::vector<double>(theta.begin(), theta.end())));
}

bool passes(const Dataset& data, const FairnessOracle& oracle, std::span<const double> theta) {
  return oracle(witness_ranking(data, theta));
}

}  // namespace

double theorem7_bound(std::size_t n_cells, std::size_t d) {
  const double side = std::pow(cell_area(n_cells, d), 1.0 / static_cast<double>(d - 1));
  const double arg = std::sqrt(static_cast<double>(d - 1)) / 2.0 * side;
  return 4.0 * std::asin(std::min(1.0, arg));
}

std::vector<double> nearest_in_region(std::span<const AngleHyperplane> planes,
                                      const Region& region, std::span<const double> target) {
  const std::size_t m = region.witness.size();
  const Box box = Box::orthant(m);
  const LinearRows rows = region_rows(planes, region.halves, box);
  std::vector<double> ray(m + 1);
  unit_ray(target, ray);
  if (rows.depth(target) >= kFeasibilityMargin) return {target.begin(), target.end()};

  std::vector<std::vector<double>> starts{region.witness};
  std::vector<double> c(m);
  for (std::size_t k = 0; k < m; ++k) {
    for (double sign : {1.0, -1.0}) {
      std::fill(c.begin(), c.end(), 0.0);
      c[k] = sign;
      if (auto p = extreme_point(planes, region.halves, box, c, 1.5 * kFeasibilityMargin)) {
        starts.push_back(std::move(*p));
      }
    }
  }
  // Linearized pull toward the target.
  for (std::size_t k = 0; k < m; ++k) c[k] = target[k] - region.witness[k];
  if (auto p = extreme_point(planes, region.halves, box, c, 1.5 * kFeasibilityMargin)) {
    starts.push_back(std::move(*p));
  }

  std::vector<double> best;
  double best_d = std::numeric_limits<double>::infinity();
  for (auto& s : starts) {
    auto x = descend(rows, kFeasibilityMargin, std::move(s), ray);
    const double d = ray_distance(x, ray);
    if (d < best_d) {
      best_d = d;
      best = std::move(x);
    }
  }
  return best;
}

QueryResult md_baseline(const SatRegions& regions, const Dataset& data,
                        const FairnessOracle& oracle, const WeightVector& w) {
  if (w.dim() != data.dim()) throw std::invalid_argument("weight dimension mismatch");
  if (oracle.satisfied_by(data, w.values())) return as_is(w, QueryMode::kExact);
  if (regions.satisfactory.empty()) throw Unsatisfiable();
  const PolarForm polar = to_polar(w);
  const auto target = polar.theta.values();

  struct Candidate {
    double distance;
    std::size_t region;
    std::vector<double> theta;
  };
  std::vector<Candidate> found;
  for (std::size_t r = 0; r < regions.satisfactory.size(); ++r) {
    auto x = nearest_in_region(regions.planes, regions.satisfactory[r], target);
    found.push_back({angle_distance(x, target), r, std::move(x)});
  }
  std::sort(found.begin(), found.end(), [](const Candidate& a, const Candidate& b) {
    return a.distance < b.distance || (a.distance == b.distance && a.region < b.region);
  });

  for (const auto& cand : found) {
    std::vector<double> theta = cand.theta;
    if (!passes(data, oracle, theta)) {
      // The linearized region can disagree with the true ordering near its
      // faces; back off toward the witness until the oracle agrees.
      const auto& wit = regions.satisfactory[cand.region].witness;
      if (!passes(data, oracle, wit)) continue;
      std::vector<double> good = wit, bad = theta, mid(theta.size());
      for (int s = 0; s < kRepairSteps; ++s) {
        for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = 0.5 * (good[k] + bad[k]);
        (passes(data, oracle, mid) ? good : bad) = mid;
      }
      theta = good;
    }
    WeightVector out = at_norm(polar.radius, theta);
    if (!oracle.satisfied_by(data, out.values())) continue;
    return QueryResult{w, false, std::move(out), angle_distance(theta, target), true,
                       QueryMode::kExact};
  }
  throw Unsatisfiable();
}

const CellAssignment& md_lookup(const CellIndex& index, std::span<const double> theta) {
  if (index.unsatisfiable) throw Unsatisfiable();
  const auto& cell = index.cells[index.partition.locate(theta)];
  if (!cell) throw Unsatisfiable();
  return *cell;
}

QueryResult md_online(const CellIndex& index, const Dataset& data,
                      const FairnessOracle& oracle, const WeightVector& w) {
  if (w.dim() != data.dim() || w.dim() != index.partition.d) {
    throw std::invalid_argument("weight dimension mismatch");
  }
  if (oracle.satisfied_by(data, w.values())) return as_is(w, QueryMode::kApproximate);
  const PolarForm polar = to_polar(w);
  const auto target = polar.theta.values();
  const CellAssignment& cell = md_lookup(index, target);
  // The check runs on the weights handed out, not just on the stored angles.
  auto attempt = [&](std::span<const double> f) -> std::optional<QueryResult> {
    WeightVector out = at_norm(polar.radius, f);
    if (!oracle.satisfied_by(data, out.values())) return std::nullopt;
    return QueryResult{w, false, std::move(out), angle_distance(f, target), true,
                       QueryMode::kApproximate};
  };
  if (auto r = attempt(cell.function)) return *r;
  // Only reachable when the oracle differs from the one the index was built
  // for: fall back to the nearest stored function that passes.
  std::map<std::uint32_t, double> seeds;
  for (const auto& c : index.cells) {
    if (c) seeds.emplace(c->seed, angle_distance(c->function, target));
  }
  std::vector<std::pair<double, std::uint32_t>> order;
  for (auto [s, d] : seeds) order.emplace_back(d, s);
  std::sort(order.begin(), order.end());
  for (auto [d, s] : order) {
    if (auto r = attempt(index.cells[s]->function)) return *r;
  }
  throw Unsatisfiable();
}

QueryResult query_2d(const SatisfactoryRanges2D& ranges, const Dataset& data,
                     const FairnessOracle& oracle, const WeightVector& w) {
  if (w.dim() != 2 || data.dim() != 2) throw std::invalid_argument("weight dimension mismatch");
  Answer2D ans = online_2d(ranges, w);
  if (ans.as_is && oracle.satisfied_by(data, w.values())) return as_is(w, QueryMode::kExact);
  if (ans.as_is) {
    // On a closed boundary the tie-break may fail; use the suggested angle.
    const auto& r = ranges.ranges[static_cast<std::size_t>(ranges.find(ans.theta))];
    const double s = std::abs(ans.theta - r.lo) <= std::abs(r.hi - ans.theta) ? r.suggest_lo
                                                                              : r.suggest_hi;
    ans = Answer2D{WeightVector({w.norm() * std::cos(s), w.norm() * std::sin(s)}), s,
                   std::abs(s - ans.theta), false};
  }
  const bool ok = oracle.satisfied_by(data, ans.weights.values());
  if (!ok) throw Unsatisfiable();
  return QueryResult{w, false, ans.weights, ans.distance, true, QueryMode::kExact};
}

}  // namespace fairrank
