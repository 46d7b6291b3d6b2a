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

#include "fairrank/exchange.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "fairrank/geometry.hpp"

namespace fairrank {
namespace {

constexpr double kResidualTolerance = 1e-6;
constexpr double kNudges[] = {0.08, 0.15, 0.3, 0.03};

void check_dims(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("item dimension mismatch");
}

// Extreme rays of the cone {w >= 0, n.w = 0}, unit length, sorted. The set
// depends only on the line of n, so swapping the items gives the same list.
std::vector<std::vector<double>> cone_generators(std::span<const double> n) {
  const std::size_t d = n.size();
  std::vector<std::vector<double>> gens;
  for (std::size_t p = 0; p < d; ++p) {
    if (n[p] == 0.0) {
      std::vector<double> e(d, 0.0);
      e[p] = 1.0;
      gens.push_back(std::move(e));
      continue;
    }
    for (std::size_t q = 0; q < d; ++q) {
      if (n[p] > 0.0 && n[q] < 0.0) {
        std::vector<double> g(d, 0.0);
        g[p] = -n[q];
        g[q] = n[p];
        const double len = std::hypot(g[p], g[q]);
        g[p] /= len;
        g[q] /= len;
        gens.push_back(std::move(g));
      }
    }
  }
  std::sort(gens.begin(), gens.end());
  return gens;
}

// Greedily pick `count` weight-space points that are linearly independent.
std::vector<std::vector<double>> independent_subset(
    const std::vector<std::vector<double>>& points, std::size_t count) {
  std::vector<std::vector<double>> chosen;
  if (points.empty()) return chosen;
  const auto d = static_cast<Eigen::Index>(points.front().size());
  for (const auto& p : points) {
    if (chosen.size() == count) break;
    Eigen::MatrixXd m(static_cast<Eigen::Index>(chosen.size() + 1), d);
    for (std::size_t r = 0; r < chosen.size(); ++r) {
      m.row(static_cast<Eigen::Index>(r)) =
          Eigen::Map<const Eigen::RowVectorXd>(chosen[r].data(), d);
    }
    m.row(m.rows() - 1) = Eigen::Map<const Eigen::RowVectorXd>(p.data(), d);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    if (static_cast<std::size_t>(lu.rank()) == chosen.size() + 1) chosen.push_back(p);
  }
  return chosen;
}

std::vector<double> polar_angles(const std::vector<double>& w) {
  const PolarForm p = to_polar(WeightVector(w));
  return {p.theta.values().begin(), p.theta.values().end()};
}

double relative_tie(std::span<const double> a, std::span<const double> b,
                    std::span<const double> w) {
  double fa = 0.0, fb = 0.0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    fa += a[k] * w[k];
    fb += b[k] * w[k];
  }
  const double scale = std::max({std::abs(fa), std::abs(fb), 1e-300});
  return std::abs(fa - fb) / scale;
}

// Solve Theta h = rhs; nullopt if singular or the fit does not reproduce rhs.
std::optional<std::vector<double>> solve_plane(const Eigen::MatrixXd& theta,
                                               double rhs) {
  const Eigen::Index m = theta.rows();
  Eigen::FullPivLU<Eigen::MatrixXd> lu(theta);
  lu.setThreshold(1e-10);
  if (lu.rank() < m) return std::nullopt;
  Eigen::VectorXd h = lu.solve(Eigen::VectorXd::Constant(m, rhs));
  if (!h.allFinite()) return std::nullopt;
  if (((theta * h).array() - rhs).abs().maxCoeff() > kResidualTolerance) {
    return std::nullopt;
  }
  return std::vector<double>(h.data(), h.data() + m);
}

}  // namespace

bool dominates(std::span<const double> a, std::span<const double> b) {
  check_dims(a, b);
  bool strict = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
    strict = strict || a[k] > b[k];
  }
  return strict;
}

Exchange2D exchange_angle_2d(std::span<const double> a, std::span<const double> b) {
  check_dims(a, b);
  if (a.size() != 2) throw std::invalid_argument("exchange_angle_2d needs d = 2");
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  if (dx == 0.0 && dy == 0.0) return {ExchangeStatus::kCoincident, 0.0};
  // A tie needs cos t * dx + sin t * dy = 0 with t in [0, pi/2], which is only
  // possible when the differences have opposite signs.
  if ((dx >= 0.0 && dy >= 0.0) || (dx <= 0.0 && dy <= 0.0)) {
    return {ExchangeStatus::kDominance, 0.0};
  }
  return {ExchangeStatus::kOk, std::atan2(std::abs(dx), std::abs(dy))};
}

WeightSpaceExchange weight_space_exchange(std::span<const double> a,
                                          std::span<const double> b, ItemId item_i,
                                          ItemId item_j) {
  check_dims(a, b);
  WeightSpaceExchange out{std::vector<double>(a.size()), item_i, item_j};
  bool nonzero = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    out.normal[k] = a[k] - b[k];
    nonzero = nonzero || out.normal[k] != 0.0;
  }
  if (!nonzero) throw DegenerateExchange("coincident items");
  return out;
}

double AngleHyperplane::eval(std::span<const double> theta) const {
  double s = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * theta[k];
  return s;
}

double AngleHyperplane::norm() const {
  double s = 0.0;
  for (double c : coeffs) s += c * c;
  return std::sqrt(s);
}

HyperpolarFit hyperpolar_fit(std::span<const double> a, std::span<const double> b,
                             ItemId item_i, ItemId item_j) {
  check_dims(a, b);
  const std::size_t d = a.size();
  if (d < 3) throw std::invalid_argument("hyperpolar needs d >= 3");
  const auto normal = weight_space_exchange(a, b, item_i, item_j).normal;
  if (dominates(a, b) || dominates(b, a)) {
    throw DegenerateExchange("dominated pair has no exchange");
  }

  const auto gens = cone_generators(normal);
  std::vector<double> centroid(d, 0.0);
  for (const auto& g : gens) {
    for (std::size_t k = 0; k < d; ++k) centroid[k] += g[k] / gens.size();
  }

  const std::size_t m = d - 1;
  std::vector<std::vector<double>> last_support;
  for (double lambda : kNudges) {
    // Pull each generator toward the centroid so no point sits on an axis,
    // where some polar angles are undefined. Convex combinations stay in the
    // cone, so every point still ties the pair.
    std::vector<std::vector<double>> pts;
    for (const auto& g : gens) {
      std::vector<double> p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = (1.0 - lambda) * g[k] + lambda * centroid[k];
      pts.push_back(std::move(p));
    }
    auto chosen = independent_subset(pts, m);
    if (chosen.size() < m) throw DegenerateExchange("exchange cone is degenerate");

    Eigen::MatrixXd theta(m, m);
    std::vector<std::vector<double>> support;
    for (std::size_t r = 0; r < m; ++r) {
      support.push_back(polar_angles(chosen[r]));
      for (std::size_t k = 0; k < m; ++k) theta(r, k) = support[r][k];
    }
    if (auto h = solve_plane(theta, 1.0)) {
      return {AngleHyperplane{std::move(*h), false, item_i, item_j}, std::move(support)};
    }
    last_support = std::move(support);
    if (lambda == kNudges[std::size(kNudges) - 1]) {
      // Still singular: the support points span a plane through the origin.
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(theta, Eigen::ComputeFullV);
      Eigen::VectorXd h = svd.matrixV().col(m - 1);
      Eigen::Index big = 0;
      h.cwiseAbs().maxCoeff(&big);
      if (h[big] < 0.0) h = -h;
      if ((theta * h).cwiseAbs().maxCoeff() <= kResidualTolerance * h.norm()) {
        return {AngleHyperplane{std::vector<double>(h.data(), h.data() + m), true,
                                item_i, item_j},
                std::move(last_support)};
      }
    }
  }
  throw DegenerateExchange("degenerate exchange");
}

AngleHyperplane hyperpolar(std::span<const double> a, std::span<const double> b,
                           ItemId item_i, ItemId item_j) {
  return hyperpolar_fit(a, b, item_i, item_j).plane;
}

double hyperpolar_residual(const HyperpolarFit& fit, std::span<const double> a,
                           std::span<const double> b) {
  double worst = 0.0;
  for (const auto& theta : fit.support) {
    std::vector<double> w(theta.size() + 1);
    unit_ray(theta, w);
    worst = std::max(worst, relative_tie(a, b, w));
  }
  return worst;
}

std::vector<AngleHyperplane> build_exchange_set(const Dataset& data,
                                                ExchangeSetStats* stats) {
  ExchangeSetStats local;
  std::vector<std::size_t> rows;
  std::map<std::vector<double>, std::size_t> seen;
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto r = data.row(i);
    if (seen.emplace(std::vector<double>(r.begin(), r.end()), i).second) {
      rows.push_back(i);
    } else {
      ++local.coincident;
    }
  }

  std::vector<AngleHyperplane> planes;
  for (std::size_t x = 0; x < rows.size(); ++x) {
    for (std::size_t y = x + 1; y < rows.size(); ++y) {
      ++local.pairs;
      auto a = data.row(rows[x]);
      auto b = data.row(rows[y]);
      if (dominates(a, b) || dominates(b, a)) {
        ++local.dominated;
        continue;
      }
      try {
        planes.push_back(hyperpolar(a, b, data.id(rows[x]), data.id(rows[y])));
        if (planes.back().homogeneous) ++local.homogeneous;
      } catch (const DegenerateExchange&) {
        ++local.degenerate;
      }
    }
  }
  if (stats) *stats = local;
  return planes;
}

}  // namespace fairrank
