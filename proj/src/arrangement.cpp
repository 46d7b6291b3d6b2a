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

#include "fairrank/arrangement.hpp"

#include <algorithm>
#include <limits>
#include <utility>
#include <stdexcept>

#include "fairrank/geometry.hpp"

namespace fairrank {
namespace {

// Band around the exact thresholds where the polygon answer is not trusted.
constexpr double kPolygonSlack = 1e-9;

std::vector<double> shrunk_box(const Box& box) {
  const double x0 = box.lo[0] + kFeasibilityMargin, x1 = box.hi[0] - kFeasibilityMargin;
  const double y0 = box.lo[1] + kFeasibilityMargin, y1 = box.hi[1] - kFeasibilityMargin;
  if (x0 > x1 || y0 > y1) return {};
  return {x0, y0, x1, y0, x1, y1, x0, y1};
}

// Keep the part of a convex polygon with a.v <= b.
std::vector<double> clip(const std::vector<double>& poly, double ax, double ay, double b) {
  std::vector<double> out;
  const std::size_t n = poly.size() / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double px = poly[2 * i], py = poly[2 * i + 1];
    const double qx = poly[2 * j], qy = poly[2 * j + 1];
    const double sp = ax * px + ay * py - b, sq = ax * qx + ay * qy - b;
    if (sp <= 0.0) out.insert(out.end(), {px, py});
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
      const double t = sp / (sp - sq);
      out.insert(out.end(), {px + t * (qx - px), py + t * (qy - py)});
    }
  }
  return out;
}

std::vector<double> clip_side(const std::vector<double>& poly, const AngleHyperplane& plane,
                              bool positive) {
  if (poly.empty()) return {};
  const double norm = plane.norm();
  const double sign = positive ? -1.0 : 1.0;
  return clip(poly, sign * plane.coeffs[0] / norm, sign * plane.coeffs[1] / norm,
              sign * plane.offset() / norm - kFeasibilityMargin);
}

// Vertex average; inside the polygon since it is convex.
std::vector<double> vertex_mean(const std::vector<double>& poly) {
  double x = 0.0, y = 0.0;
  const double n = static_cast<double>(poly.size() / 2);
  for (std::size_t i = 0; i < poly.size(); i += 2) {
    x += poly[i];
    y += poly[i + 1];
  }
  return {x / n, y / n};
}

// Range of signed distances to the plane over the polygon's vertices.
std::pair<double, double> distance_range(const std::vector<double>& poly,
                                         const AngleHyperplane& plane) {
  const double norm = plane.norm();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t i = 0; i < poly.size(); i += 2) {
    const double s =
        (plane.coeffs[0] * poly[i] + plane.coeffs[1] * poly[i + 1] - plane.offset()) / norm;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  return {lo, hi};
}

}  // namespace

ArrangementTree::Verdict ArrangementTree::polygon_crosses(const Node& n,
                                                          const AngleHyperplane& plane) const {
  if (n.shrunk.empty()) return Verdict::kUnsure;
  const auto [lo, hi] = distance_range(n.shrunk, plane);
  const double d = kFeasibilityMargin;
  if (lo < d - kPolygonSlack && hi > -d + kPolygonSlack) return Verdict::kYes;
  if (lo > d + kPolygonSlack || hi < -d - kPolygonSlack) return Verdict::kNo;
  return Verdict::kUnsure;
}

ArrangementTree::Verdict ArrangementTree::polygon_side(const Node& n,
                                                       const AngleHyperplane& plane,
                                                       bool positive) const {
  if (n.shrunk.empty()) return Verdict::kUnsure;
  const auto [lo, hi] = distance_range(n.shrunk, plane);
  const double d = kFeasibilityMargin;
  const double reach = positive ? hi : -lo;  // deepest vertex on that side
  if (reach > d + kPolygonSlack) return Verdict::kYes;
  if (reach < d - kPolygonSlack) return Verdict::kNo;
  return Verdict::kUnsure;
}

ArrangementTree::ArrangementTree(std::span<const AngleHyperplane> planes, Box box)
    : planes_(planes), box_(std::move(box)) {
  auto root = find_feasible_point(planes_, {}, box_);
  if (!root) throw std::invalid_argument("arrangement box has no interior");
  nodes_.push_back(Node{-1, -1, -1, std::move(root->theta), {}});
  if (box_.dim() == 2) nodes_.front().shrunk = shrunk_box(box_);
}

bool ArrangementTree::insert(std::uint32_t plane, const Probe& probe) {
  if (plane >= planes_.size()) throw std::out_of_range("plane index");
  if (planes_[plane].dim() != box_.dim()) throw std::invalid_argument("plane dimension mismatch");
  std::vector<HalfSpace> path;
  return insert_at(0, plane, path, probe);
}

bool ArrangementTree::insert_at(std::size_t node, std::uint32_t plane,
                                std::vector<HalfSpace>& path, const Probe& probe) {
  const AngleHyperplane& h = planes_[plane];
  if (nodes_[node].plane < 0) {
    const Verdict vm = polygon_side(nodes_[node], h, false);
    const Verdict vp = polygon_side(nodes_[node], h, true);
    if (vm == Verdict::kNo || vp == Verdict::kNo) return false;
    auto shrunk_minus = clip_side(nodes_[node].shrunk, h, false);
    auto shrunk_plus = clip_side(nodes_[node].shrunk, h, true);
    std::vector<double> w_minus, w_plus;
    if (vm == Verdict::kYes && vp == Verdict::kYes && !shrunk_minus.empty() &&
        !shrunk_plus.empty()) {
      w_minus = vertex_mean(shrunk_minus);
      w_plus = vertex_mean(shrunk_plus);
    } else {
      path.push_back({plane, false});
      auto minus = find_feasible_point(planes_, path, box_);
      path.back().positive = true;
      auto plus = minus ? find_feasible_point(planes_, path, box_) : std::nullopt;
      path.pop_back();
      if (!minus || !plus) return false;  // misses, or tangent within the margin
      w_minus = std::move(minus->theta);
      w_plus = std::move(plus->theta);
    }

    const auto m = static_cast<std::int64_t>(nodes_.size());
    nodes_.push_back(Node{-1, -1, -1, std::move(w_minus), std::move(shrunk_minus)});
    nodes_.push_back(Node{-1, -1, -1, std::move(w_plus), std::move(shrunk_plus)});
    nodes_[node].plane = plane;
    nodes_[node].minus = m;
    nodes_[node].plus = m + 1;
    ++leaves_;
    if (probe) {
      if (probe(nodes_[static_cast<std::size_t>(m)].witness)) return true;
      if (probe(nodes_[static_cast<std::size_t>(m + 1)].witness)) return true;
    }
    return false;
  }
  const auto split = static_cast<std::uint32_t>(nodes_[node].plane);
  for (bool positive : {false, true}) {
    const auto child = static_cast<std::size_t>(positive ? nodes_[node].plus : nodes_[node].minus);
    path.push_back({split, positive});
    ++crossing_tests_;
    bool stop = false;
    const Verdict v = polygon_crosses(nodes_[child], h);
    if (v == Verdict::kYes ||
        (v == Verdict::kUnsure && hyperplane_crosses(h, planes_, path, box_))) {
      stop = insert_at(child, plane, path, probe);
    }
    path.pop_back();
    if (stop) return true;
  }
  return false;
}

void ArrangementTree::collect(std::size_t node, std::vector<HalfSpace>& path,
                              std::vector<Region>& out) const {
  const Node& n = nodes_[node];
  if (n.plane < 0) {
    Region r{path, n.witness};
    std::sort(r.halves.begin(), r.halves.end());
    out.push_back(std::move(r));
    return;
  }
  path.push_back({static_cast<std::uint32_t>(n.plane), false});
  collect(static_cast<std::size_t>(n.minus), path, out);
  path.back().positive = true;
  collect(static_cast<std::size_t>(n.plus), path, out);
  path.pop_back();
}

std::vector<Region> ArrangementTree::regions() const {
  std::vector<Region> out;
  std::vector<HalfSpace> path;
  collect(0, path, out);
  return out;
}

std::vector<Region> naive_arrangement(std::span<const AngleHyperplane> planes,
                                      std::span<const std::uint32_t> order, const Box& box) {
  auto root = find_feasible_point(planes, {}, box);
  if (!root) throw std::invalid_argument("arrangement box has no interior");
  std::vector<Region> regions{Region{{}, std::move(root->theta)}};
  for (std::uint32_t p : order) {
    std::vector<Region> next;
    for (auto& r : regions) {
      auto halves = r.halves;
      halves.push_back({p, false});
      auto minus = find_feasible_point(planes, halves, box);
      halves.back().positive = true;
      auto plus = minus ? find_feasible_point(planes, halves, box) : std::nullopt;
      if (minus && plus) {
        halves.back().positive = false;
        next.push_back(Region{halves, std::move(minus->theta)});
        halves.back().positive = true;
        next.push_back(Region{halves, std::move(plus->theta)});
      } else {
        next.push_back(std::move(r));
      }
    }
    regions = std::move(next);
  }
  for (auto& r : regions) std::sort(r.halves.begin(), r.halves.end());
  return regions;
}

Ranking witness_ranking(const Dataset& data, std::span<const double> theta) {
  std::vector<double> w(theta.size() + 1);
  unit_ray(theta, w);
  return order_by(data, w);
}

SatRegions sat_regions(const Dataset& data, const FairnessOracle& oracle) {
  if (data.dim() < 3) throw std::invalid_argument("sat_regions needs d >= 3");
  SatRegions out;
  out.planes = build_exchange_set(data);
  ArrangementTree tree(out.planes, Box::orthant(data.dim() - 1));
  for (std::uint32_t p = 0; p < out.planes.size(); ++p) tree.insert(p);
  for (auto& r : tree.regions()) {
    const Ranking order = witness_ranking(data, r.witness);
    (oracle(order) ? out.satisfactory : out.removed).push_back(std::move(r));
  }
  return out;
}

}  // namespace fairrank
