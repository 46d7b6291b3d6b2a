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

#ifndef FAIRRANK_FEASIBILITY_HPP_
#define FAIRRANK_FEASIBILITY_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fairrank/exchange.hpp"

namespace fairrank {

/// Required slack for a point to count as strictly inside a region. Measured
/// as Euclidean distance in angle space (rows are normalized).
inline constexpr double kFeasibilityMargin = 1e-7;

/// Reference to planes[plane] with a side: positive means h.theta >= offset.
struct HalfSpace {
  std::uint32_t plane = 0;
  bool positive = false;

  friend auto operator<=>(const HalfSpace&, const HalfSpace&) = default;
};

/// Axis-aligned box in angle space, inside [0, pi/2]^m.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;

  Box() = default;
  Box(std::vector<double> lo, std::vector<double> hi);
  static Box orthant(std::size_t m);

  std::size_t dim() const { return lo.size(); }
  std::vector<double> center() const;
  bool contains(std::span<const double> theta) const;
};

struct FeasiblePoint {
  std::vector<double> theta;
  double depth = 0.0;  // smallest normalized slack over all constraints
};

/// Signed distance from theta to the plane's boundary, positive on the
/// requested side.
double halfspace_margin(const AngleHyperplane& plane, bool positive,
                        std::span<const double> theta);

/// Deepest point of the region (Chebyshev centre, depth capped at 1) if its
/// depth reaches kFeasibilityMargin.
std::optional<FeasiblePoint> find_feasible_point(std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box);

/// As above, also keeping the point within kFeasibilityMargin of `plane`.
std::optional<FeasiblePoint> find_point_on_plane(const AngleHyperplane& plane,
                                                 std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box);

bool hyperplane_crosses(const AngleHyperplane& plane,
                        std::span<const AngleHyperplane> planes,
                        std::span<const HalfSpace> halves, const Box& box);

/// Normalized rows a.theta <= b for the half-spaces and the box faces.
struct LinearRows {
  std::size_t dim = 0;
  std::vector<double> a;  // row-major
  std::vector<double> b;

  std::size_t rows() const { return b.size(); }
  std::span<const double> row(std::size_t i) const { return {a.data() + i * dim, dim}; }
  /// Smallest b_i - a_i.theta.
  double depth(std::span<const double> theta) const;
};

LinearRows region_rows(std::span<const AngleHyperplane> planes,
                       std::span<const HalfSpace> halves, const Box& box);

/// A point maximizing c.theta over the region kept `margin` inside its faces,
/// or nullopt when the region is thinner than that.
std::optional<std::vector<double>> extreme_point(std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box, std::span<const double> c,
                                                 double margin);

/// Exact corner test: min over the box of h.theta <= offset <= max.
bool plane_crosses_box(const AngleHyperplane& plane, const Box& box);
bool plane_crosses_box(const AngleHyperplane& plane, std::span<const double> lo,
                       std::span<const double> hi);

}  // namespace fairrank

#endif  // FAIRRANK_FEASIBILITY_HPP_
