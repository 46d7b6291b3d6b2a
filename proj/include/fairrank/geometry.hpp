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

#ifndef FAIRRANK_GEOMETRY_HPP_
#define FAIRRANK_GEOMETRY_HPP_

#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairrank {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;

/// Absolute tolerance for geometric identities (round trips, coincidence).
inline constexpr double kGeometryTolerance = 1e-9;

class GeometryError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear scoring function: d non-negative weights, not all zero.
/// Any positive rescaling induces the same ordering.
class WeightVector {
 public:
  explicit WeightVector(std::vector<double> weights);

  std::size_t dim() const { return w_.size(); }
  std::span<const double> values() const { return w_; }
  double operator[](std::size_t k) const { return w_[k]; }
  double norm() const;

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

 private:
  std::vector<double> w_;
};

/// A ray in the first orthant of R^d given by d-1 angles in [0, pi/2].
///
/// Convention: Cartesian component k of the unit ray is
///   sin(theta_k) * prod_{l > k} cos(theta_l)
/// with theta_0 fixed to pi/2, so component 0 is prod_l cos(theta_l) and
/// the last component is sin(theta_{d-1}). In 2D this is (cos t, sin t).
class AngleVector {
 public:
  /// Values within 1e-12 outside [0, pi/2] are clamped; anything further out
  /// is rejected.
  explicit AngleVector(std::vector<double> theta);

  std::size_t dim() const { return theta_.size(); }
  std::span<const double> values() const { return theta_; }
  double operator[](std::size_t k) const { return theta_[k]; }

  friend bool operator==(const AngleVector&, const AngleVector&) = default;

 private:
  std::vector<double> theta_;
};

struct PolarForm {
  double radius;
  AngleVector theta;
};

PolarForm to_polar(const WeightVector& w);
WeightVector to_cartesian(double radius, const AngleVector& theta);

/// Unit ray for an angle vector, written into `out` (size dim()+1).
void unit_ray(std::span<const double> theta, std::span<double> out);
std::vector<double> unit_ray(const AngleVector& theta);

/// Angle between two rays, in [0, pi/2] for first-orthant rays.
double angle_distance(const AngleVector& a, const AngleVector& b);
double angle_distance(std::span<const double> a, std::span<const double> b);

/// Angle between two non-zero weight vectors.
double weight_angle(std::span<const double> a, std::span<const double> b);

}  // namespace fairrank

#endif  // FAIRRANK_GEOMETRY_HPP_
