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

#include "fairrank/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace fairrank {
namespace {

constexpr double kClampSlack = 1e-12;

// Angle between two vectors of equal length, accurate near 0 and pi.
double vector_angle(std::span<const double> u, std::span<const double> v) {
  double nu = 0.0, nv = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    nu += u[k] * u[k];
    nv += v[k] * v[k];
  }
  nu = std::sqrt(nu);
  nv = std::sqrt(nv);
  double diff = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double a = u[k] / nu;
    const double b = v[k] / nv;
    diff += (a - b) * (a - b);
    sum += (a + b) * (a + b);
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

}  // namespace

WeightVector::WeightVector(std::vector<double> weights) : w_(std::move(weights)) {
  if (w_.empty()) throw GeometryError("weight vector is empty");
  bool any_positive = false;
  for (double x : w_) {
    if (!std::isfinite(x)) throw GeometryError("weight is not finite");
    if (x < 0.0) throw GeometryError("weight is negative");
    any_positive = any_positive || x > 0.0;
  }
  if (!any_positive) throw GeometryError("weight vector is zero");
}

double WeightVector::norm() const {
  double s = 0.0;
  for (double x : w_) s += x * x;
  return std::sqrt(s);
}

AngleVector::AngleVector(std::vector<double> theta) : theta_(std::move(theta)) {
  for (double& t : theta_) {
    if (!std::isfinite(t) || t < -kClampSlack || t > kHalfPi + kClampSlack) {
      throw GeometryError("angle outside [0, pi/2]: " + std::to_string(t));
    }
    t = std::clamp(t, 0.0, kHalfPi);
  }
}

PolarForm to_polar(const WeightVector& w) {
  const std::size_t d = w.dim();
  if (d < 2) throw GeometryError("polar form needs at least two weights");
  std::vector<double> theta(d - 1);
  // theta_k = atan2(w_k, |w_0..w_{k-1}|); an all-zero prefix pins theta_k to
  // pi/2 when w_k > 0 and leaves it at 0 otherwise.
  double prefix_sq = w[0] * w[0];
  for (std::size_t k = 1; k < d; ++k) {
    theta[k - 1] = std::atan2(w[k], std::sqrt(prefix_sq));
    prefix_sq += w[k] * w[k];
  }
  return {std::sqrt(prefix_sq), AngleVector(std::move(theta))};
}

void unit_ray(std::span<const double> theta, std::span<double> out) {
  const std::size_t d = theta.size() + 1;
  // Walk from the last component down, accumulating the cosine product.
  double cos_product = 1.0;
  for (std::size_t k = d - 1; k >= 1; --k) {
    out[k] = std::sin(theta[k - 1]) * cos_product;
    cos_product *= std::cos(theta[k - 1]);
  }
  out[0] = cos_product;
}

std::vector<double> unit_ray(const AngleVector& theta) {
  std::vector<double> out(theta.dim() + 1);
  unit_ray(theta.values(), out);
  return out;
}

WeightVector to_cartesian(double radius, const AngleVector& theta) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw GeometryError("radius must be positive");
  }
  std::vector<double> w = unit_ray(theta);
  for (double& x : w) x = std::max(0.0, x * radius);
  return WeightVector(std::move(w));
}

double angle_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw GeometryError("angle vector dimension mismatch");
  double ua[16], ub[16];
  std::vector<double> heap_a, heap_b;
  std::span<double> ra(ua, a.size() + 1), rb(ub, b.size() + 1);
  if (a.size() + 1 > 16) {
    heap_a.resize(a.size() + 1);
    heap_b.resize(b.size() + 1);
    ra = heap_a;
    rb = heap_b;
  }
  unit_ray(a, ra);
  unit_ray(b, rb);
  return vector_angle(ra, rb);
}

double angle_distance(const AngleVector& a, const AngleVector& b) {
  return angle_distance(a.values(), b.values());
}

double weight_angle(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw GeometryError("weight vector dimension mismatch");
  return vector_angle(a, b);
}

}  // namespace fairrank
