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

#include "fairrank/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fairrank/geometry.hpp"
#include "fairrank/lp.hpp"

namespace fairrank {
namespace {

// Variables are (theta_1..theta_m, t); every region row gets +t so that t is
// the common slack. Rows 0..m-1 are the upper box faces and row m is t <= 1;
// together they form a dual-feasible starting basis.
LpProblem chebyshev_problem(const Box& box) {
  const std::size_t m = box.dim();
  LpProblem lp(m + 1);
  lp.c[m] = 1.0;
  std::vector<double> row(m + 1, 0.0);
  for (std::size_t k = 0; k < m; ++k) {
    std::fill(row.begin(), row.end(), 0.0);
    row[k] = 1.0;
    row[m] = 1.0;
    lp.add_row(row, box.hi[k]);
  }
  std::fill(row.begin(), row.end(), 0.0);
  row[m] = 1.0;
  lp.add_row(row, 1.0);
  for (std::size_t k = 0; k < m; ++k) {
    std::fill(row.begin(), row.end(), 0.0);
    row[k] = -1.0;
    row[m] = 1.0;
    lp.add_row(row, -box.lo[k]);
  }
  return lp;
}

void add_plane_row(LpProblem& lp, const AngleHyperplane& plane, double sign,
                   double t_coeff, double extra) {
  const std::size_t m = plane.dim();
  const double norm = plane.norm();
  if (!(norm > 0.0)) throw std::invalid_argument("hyperplane has zero coefficients");
  std::vector<double> row(m + 1);
  // sign = +1 encodes h.theta <= offset, -1 encodes h.theta >= offset.
  for (std::size_t k = 0; k < m; ++k) row[k] = sign * plane.coeffs[k] / norm;
  row[m] = t_coeff;
  lp.add_row(row, sign * plane.offset() / norm + extra);
}

std::optional<FeasiblePoint> solve(LpProblem& lp, std::size_t m) {
  std::vector<std::size_t> basis(m + 1);
  for (std::size_t k = 0; k <= m; ++k) basis[k] = k;
  const LpSolution sol = maximize(lp, basis);
  if (sol.status != LpStatus::kOptimal) return std::nullopt;
  if (sol.y[m] < kFeasibilityMargin) return std::nullopt;
  FeasiblePoint fp;
  fp.theta.assign(sol.y.begin(), sol.y.begin() + static_cast<std::ptrdiff_t>(m));
  fp.depth = sol.y[m];
  return fp;
}

void check_planes(std::span<const AngleHyperplane> planes,
                  std::span<const HalfSpace> halves, std::size_t m) {
  for (const auto& h : halves) {
    if (h.plane >= planes.size()) throw std::out_of_range("half-space plane index");
    if (planes[h.plane].dim() != m) throw std::invalid_argument("plane dimension mismatch");
  }
}

}  // namespace

Box::Box(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
  if (lo.size() != hi.size()) throw std::invalid_argument("box corner dimension mismatch");
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (!(lo[k] <= hi[k]) || lo[k] < 0.0 || hi[k] > kHalfPi + 1e-12) {
      throw std::invalid_argument("box outside [0, pi/2] or inverted");
    }
  }
}

Box Box::orthant(std::size_t m) {
  return Box(std::vector<double>(m, 0.0), std::vector<double>(m, kHalfPi));
}

std::vector<double> Box::center() const {
  std::vector<double> c(lo.size());
  for (std::size_t k = 0; k < lo.size(); ++k) c[k] = 0.5 * (lo[k] + hi[k]);
  return c;
}

bool Box::contains(std::span<const double> theta) const {
  for (std::size_t k = 0; k < lo.size(); ++k) {
    if (theta[k] < lo[k] || theta[k] > hi[k]) return false;
  }
  return true;
}

double halfspace_margin(const AngleHyperplane& plane, bool positive,
                        std::span<const double> theta) {
  const double s = (plane.eval(theta) - plane.offset()) / plane.norm();
  return positive ? s : -s;
}

std::optional<FeasiblePoint> find_feasible_point(std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box) {
  check_planes(planes, halves, box.dim());
  LpProblem lp = chebyshev_problem(box);
  for (const auto& h : halves) {
    add_plane_row(lp, planes[h.plane], h.positive ? -1.0 : 1.0, 1.0, 0.0);
  }
  return solve(lp, box.dim());
}

std::optional<FeasiblePoint> find_point_on_plane(const AngleHyperplane& plane,
                                                 std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box) {
  check_planes(planes, halves, box.dim());
  if (plane.dim() != box.dim()) throw std::invalid_argument("plane dimension mismatch");
  LpProblem lp = chebyshev_problem(box);
  for (const auto& h : halves) {
    add_plane_row(lp, planes[h.plane], h.positive ? -1.0 : 1.0, 1.0, 0.0);
  }
  add_plane_row(lp, plane, 1.0, 0.0, kFeasibilityMargin);
  add_plane_row(lp, plane, -1.0, 0.0, kFeasibilityMargin);
  return solve(lp, box.dim());
}

bool hyperplane_crosses(const AngleHyperplane& plane,
                        std::span<const AngleHyperplane> planes,
                        std::span<const HalfSpace> halves, const Box& box) {
  return find_point_on_plane(plane, planes, halves, box).has_value();
}

double LinearRows::depth(std::span<const double> theta) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows(); ++i) {
    auto r = row(i);
    double s = b[i];
    for (std::size_t k = 0; k < dim; ++k) s -= r[k] * theta[k];
    best = std::min(best, s);
  }
  return best;
}

LinearRows region_rows(std::span<const AngleHyperplane> planes,
                       std::span<const HalfSpace> halves, const Box& box) {
  check_planes(planes, halves, box.dim());
  const std::size_t m = box.dim();
  LinearRows out;
  out.dim = m;
  for (std::size_t k = 0; k < m; ++k) {
    for (double sign : {1.0, -1.0}) {
      for (std::size_t j = 0; j < m; ++j) out.a.push_back(j == k ? sign : 0.0);
      out.b.push_back(sign > 0 ? box.hi[k] : -box.lo[k]);
    }
  }
  for (const auto& h : halves) {
    const auto& plane = planes[h.plane];
    const double sign = h.positive ? -1.0 : 1.0;
    const double norm = plane.norm();
    for (std::size_t k = 0; k < m; ++k) out.a.push_back(sign * plane.coeffs[k] / norm);
    out.b.push_back(sign * plane.offset() / norm);
  }
  return out;
}

std::optional<std::vector<double>> extreme_point(std::span<const AngleHyperplane> planes,
                                                 std::span<const HalfSpace> halves,
                                                 const Box& box, std::span<const double> c,
                                                 double margin) {
  const std::size_t m = box.dim();
  LpProblem lp = chebyshev_problem(box);
  lp.b[m] = margin;  // t <= margin
  for (const auto& h : halves) {
    add_plane_row(lp, planes[h.plane], h.positive ? -1.0 : 1.0, 1.0, 0.0);
  }
  // Objective c.theta + K t with K large enough that t sits at `margin`
  // whenever the region allows it. Start from the box faces c points at.
  double c_abs = 0.0;
  std::vector<std::size_t> basis(m + 1);
  for (std::size_t k = 0; k < m; ++k) {
    lp.c[k] = c[k];
    c_abs += std::abs(c[k]);
    basis[k] = c[k] >= 0.0 ? k : m + 1 + k;
  }
  basis[m] = m;
  lp.c[m] = 1e4 * (c_abs + 1.0);
  const LpSolution sol = maximize(lp, basis);
  if (sol.status != LpStatus::kOptimal || sol.y[m] < margin * (1.0 - 1e-6)) return std::nullopt;
  return std::vector<double>(sol.y.begin(), sol.y.begin() + static_cast<std::ptrdiff_t>(m));
}

bool plane_crosses_box(const AngleHyperplane& plane, std::span<const double> lo,
                       std::span<const double> hi) {
  double low = 0.0, high = 0.0;
  for (std::size_t k = 0; k < plane.coeffs.size(); ++k) {
    const double h = plane.coeffs[k];
    if (h >= 0.0) {
      low += h * lo[k];
      high += h * hi[k];
    } else {
      low += h * hi[k];
      high += h * lo[k];
    }
  }
  const double c = plane.offset();
  return low <= c && c <= high;
}

bool plane_crosses_box(const AngleHyperplane& plane, const Box& box) {
  return plane_crosses_box(plane, box.lo, box.hi);
}

}  // namespace fairrank
