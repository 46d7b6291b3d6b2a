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

#include "fairrank/partition.hpp"

#include <algorithm>
#include <cmath>

#include "fairrank/geometry.hpp"

namespace fairrank {
namespace {

constexpr double kEndSlack = 1e-12;

// Next row border on the axis being cut, given the lower borders `prefix` of
// the rows already fixed on earlier axes and the current angle theta.
double next_angle(std::span<const double> prefix, double theta, double gamma) {
  // sum_{k=0}^{i-1} sin^2 T_k prod_{l=k+1}^{i-1} cos^2 T_l, with T_0 = pi/2.
  double sum = 0.0;
  for (std::size_t k = 0; k <= prefix.size(); ++k) {
    const double tk = k == 0 ? kHalfPi : prefix[k - 1];
    double term = std::sin(tk) * std::sin(tk);
    for (std::size_t l = k + 1; l <= prefix.size(); ++l) {
      term *= std::cos(prefix[l - 1]) * std::cos(prefix[l - 1]);
    }
    sum += term;
  }
  const double alpha = std::cos(theta) * sum;
  const double beta = std::sin(theta);
  const double delta = std::atan2(beta, alpha);
  const double big_delta = std::hypot(alpha, beta);
  const double ratio = std::min(1.0, std::cos(gamma) / big_delta);
  return std::acos(ratio) + delta;
}

void build(AnglePartition& part, std::size_t level, std::vector<double>& prefix,
           std::uint32_t parent) {
  auto& rows = part.levels[level];
  const auto first = static_cast<std::uint32_t>(rows.size());
  double theta = 0.0;
  while (theta < kHalfPi - kEndSlack) {
    const double next = next_angle(prefix, theta, part.gamma);
    if (!(next > theta)) throw PartitionError("partition stalled");
    AnglePartition::Node node;
    node.lo = theta;
    node.hi = std::min(next, kHalfPi);
    if (node.hi > kHalfPi - kEndSlack) node.hi = kHalfPi;
    node.parent = parent;
    rows.push_back(node);
    theta = node.hi;
  }
  const auto count = static_cast<std::uint32_t>(rows.size() - first);
  if (level > 0) {
    part.levels[level - 1][parent].first = first;
    part.levels[level - 1][parent].count = count;
  }
  if (level + 1 < part.levels.size()) {
    for (std::uint32_t r = first; r < first + count; ++r) {
      prefix.push_back(part.levels[level][r].lo);
      build(part, level + 1, prefix, r);
      prefix.pop_back();
    }
  }
}

}  // namespace

double cell_area(std::size_t n_cells, std::size_t d) {
  if (n_cells == 0 || d < 2) throw std::invalid_argument("cell_area needs N >= 1, d >= 2");
  const double dd = static_cast<double>(d);
  return std::pow(kPi, dd / 2.0) /
         (static_cast<double>(n_cells) * std::pow(2.0, dd - 1.0) * std::tgamma(dd / 2.0));
}

double gamma_for(std::size_t n_cells, std::size_t d) {
  const double side = std::pow(cell_area(n_cells, d), 1.0 / static_cast<double>(d - 1));
  return 2.0 * std::asin(std::min(1.0, side / 2.0));
}

AnglePartition partition(std::size_t n_cells, std::size_t d) {
  AnglePartition part;
  part.d = d;
  part.gamma = gamma_for(n_cells, d);
  part.n_target = n_cells;
  part.levels.resize(d - 1);
  std::vector<double> prefix;
  build(part, 0, prefix, 0);
  return part;
}

Box AnglePartition::cell_box(std::size_t cell) const {
  const std::size_t m = axes();
  std::vector<double> lo(m), hi(m);
  std::size_t idx = cell;
  for (std::size_t k = m; k-- > 0;) {
    const Node& n = levels[k][idx];
    lo[k] = n.lo;
    hi[k] = n.hi;
    idx = n.parent;
  }
  return Box(std::move(lo), std::move(hi));
}

std::vector<double> AnglePartition::cell_center(std::size_t cell) const {
  return cell_box(cell).center();
}

std::size_t AnglePartition::locate(std::span<const double> theta) const {
  if (theta.size() != axes()) throw std::invalid_argument("angle dimension mismatch");
  std::size_t first = 0, count = levels.front().size();
  std::size_t idx = 0;
  for (std::size_t k = 0; k < axes(); ++k) {
    const double t = theta[k];
    if (!(t >= 0.0 && t <= kHalfPi)) throw std::out_of_range("angle outside [0, pi/2]");
    const auto& rows = levels[k];
    auto begin = rows.begin() + static_cast<std::ptrdiff_t>(first);
    auto end = begin + static_cast<std::ptrdiff_t>(count);
    auto it = std::lower_bound(begin, end, t, [](const Node& n, double v) { return n.hi < v; });
    if (it == end) --it;
    idx = static_cast<std::size_t>(it - rows.begin());
    first = it->first;
    count = it->count;
  }
  return idx;
}

}  // namespace fairrank
