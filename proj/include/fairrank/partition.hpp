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

#ifndef FAIRRANK_PARTITION_HPP_
#define FAIRRANK_PARTITION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairrank/feasibility.hpp"

namespace fairrank {

class PartitionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Area of one of N equal cells on the first-orthant unit sphere in R^d.
double cell_area(std::size_t n_cells, std::size_t d);

/// Angle between the rays at two corners of a cell side.
double gamma_for(std::size_t n_cells, std::size_t d);

/// Angle-space grid as a tree of depth d-1: level k holds the ranges on axis
/// theta_{k+1}, each row owning a contiguous block of rows on the next level.
/// Leaves (the last level) are the cells, numbered in tree order.
struct AnglePartition {
  struct Node {
    double lo = 0.0;
    double hi = 0.0;
    std::uint32_t parent = 0;  // index into the previous level
    std::uint32_t first = 0;   // children on the next level
    std::uint32_t count = 0;
  };

  std::size_t d = 0;
  double gamma = 0.0;
  std::size_t n_target = 0;
  std::vector<std::vector<Node>> levels;

  std::size_t axes() const { return levels.size(); }
  std::size_t cell_count() const { return levels.empty() ? 0 : levels.back().size(); }
  /// Level-0 rows as a (first, count) block.
  std::uint32_t roots() const { return static_cast<std::uint32_t>(levels.front().size()); }

  Box cell_box(std::size_t cell) const;
  std::vector<double> cell_center(std::size_t cell) const;

  /// Leaf whose box holds theta; a value on a shared edge goes to the lower
  /// cell. Throws for theta outside [0, pi/2]^(d-1).
  std::size_t locate(std::span<const double> theta) const;
};

/// Rows along each axis advance by the next-angle recurrence until pi/2; the
/// last row is clamped to end at pi/2.
AnglePartition partition(std::size_t n_cells, std::size_t d);

}  // namespace fairrank

#endif  // FAIRRANK_PARTITION_HPP_
