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

#ifndef FAIRRANK_GRID_INDEX_HPP_
#define FAIRRANK_GRID_INDEX_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fairrank/dataset.hpp"
#include "fairrank/exchange.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/partition.hpp"

namespace fairrank {

enum class CellSource { kDirect, kColored };

struct CellAssignment {
  std::vector<double> function;  // angle vector
  double distance = 0.0;         // to the cell centre; 0 for direct cells
  CellSource source = CellSource::kDirect;
  std::uint32_t seed = 0;        // direct cell the function came from
};

struct CellIndex {
  AnglePartition partition;
  std::vector<std::optional<CellAssignment>> cells;
  bool unsatisfiable = false;

  std::size_t direct_count() const;
  std::size_t colored_count() const;
};

/// Per-cell lists of planes crossing the cell box, ascending plane index.
/// Prunes a block of sibling rows at once when the plane misses their union.
std::vector<std::vector<std::uint32_t>> assign_planes(const AnglePartition& part,
                                                      std::span<const AngleHyperplane> planes);

struct CellSearchStats {
  std::size_t probes = 0;
  std::size_t planes_inserted = 0;
  bool budget_hit = false;
};

/// Grow the arrangement of `hc` inside `box`, probing both sides of every
/// split, and stop at the first witness the oracle accepts. An empty hc, or
/// planes that never split the cell, leave only the centre to probe.
/// max_probes = 0 means no limit.
std::optional<std::vector<double>> cell_search(const Box& box,
                                               std::span<const std::uint32_t> hc,
                                               std::span<const AngleHyperplane> planes,
                                               const Dataset& data,
                                               const FairnessOracle& oracle,
                                               std::size_t max_probes = 0,
                                               CellSearchStats* stats = nullptr);

/// Pairs of cells that touch along exactly one axis and overlap on the rest.
std::vector<std::vector<std::uint32_t>> cell_neighbors(const AnglePartition& part);

/// Give every unassigned cell the direct function angularly nearest to its
/// centre (lowest seed cell on ties). Marks the index unsatisfiable when
/// there is no direct cell.
void color_cells(CellIndex& index);

struct BuildOptions {
  std::size_t cells = 400;
  std::size_t max_probes = 0;
  std::size_t threads = 0;  // 0: hardware concurrency
  /// Extra check for each direct witness (e.g. against the full dataset when
  /// the arrangement was built on a sample). Failing cells stay unassigned.
  std::function<bool(std::span<const double> theta)> verify;
  std::function<void(const std::string& phase, std::size_t done, std::size_t total)> progress;
};

struct BuildReport {
  std::size_t planes = 0;
  std::size_t cells = 0;
  std::size_t direct = 0;
  std::size_t colored = 0;
  std::size_t rejected = 0;  // direct witnesses failing BuildOptions::verify
  std::size_t budget_hits = 0;
  std::size_t probes = 0;
  double seconds_planes = 0.0;
  double seconds_partition = 0.0;
  double seconds_assign = 0.0;
  double seconds_search = 0.0;
  double seconds_coloring = 0.0;
};

/// Whole approximation pipeline on `data` (d >= 3).
CellIndex build_cell_index(const Dataset& data, const FairnessOracle& oracle,
                           const BuildOptions& options, BuildReport* report = nullptr);

}  // namespace fairrank

#endif  // FAIRRANK_GRID_INDEX_HPP_
