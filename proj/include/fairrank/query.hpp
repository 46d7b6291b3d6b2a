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

#ifndef FAIRRANK_QUERY_HPP_
#define FAIRRANK_QUERY_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "fairrank/arrangement.hpp"
#include "fairrank/dataset.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/geometry.hpp"
#include "fairrank/grid_index.hpp"
#include "fairrank/planner2d.hpp"

namespace fairrank {

enum class QueryMode { kExact, kApproximate };

struct QueryResult {
  WeightVector input;
  bool satisfactory_as_is = false;
  std::optional<WeightVector> suggestion;
  double distance = 0.0;
  bool verified = false;
  QueryMode mode = QueryMode::kApproximate;
};

/// 4 arcsin((sqrt(d-1)/2) * cell_area(N, d)^(1/(d-1))).
double theorem7_bound(std::size_t n_cells, std::size_t d);

/// Nearest point (by angle) to `target` inside one region, kept
/// kFeasibilityMargin inside its faces. Multi-start projected gradient.
std::vector<double> nearest_in_region(std::span<const AngleHyperplane> planes,
                                      const Region& region, std::span<const double> target);

/// Exact pipeline over full arrangement regions.
QueryResult md_baseline(const SatRegions& regions, const Dataset& data,
                        const FairnessOracle& oracle, const WeightVector& w);

/// The stored assignment for w's cell; no oracle calls. Throws Unsatisfiable.
const CellAssignment& md_lookup(const CellIndex& index, std::span<const double> theta);

/// Approximate pipeline over the cell index.
QueryResult md_online(const CellIndex& index, const Dataset& data,
                      const FairnessOracle& oracle, const WeightVector& w);

/// 2D pipeline (exact).
QueryResult query_2d(const SatisfactoryRanges2D& ranges, const Dataset& data,
                     const FairnessOracle& oracle, const WeightVector& w);

}  // namespace fairrank

#endif  // FAIRRANK_QUERY_HPP_
