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

#ifndef FAIRRANK_PLANNER2D_HPP_
#define FAIRRANK_PLANNER2D_HPP_

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "fairrank/dataset.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/geometry.hpp"

namespace fairrank {

/// Closed satisfactory angle range [lo, hi]. suggest_lo / suggest_hi sit just
/// inside the ends and were checked against the oracle at build time; they
/// are what queries hand out.
struct Range2D {
  double lo = 0.0;
  double hi = 0.0;
  double suggest_lo = 0.0;
  double suggest_hi = 0.0;
};

struct Boundary2D {
  double theta = 0.0;
  bool start = true;
};

struct SatisfactoryRanges2D {
  std::vector<Range2D> ranges;  // sorted, disjoint, not touching

  bool empty() const { return ranges.empty(); }
  std::vector<Boundary2D> boundaries() const;
  /// Index of the range containing theta, or -1.
  long find(double theta) const;
};

struct SweepStats {
  std::size_t events = 0;
  std::size_t batched_events = 0;
  std::size_t sectors = 0;
  std::size_t satisfactory_sectors = 0;
  std::size_t dropped_ranges = 0;
};

/// Offline ray sweep over [0, pi/2]. Declarative oracles compiled for the
/// same dataset are tracked incrementally; anything else is called once per
/// sector on the full order.
SatisfactoryRanges2D raysweep_2d(const Dataset& data, const FairnessOracle& oracle,
                                 SweepStats* stats = nullptr);

struct Answer2D {
  WeightVector weights;
  double theta = 0.0;     // angle of the returned weights
  double distance = 0.0;  // |theta - query angle|
  bool as_is = false;
};

/// Unchanged if w's angle is inside a range, else the nearest suggested
/// boundary at w's norm. Throws Unsatisfiable on empty ranges.
Answer2D online_2d(const SatisfactoryRanges2D& ranges, const WeightVector& w);

}  // namespace fairrank

#endif  // FAIRRANK_PLANNER2D_HPP_
