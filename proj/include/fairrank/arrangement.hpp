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

#ifndef FAIRRANK_ARRANGEMENT_HPP_
#define FAIRRANK_ARRANGEMENT_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "fairrank/dataset.hpp"
#include "fairrank/exchange.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/feasibility.hpp"

namespace fairrank {

/// Convex cell: a set of signed half-spaces (sorted by plane index) plus a
/// point strictly inside it.
struct Region {
  std::vector<HalfSpace> halves;
  std::vector<double> witness;
};

/// Binary tree of signed half-spaces over a fixed plane store. Leaves are the
/// regions of the arrangement built so far, restricted to `box`.
class ArrangementTree {
 public:
  /// Called with the witness of each newly created leaf; returning true stops
  /// the current insertion.
  using Probe = std::function<bool(std::span<const double> witness)>;

  ArrangementTree(std::span<const AngleHyperplane> planes, Box box);

  /// Split every leaf the plane crosses. A leaf is split only when both
  /// sides are feasible at margin kFeasibilityMargin. Returns true if a probe
  /// asked to stop.
  bool insert(std::uint32_t plane, const Probe& probe = {});

  std::size_t leaf_count() const { return leaves_; }
  std::size_t node_count() const { return nodes_.size(); }
  std::vector<Region> regions() const;
  std::span<const double> root_witness() const { return nodes_.front().witness; }
  const Box& box() const { return box_; }

  std::size_t crossing_tests() const { return crossing_tests_; }

 private:
  struct Node {
    std::int64_t plane = -1;  // -1 for a leaf
    std::int64_t minus = -1;
    std::int64_t plus = -1;
    std::vector<double> witness;
    // Two angle dims only: vertices (x, y pairs) of the region shrunk by
    // kFeasibilityMargin. Empty when unknown.
    std::vector<double> shrunk;
  };

  enum class Verdict { kYes, kNo, kUnsure };
  Verdict polygon_crosses(const Node& n, const AngleHyperplane& plane) const;
  Verdict polygon_side(const Node& n, const AngleHyperplane& plane, bool positive) const;

  bool insert_at(std::size_t node, std::uint32_t plane, std::vector<HalfSpace>& path,
                 const Probe& probe);
  void collect(std::size_t node, std::vector<HalfSpace>& path,
               std::vector<Region>& out) const;

  std::span<const AngleHyperplane> planes_;
  Box box_;
  std::vector<Node> nodes_;
  std::size_t leaves_ = 1;
  std::size_t crossing_tests_ = 0;
};

/// Reference build: scan every current region for each plane.
std::vector<Region> naive_arrangement(std::span<const AngleHyperplane> planes,
                                      std::span<const std::uint32_t> order, const Box& box);

/// Ordering of the dataset under the witness's weights.
Ranking witness_ranking(const Dataset& data, std::span<const double> theta);

struct SatRegions {
  std::vector<AngleHyperplane> planes;
  std::vector<Region> satisfactory;
  std::vector<Region> removed;
};

/// Full arrangement of the dataset's exchange planes (d >= 3), split by the
/// oracle verdict on each region's witness.
SatRegions sat_regions(const Dataset& data, const FairnessOracle& oracle);

}  // namespace fairrank

#endif  // FAIRRANK_ARRANGEMENT_HPP_
