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

#include "fairrank/grid_index.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>

#include <boost/geometry.hpp>
#include <boost/geometry/index/rtree.hpp>

#include "fairrank/arrangement.hpp"
#include "fairrank/geometry.hpp"

namespace fairrank {
namespace {

namespace bg = boost::geometry;
namespace bgi = boost::geometry::index;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct PlaneAssigner {
  const AnglePartition& part;
  const AngleHyperplane& plane;
  std::uint32_t id;
  std::vector<std::vector<std::uint32_t>>& hc;
  std::vector<double> lo, hi;

  void visit(std::size_t level, std::uint32_t first, std::uint32_t count) {
    const auto& rows = part.levels[level];
    lo[level] = rows[first].lo;
    hi[level] = rows[first + count - 1].hi;
    for (std::size_t k = level + 1; k < part.axes(); ++k) {
      lo[k] = 0.0;
      hi[k] = kHalfPi;
    }
    if (!plane_crosses_box(plane, lo, hi)) return;
    if (count > 1) {
      const std::uint32_t half = count / 2;
      visit(level, first, half);
      visit(level, first + half, count - half);
      return;
    }
    if (level + 1 == part.axes()) {
      hc[first].push_back(id);
      return;
    }
    visit(level + 1, rows[first].first, rows[first].count);
  }
};

constexpr std::size_t kNearestCandidates = 8;

// Nearest seed rays by Euclidean distance. R-tree for the common dimensions,
// a plain scan otherwise.
class SeedLookup {
 public:
  SeedLookup(std::size_t d, const std::vector<std::vector<double>>& rays) : rays_(rays) {
    dispatch(d, [&]<std::size_t D>() {
      auto tree = std::make_shared<Tree<D>>();
      std::vector<Value<D>> values;
      for (std::size_t i = 0; i < rays.size(); ++i) values.emplace_back(to_point<D>(rays[i]), i);
      *tree = Tree<D>(values);
      tree_ = tree;
      query_ = [tree](std::span<const double> q) {
        std::vector<Value<D>> hits;
        tree->query(bgi::nearest(to_point<D>(q), kNearestCandidates), std::back_inserter(hits));
        std::vector<std::size_t> out;
        for (const auto& h : hits) out.push_back(h.second);
        return out;
      };
    });
    if (!query_) {
      query_ = [this](std::span<const double> q) {
        std::vector<std::pair<double, std::size_t>> all;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
          double s = 0.0;
          for (std::size_t k = 0; k < q.size(); ++k) s += (q[k] - rays_[i][k]) * (q[k] - rays_[i][k]);
          all.emplace_back(s, i);
        }
        const std::size_t keep = std::min(kNearestCandidates, all.size());
        std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end());
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < keep; ++i) out.push_back(all[i].second);
        return out;
      };
    }
  }

  std::vector<std::size_t> nearest(std::span<const double> q) const { return query_(q); }

 private:
  template <std::size_t D>
  using Point = bg::model::point<double, D, bg::cs::cartesian>;
  template <std::size_t D>
  using Value = std::pair<Point<D>, std::size_t>;
  template <std::size_t D>
  using Tree = bgi::rtree<Value<D>, bgi::quadratic<16>>;

  template <std::size_t D>
  static Point<D> to_point(std::span<const double> v) {
    Point<D> p;
    [&]<std::size_t... I>(std::index_sequence<I...>) { (bg::set<I>(p, v[I]), ...); }
    (std::make_index_sequence<D>{});
    return p;
  }

  template <typename F>
  static void dispatch(std::size_t d, F&& f) {
    switch (d) {
      case 3: f.template operator()<3>(); break;
      case 4: f.template operator()<4>(); break;
      case 5: f.template operator()<5>(); break;
      case 6: f.template operator()<6>(); break;
      default: break;
    }
  }

  const std::vector<std::vector<double>>& rays_;
  std::shared_ptr<void> tree_;
  std::function<std::vector<std::size_t>(std::span<const double>)> query_;
};

bool overlaps(const AnglePartition::Node& a, const AnglePartition::Node& b) {
  return std::min(a.hi, b.hi) > std::max(a.lo, b.lo);
}

// a and b are rows on `level` that touch (on the cut axis) or overlap (on a
// later axis); pair up their descendants that overlap on every later axis.
void match(const AnglePartition& part, std::size_t level, std::uint32_t a, std::uint32_t b,
           std::vector<std::vector<std::uint32_t>>& out) {
  if (level + 1 == part.axes()) {
    out[a].push_back(b);
    out[b].push_back(a);
    return;
  }
  const auto& rows = part.levels[level];
  const auto& next = part.levels[level + 1];
  std::uint32_t i = rows[a].first, j = rows[b].first;
  const std::uint32_t iend = i + rows[a].count, jend = j + rows[b].count;
  while (i < iend && j < jend) {
    if (overlaps(next[i], next[j])) match(part, level + 1, i, j, out);
    if (next[i].hi < next[j].hi) {
      ++i;
    } else if (next[j].hi < next[i].hi) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
}

}  // namespace

std::size_t CellIndex::direct_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) {
    return c && c->source == CellSource::kDirect;
  }));
}

std::size_t CellIndex::colored_count() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) {
    return c && c->source == CellSource::kColored;
  }));
}

std::vector<std::vector<std::uint32_t>> assign_planes(const AnglePartition& part,
                                                      std::span<const AngleHyperplane> planes) {
  std::vector<std::vector<std::uint32_t>> hc(part.cell_count());
  const std::size_t m = part.axes();
  for (std::uint32_t p = 0; p < planes.size(); ++p) {
    if (planes[p].dim() != m) throw std::invalid_argument("plane dimension mismatch");
    PlaneAssigner walk{part, planes[p], p, hc, std::vector<double>(m), std::vector<double>(m)};
    walk.visit(0, 0, part.roots());
  }
  return hc;
}

std::optional<std::vector<double>> cell_search(const Box& box,
                                               std::span<const std::uint32_t> hc,
                                               std::span<const AngleHyperplane> planes,
                                               const Dataset& data,
                                               const FairnessOracle& oracle,
                                               std::size_t max_probes,
                                               CellSearchStats* stats) {
  CellSearchStats local;
  std::optional<std::vector<double>> found;
  auto probe = [&](std::span<const double> theta) {
    if (max_probes != 0 && local.probes >= max_probes) {
      local.budget_hit = true;
      return true;
    }
    ++local.probes;
    if (oracle(witness_ranking(data, theta))) {
      found.emplace(theta.begin(), theta.end());
      return true;
    }
    return false;
  };

  bool split = false;
  if (!hc.empty()) {
    ArrangementTree tree(planes, box);
    for (std::uint32_t p : hc) {
      ++local.planes_inserted;
      const bool stop = tree.insert(p, probe);
      split = split || tree.leaf_count() > 1;
      if (stop) break;
    }
  }
  if (!found && !split && !local.budget_hit) probe(box.center());
  if (stats) *stats = local;
  return found;
}

std::vector<std::vector<std::uint32_t>> cell_neighbors(const AnglePartition& part) {
  std::vector<std::vector<std::uint32_t>> out(part.cell_count());
  for (std::size_t level = 0; level < part.axes(); ++level) {
    // Consecutive siblings touch along axis `level`.
    const auto& rows = part.levels[level];
    auto sibling_pairs = [&](std::uint32_t first, std::uint32_t count) {
      for (std::uint32_t r = first; r + 1 < first + count; ++r) match(part, level, r, r + 1, out);
    };
    if (level == 0) {
      sibling_pairs(0, static_cast<std::uint32_t>(rows.size()));
    } else {
      for (const auto& parent : part.levels[level - 1]) sibling_pairs(parent.first, parent.count);
    }
  }
  for (auto& nb : out) std::sort(nb.begin(), nb.end());
  return out;
}

void color_cells(CellIndex& index) {
  const AnglePartition& part = index.partition;
  const std::size_t n = part.cell_count();
  index.cells.resize(n);
  std::vector<std::uint32_t> seeds;
  for (std::uint32_t c = 0; c < n; ++c) {
    auto& cell = index.cells[c];
    if (cell && cell->source == CellSource::kDirect) {
      cell->distance = 0.0;
      cell->seed = c;
      seeds.push_back(c);
    } else {
      cell.reset();
    }
  }
  index.unsatisfiable = seeds.empty();
  if (index.unsatisfiable) return;

  std::vector<std::vector<double>> rays;
  for (std::uint32_t s : seeds) {
    rays.emplace_back(part.d);
    unit_ray(index.cells[s]->function, rays.back());
  }
  const SeedLookup lookup(part.d, rays);
  std::vector<double> ray(part.d);
  for (std::uint32_t c = 0; c < n; ++c) {
    if (index.cells[c]) continue;
    const auto center = part.cell_center(c);
    unit_ray(center, ray);
    // Chord length orders rays like their angle; rounding can only reorder
    // near ties, so the few nearest chords are re-ranked by angle.
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_seed = 0;
    for (std::size_t k : lookup.nearest(ray)) {
      const double dist = angle_distance(center, index.cells[seeds[k]]->function);
      if (dist < best || (dist == best && seeds[k] < best_seed)) {
        best = dist;
        best_seed = seeds[k];
      }
    }
    index.cells[c] =
        CellAssignment{index.cells[best_seed]->function, best, CellSource::kColored, best_seed};
  }
}

CellIndex build_cell_index(const Dataset& data, const FairnessOracle& oracle,
                           const BuildOptions& options, BuildReport* report) {
  if (data.dim() < 3) throw std::invalid_argument("cell index needs d >= 3");
  BuildReport rep;
  auto t0 = Clock::now();
  const auto planes = build_exchange_set(data);
  rep.planes = planes.size();
  rep.seconds_planes = seconds_since(t0);
  if (options.progress) options.progress("planes", planes.size(), planes.size());

  t0 = Clock::now();
  CellIndex index;
  index.partition = partition(options.cells, data.dim());
  rep.cells = index.partition.cell_count();
  rep.seconds_partition = seconds_since(t0);

  t0 = Clock::now();
  const auto hc = assign_planes(index.partition, planes);
  rep.seconds_assign = seconds_since(t0);
  if (options.progress) options.progress("assign", rep.cells, rep.cells);

  t0 = Clock::now();
  const std::size_t n = rep.cells;
  index.cells.assign(n, std::nullopt);
  std::vector<CellSearchStats> cell_stats(n);
  std::vector<char> rejected(n, 0);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < n; c = next++) {
      const Box box = index.partition.cell_box(c);
      auto found = cell_search(box, hc[c], planes, data, oracle, options.max_probes,
                               &cell_stats[c]);
      if (found && options.verify && !options.verify(*found)) {
        rejected[c] = 1;
        found.reset();
      }
      if (found) index.cells[c] = CellAssignment{std::move(*found), 0.0, CellSource::kDirect,
                                                 static_cast<std::uint32_t>(c)};
      const std::size_t k = ++done;
      if (options.progress && (k % 256 == 0 || k == n)) {
        std::lock_guard lock(progress_mutex);
        options.progress("search", k, n);
      }
    }
  };
  std::size_t threads = options.threads ? options.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, n));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  rep.seconds_search = seconds_since(t0);
  for (std::size_t c = 0; c < n; ++c) {
    rep.probes += cell_stats[c].probes;
    rep.budget_hits += cell_stats[c].budget_hit;
    rep.rejected += rejected[c];
  }

  t0 = Clock::now();
  color_cells(index);
  rep.seconds_coloring = seconds_since(t0);
  rep.direct = index.direct_count();
  rep.colored = index.colored_count();
  if (report) *report = rep;
  return index;
}

}  // namespace fairrank
