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

// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion names as
// arguments to run a subset.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fairrank/arrangement.hpp"
#include "fairrank/exchange.hpp"
#include "fairrank/grid_index.hpp"
#include "fairrank/partition.hpp"
#include "fairrank/planner2d.hpp"
#include "fairrank/query.hpp"
#include "fairrank/service.hpp"
#include "support.hpp"

using namespace fairrank;
namespace ft = fairrank::testing;
using Clock = std::chrono::steady_clock;

namespace pinned {
constexpr double kBoundaryTol = 1e-4;             // rad, 2D sweep boundaries
constexpr std::size_t kSweepProbes = 100000;
constexpr double kSweepSeconds = 60.0;
constexpr double kOnlineMeanSeconds = 1e-3;
constexpr double kNormalTol = 1e-9;
constexpr double kHyperpolarTol = 1e-6;           // relative
constexpr double kArrangementSeconds = 120.0;
constexpr double kBoundRate = 0.95;
constexpr double kBoundSeconds = 600.0;
constexpr double kBoundAt40000 = 1.77e-2;
constexpr double kBoundAt40000Tol = 5e-5;
constexpr double kGammaTol = 1e-6;
constexpr double kLookupMeanSeconds = 1e-3;
constexpr double kSamplingRate = 0.90;
constexpr double kSamplingSeconds = 1800.0;
constexpr double kCompasDistance = 0.6;           // rad
constexpr double kCompasRate = 0.80;
}  // namespace pinned

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome exact_2d() {
  const auto t0 = Clock::now();
  std::size_t agree = 0, ranges = 0;
  std::string first_error;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto data = ft::random_dataset(50, 2, 1000 + s);
    const auto oracle = FairnessOracle::from_config(ft::at_most(10, 5), data);
    const auto r = raysweep_2d(*data, oracle);
    ranges += r.ranges.size();
    const auto sweep = ft::dense_sweep_2d(*data, oracle, pinned::kSweepProbes);
    const std::string err = ft::compare_with_sweep(r, sweep, pinned::kBoundaryTol);
    if (err.empty()) {
      ++agree;
    } else if (first_error.empty()) {
      first_error = "seed " + std::to_string(s) + ": " + err;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << agree << "/20 datasets agree with a " << pinned::kSweepProbes << "-probe sweep, " << ranges
    << " ranges, " << fmt("%.1f", secs) << " s";
  if (!first_error.empty()) d << "; " << first_error;
  return {agree == 20 && secs < pinned::kSweepSeconds, d.str()};
}

Outcome online_2d_scan() {
  const auto data = ft::random_dataset(6000, 2, 77);
  OracleConfig cfg;
  cfg.constraints.push_back({"color", "g0", Amount::share(0.05), std::nullopt, Amount::share(0.5)});
  const auto oracle = FairnessOracle::from_config(cfg, data);
  const auto t_build = Clock::now();
  const auto ranges = raysweep_2d(*data, oracle);
  const double build_secs = seconds_since(t_build);
  if (ranges.empty()) return {false, "no satisfactory range at n=6000"};

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, kHalfPi);
  std::size_t equal = 0;
  double total = 0.0;
  for (int q = 0; q < 1000; ++q) {
    const double t = u(rng);
    const WeightVector w({2.0 * std::cos(t), 2.0 * std::sin(t)});
    const auto t0 = Clock::now();
    const Answer2D a = online_2d(ranges, w);
    total += seconds_since(t0);
    // Linear scan: containment, else the nearest suggested end.
    bool inside = false;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : ranges.ranges) {
      if (r.lo <= t && t <= r.hi) inside = true;
      best = std::min({best, std::abs(t - r.suggest_lo), std::abs(t - r.suggest_hi)});
    }
    const double scan_dist = inside ? 0.0 : best;
    equal += (a.as_is == inside && std::abs(a.distance - scan_dist) <= 1e-12);
  }
  const double mean = total / 1000.0;
  std::ostringstream d;
  d << equal << "/1000 answers equal the scan, " << ranges.ranges.size() << " ranges, mean query "
    << fmt("%.2e", mean) << " s (sweep " << fmt("%.1f", build_secs) << " s)";
  return {equal == 1000 && mean < pinned::kOnlineMeanSeconds, d.str()};
}

Outcome exchange_soundness() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int p = 0; p < 1000; ++p) {
    const std::size_t d = 3 + static_cast<std::size_t>(p % 4);
    std::vector<double> a(d), b(d), w(d);
    for (std::size_t k = 0; k < d; ++k) {
      a[k] = u(rng);
      b[k] = u(rng);
    }
    const auto n = weight_space_exchange(a, b).normal;
    for (int s = 0; s < 100; ++s) {
      double dot = 0.0, fa = 0.0, fb = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        w[k] = u(rng);
        dot += n[k] * w[k];
        fa += a[k] * w[k];
        fb += b[k] * w[k];
      }
      worst = std::max(worst, std::abs(dot - (fa - fb)));
    }
  }
  // t1 = (1, 2, 3), t2 = (2, 4, 1): w1 + 2 w2 - 2 w3 = 0.
  const auto example = weight_space_exchange(std::vector{1.0, 2.0, 3.0}, std::vector{2.0, 4.0, 1.0}).normal;
  const bool example_ok = example == std::vector{-1.0, -2.0, 2.0};
  std::ostringstream d;
  d << "max |<n,w> - score diff| = " << fmt("%.2e", worst) << " over 1000 pairs x 100 w; example normal "
    << (example_ok ? "is" : "is not") << " -(1, 2, -2)";
  return {worst <= pinned::kNormalTol && example_ok, d.str()};
}

Outcome hyperpolar_residuals() {
  const auto data = ft::random_dataset(30, 3, 21);
  std::size_t planes = 0, good = 0, degenerate = 0;
  double worst = 0.0, off_support = 0.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < data->size(); ++i) {
    for (std::size_t j = i + 1; j < data->size(); ++j) {
      const auto a = data->row(i), b = data->row(j);
      if (dominates(a, b) || dominates(b, a)) continue;
      HyperpolarFit fit;
      try {
        fit = hyperpolar_fit(a, b);
      } catch (const DegenerateExchange&) {
        ++degenerate;
        continue;
      }
      ++planes;
      const double r = hyperpolar_residual(fit, a, b);
      worst = std::max(worst, r);
      good += r <= pinned::kHyperpolarTol;
      // Informational: a point on the fitted line between the support points.
      const double t = u(rng);
      std::vector<double> mid(2);
      for (int k = 0; k < 2; ++k) mid[k] = (1 - t) * fit.support[0][k] + t * fit.support[1][k];
      const auto w = ft::ray_of(mid);
      double fa = 0, fb = 0;
      for (int k = 0; k < 3; ++k) {
        fa += a[k] * w[k];
        fb += b[k] * w[k];
      }
      off_support = std::max(off_support, std::abs(fa - fb) / std::max(std::abs(fa), std::abs(fb)));
    }
  }
  std::ostringstream d;
  d << good << "/" << planes << " planes within " << pinned::kHyperpolarTol
    << " at their sample points (max " << fmt("%.2e", worst) << ", " << degenerate
    << " degenerate); between samples the max is " << fmt("%.2e", off_support);
  return {planes > 0 && good == planes && degenerate == 0, d.str()};
}

Outcome arrangement_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(8);
  const Box box = Box::orthant(2);
  std::size_t identical = 0, within = 0, total = 0, regions = 0;
  for (std::size_t k = 5; k <= 30; ++k) {
    for (int rep = 0; rep < 2; ++rep) {
      std::vector<AngleHyperplane> planes;
      for (std::size_t p = 0; p < k; ++p) planes.push_back(ft::random_plane(rng, box));
      ArrangementTree tree(planes, box);
      for (std::uint32_t p = 0; p < k; ++p) tree.insert(p);
      std::vector<std::uint32_t> order(k);
      std::iota(order.begin(), order.end(), 0u);
      std::set<std::vector<HalfSpace>> a, b;
      for (const auto& r : tree.regions()) a.insert(r.halves);
      for (const auto& r : naive_arrangement(planes, order, box)) b.insert(r.halves);
      ++total;
      identical += a == b;
      within += a.size() <= 1 + k + k * (k - 1) / 2;
      regions += a.size();
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << identical << "/" << total << " identical region sets, " << within << "/" << total
    << " within 1 + k + C(k,2), " << regions << " regions, " << fmt("%.1f", secs) << " s";
  return {identical == total && within == total && secs < pinned::kArrangementSeconds, d.str()};
}

Outcome index_soundness() {
  struct Case {
    std::shared_ptr<const Dataset> data;
    OracleConfig cfg;
    std::size_t cells;
    bool baseline;
  };
  const std::vector<Case> cases{
      {ft::random_dataset(15, 3, 1), ft::at_most(5, 2), 400, true},
      {ft::random_dataset(15, 3, 2), ft::at_most(6, 2), 900, true},
      {ft::flat_dataset(15, 3), ft::at_most(5, 2), 400, true},
      {ft::random_dataset(14, 4, 4), ft::at_most(4, 1), 300, false},
      {ft::random_dataset(12, 5, 5), ft::at_most(4, 2), 300, false},
  };
  std::size_t cells = 0, cell_fail = 0, online = 0, online_fail = 0, base = 0, base_fail = 0;
  std::mt19937_64 rng(17);
  for (const auto& c : cases) {
    const auto oracle = FairnessOracle::from_config(c.cfg, c.data);
    BuildOptions bo;
    bo.cells = c.cells;
    const CellIndex index = build_cell_index(*c.data, oracle, bo);
    for (const auto& a : index.cells) {
      if (!a) continue;
      ++cells;
      cell_fail += !ft::passes(*c.data, oracle, a->function);
    }
    std::optional<SatRegions> regions;
    if (c.baseline) regions = sat_regions(*c.data, oracle);
    for (int q = 0; q < 200; ++q) {
      const auto theta = ft::random_angles(rng, c.data->dim() - 1);
      const WeightVector w(ft::ray_of(theta));
      try {
        const auto r = md_online(index, *c.data, oracle, w);
        ++online;
        online_fail += !oracle.satisfied_by(*c.data, r.suggestion->values());
      } catch (const Unsatisfiable&) {
      }
      if (regions && q < 50) {
        try {
          const auto r = md_baseline(*regions, *c.data, oracle, w);
          ++base;
          base_fail += !oracle.satisfied_by(*c.data, r.suggestion->values());
        } catch (const Unsatisfiable&) {
        }
      }
    }
  }
  std::ostringstream d;
  d << "cell functions " << cells - cell_fail << "/" << cells << ", md_online " << online - online_fail
    << "/" << online << ", md_baseline " << base - base_fail << "/" << base << " pass the oracle";
  return {cells > 0 && online > 0 && base > 0 && cell_fail + online_fail + base_fail == 0, d.str()};
}

Outcome approximation_bound() {
  const auto t0 = Clock::now();
  const auto data = ft::random_dataset(15, 3, 7);
  const auto oracle = FairnessOracle::from_config(ft::at_most(5, 2), data);
  BuildOptions bo;
  bo.cells = 10000;
  const CellIndex index = build_cell_index(*data, oracle, bo);
  const double bound = theorem7_bound(10000, 3);
  const auto grid = ft::dense_grid_3(*data, oracle, 700);
  if (grid.points.empty()) return {false, "dense grid found no satisfactory point"};
  std::mt19937_64 rng(9);
  int asked = 0, within = 0;
  double worst = -1.0;
  while (asked < 200) {
    const auto theta = ft::random_angles(rng, 2);
    const WeightVector w(ft::ray_of(theta));
    if (oracle.satisfied_by(*data, w.values())) continue;
    ++asked;
    const auto r = md_online(index, *data, oracle, w);
    const double gap = r.distance - ft::grid_optimum(grid, theta);
    worst = std::max(worst, gap);
    within += gap <= bound;
  }
  const double at40000 = theorem7_bound(40000, 3);
  const double secs = seconds_since(t0);
  const double rate = within / 200.0;
  std::ostringstream d;
  d << within << "/200 within " << fmt("%.4e", bound) << " (worst gap " << fmt("%.3e", worst)
    << "), theorem7_bound(40000,3) = " << fmt("%.5e", at40000) << ", " << fmt("%.1f", secs) << " s";
  return {rate >= pinned::kBoundRate &&
              std::abs(at40000 - pinned::kBoundAt40000) <= pinned::kBoundAt40000Tol &&
              secs < pinned::kBoundSeconds,
          d.str()};
}

Outcome coloring_optimality() {
  struct Case {
    std::size_t n, d, cells;
    std::uint64_t seed;
  };
  const std::vector<Case> cases{{15, 3, 100, 1}, {15, 3, 300, 2}, {20, 3, 500, 3}, {12, 4, 200, 4},
                                {12, 4, 500, 5}};
  std::size_t colored = 0, exact = 0, used = 0;
  for (const auto& c : cases) {
    const auto data = ft::random_dataset(c.n, c.d, c.seed);
    // Tight oracle so that plenty of cells need coloring.
    const auto oracle = FairnessOracle::from_config(ft::at_most(4, 1), data);
    BuildOptions bo;
    bo.cells = c.cells;
    const CellIndex index = build_cell_index(*data, oracle, bo);
    if (index.direct_count() < 2) continue;
    ++used;
    for (std::size_t cell = 0; cell < index.cells.size(); ++cell) {
      const auto& a = index.cells[cell];
      if (!a || a->source != CellSource::kColored) continue;
      ++colored;
      const auto center = index.partition.cell_center(cell);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& s : index.cells) {
        if (s && s->source == CellSource::kDirect) best = std::min(best, angle_distance(center, s->function));
      }
      exact += a->distance == best;
    }
  }
  std::ostringstream d;
  d << exact << "/" << colored << " colored cells match the exhaustive nearest seed exactly ("
    << used << " instances with >= 2 direct cells)";
  return {used > 0 && colored > 0 && exact == colored, d.str()};
}

Outcome partition_tiling() {
  std::size_t points = 0, single = 0;
  for (std::size_t d : {3u, 4u, 5u}) {
    const auto part = partition(500, d);
    std::vector<Box> boxes;
    for (std::size_t c = 0; c < part.cell_count(); ++c) boxes.push_back(part.cell_box(c));
    std::mt19937_64 rng(d * 31);
    for (int i = 0; i < 10000; ++i) {
      const auto t = ft::random_angles(rng, d - 1);
      std::size_t hits = 0, where = 0;
      for (std::size_t c = 0; c < boxes.size(); ++c) {
        if (boxes[c].contains(t)) {
          ++hits;
          where = c;
        }
      }
      ++points;
      single += hits == 1 && part.locate(t) == where;
    }
  }
  // Side of each d = 3 cell along a non-clamped axis.
  double worst = 0.0;
  std::size_t sides = 0;
  for (std::size_t n : {1000u, 40000u}) {
    const auto part = partition(n, 3);
    const double gamma = gamma_for(n, 3);
    for (std::size_t c = 0; c < part.cell_count(); ++c) {
      const Box b = part.cell_box(c);
      for (std::size_t axis = 0; axis < 2; ++axis) {
        if (b.hi[axis] == kHalfPi) continue;
        std::vector<double> lo(2, 0.0), hi(2, 0.0);
        for (std::size_t k = 0; k < axis; ++k) lo[k] = hi[k] = b.lo[k];
        lo[axis] = b.lo[axis];
        hi[axis] = b.hi[axis];
        worst = std::max(worst, std::abs(angle_distance(lo, hi) - gamma));
        ++sides;
      }
    }
  }
  std::ostringstream d;
  d << single << "/" << points << " points in exactly one leaf (d = 3, 4, 5); " << sides
    << " cell sides within " << fmt("%.1e", worst) << " of gamma";
  return {single == points && worst <= pinned::kGammaTol, d.str()};
}

Outcome online_latency() {
  const auto data = ft::random_dataset(30, 3, 12);
  const auto oracle = FairnessOracle::from_config(ft::at_most(6, 3), data);
  BuildOptions bo;
  bo.cells = 40000;
  const auto tb = Clock::now();
  const CellIndex index = build_cell_index(*data, oracle, bo);
  const double build_secs = seconds_since(tb);
  std::mt19937_64 rng(13);
  double total = 0.0, sort = 0.0, lookup = 0.0;
  for (int q = 0; q < 1000; ++q) {
    const auto theta = ft::random_angles(rng, 2);
    const WeightVector w(ft::ray_of(theta));
    auto t0 = Clock::now();
    const auto r = md_online(index, *data, oracle, w);
    total += seconds_since(t0);
    t0 = Clock::now();
    volatile bool ok = oracle.satisfied_by(*data, w.values());
    (void)ok;
    sort += seconds_since(t0);
    t0 = Clock::now();
    volatile double dist = md_lookup(index, theta).distance;
    (void)dist;
    lookup += seconds_since(t0);
  }
  const double mean = std::max(0.0, total - sort) / 1000.0;
  std::ostringstream d;
  d << index.partition.cell_count() << " cells, mean md_online " << fmt("%.2e", mean)
    << " s excluding the input sort (lookup alone " << fmt("%.2e", lookup / 1000.0) << " s; build "
    << fmt("%.1f", build_secs) << " s)";
  return {mean < pinned::kLookupMeanSeconds, d.str()};
}

// Group membership leans on the first attribute, so weights on it favour g0.
std::shared_ptr<const Dataset> skewed_dataset(std::size_t n, std::uint64_t seed, double lean) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v;
  TypeColumn col{"color", {}, {"g0", "g1"}};
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u(rng), b = u(rng), c = u(rng);
    v.insert(v.end(), {a, b, c});
    col.codes.push_back(u(rng) < 0.5 + lean * (a - 0.5) ? 0 : 1);
  }
  Dataset data(3, std::move(v));
  data.add_type(std::move(col));
  return std::make_shared<const Dataset>(std::move(data));
}

DatasetSpec abc_spec() {
  DatasetSpec s;
  s.scoring = {{"a", false}, {"b", false}, {"c", false}};
  s.types = {"color"};
  return s;
}

Outcome sampling_fidelity() {
  const auto data = skewed_dataset(100000, 31, 0.8);
  OracleConfig cfg;
  cfg.constraints.push_back({"color", "g0", Amount::share(0.1), std::nullopt, Amount::share(0.6)});
  PreprocessOptions opt;
  opt.cells = 400;
  opt.sample = 1000;
  opt.max_probes = kDefaultCellBudget;
  const auto t0 = Clock::now();
  const IndexFile index = preprocess(abc_spec(), data, cfg, opt);
  const double secs = seconds_since(t0);
  const auto& b = index.build;
  const double rate = b.value("verify_rate", 0.0);
  // Independent recheck of everything the index hands out.
  const auto oracle = FairnessOracle::from_config(cfg, data);
  std::size_t assigned = 0, ok = 0;
  for (const auto& a : index.cells.cells) {
    if (!a) continue;
    ++assigned;
    ok += ft::passes(*data, oracle, a->function);
  }
  std::ostringstream d;
  d << fmt("%.3f", rate) << " of sample-derived direct functions verify on 100k rows ("
    << b.value("direct", 0) << " direct kept, " << b.value("rejected", 0) << " rejected); "
    << ok << "/" << assigned << " handed-out functions pass; " << fmt("%.1f", secs) << " s";
  return {rate >= pinned::kSamplingRate && ok == assigned && assigned > 0 &&
              secs < pinned::kSamplingSeconds,
          d.str()};
}

Outcome compas_like() {
  const auto data = skewed_dataset(7000, 41, 0.6);
  OracleConfig cfg;
  cfg.constraints.push_back({"color", "g0", Amount::share(0.3), std::nullopt, Amount::share(0.6)});
  PreprocessOptions opt;
  opt.cells = 1000;
  opt.sample = 700;
  opt.max_probes = kDefaultCellBudget;
  const auto t0 = Clock::now();
  const Engine engine(preprocess(abc_spec(), data, cfg, opt), data);
  const double secs = seconds_since(t0);
  if (engine.unsatisfiable()) return {false, "index is unsatisfiable"};
  std::mt19937_64 rng(43);
  int asked = 0, close = 0;
  double worst = 0.0;
  while (asked < 200) {
    const WeightVector w(ft::ray_of(ft::random_angles(rng, 2)));
    const auto r = engine.query(w);
    if (r.satisfactory_as_is) continue;
    ++asked;
    worst = std::max(worst, r.distance);
    close += r.suggestion && r.distance < pinned::kCompasDistance;
  }
  std::ostringstream d;
  d << close << "/200 unsatisfactory queries get a suggestion within " << pinned::kCompasDistance
    << " rad (worst " << fmt("%.3f", worst) << "); build " << fmt("%.1f", secs) << " s";
  return {close >= pinned::kCompasRate * 200, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact-2d", exact_2d},
      {"online-2d", online_2d_scan},
      {"exchange-soundness", exchange_soundness},
      {"hyperpolar-residual", hyperpolar_residuals},
      {"arrangement-equivalence", arrangement_equivalence},
      {"index-soundness", index_soundness},
      {"approximation-bound", approximation_bound},
      {"coloring-optimality", coloring_optimality},
      {"partition-tiling", partition_tiling},
      {"md-online-latency", online_latency},
      {"sampling-fidelity", sampling_fidelity},
      {"compas-like", compas_like},
  };
  std::set<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    if (!only.empty() && !only.count(name)) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
