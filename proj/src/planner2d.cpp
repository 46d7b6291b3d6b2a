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

#include "fairrank/planner2d.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "fairrank/exchange.hpp"

namespace fairrank {
namespace {

constexpr double kBatchTolerance = 1e-12;
constexpr double kNudge = 1e-9;

struct Event {
  double theta;
  std::uint32_t i;
  std::uint32_t j;
};

// Order holding just after angle t: by score at t, then by its derivative,
// then by position.
void resort(const Dataset& data, double t, std::span<std::uint32_t> span) {
  const double c = std::cos(t), s = std::sin(t);
  std::sort(span.begin(), span.end(), [&](std::uint32_t a, std::uint32_t b) {
    auto ra = data.row(a), rb = data.row(b);
    const double fa = c * ra[0] + s * ra[1], fb = c * rb[0] + s * rb[1];
    if (fa != fb) return fa > fb;
    const double ga = -s * ra[0] + c * ra[1], gb = -s * rb[0] + c * rb[1];
    if (ga != gb) return ga > gb;
    return a < b;
  });
}

bool check_angle(const Dataset& data, const FairnessOracle& oracle, double t) {
  const double w[2] = {std::cos(t), std::sin(t)};
  return oracle.satisfied_by(data, w);
}

// Walk inward from `edge` toward `toward` until the oracle agrees.
std::optional<double> verified_inside(const Dataset& data, const FairnessOracle& oracle,
                                      double edge, double toward) {
  const double width = std::abs(toward - edge);
  const double dir = toward > edge ? 1.0 : -1.0;
  for (double step = kNudge; step < 0.5 * width; step *= 10.0) {
    const double t = edge + dir * step;
    if (check_angle(data, oracle, t)) return t;
  }
  const double mid = 0.5 * (edge + toward);
  if (check_angle(data, oracle, mid)) return mid;
  return std::nullopt;
}

}  // namespace

std::vector<Boundary2D> SatisfactoryRanges2D::boundaries() const {
  std::vector<Boundary2D> out;
  for (const auto& r : ranges) {
    out.push_back({r.lo, true});
    out.push_back({r.hi, false});
  }
  return out;
}

long SatisfactoryRanges2D::find(double theta) const {
  auto it = std::lower_bound(ranges.begin(), ranges.end(), theta,
                             [](const Range2D& r, double t) { return r.hi < t; });
  if (it != ranges.end() && it->lo <= theta) return it - ranges.begin();
  return -1;
}

SatisfactoryRanges2D raysweep_2d(const Dataset& data, const FairnessOracle& oracle,
                                 SweepStats* stats) {
  if (data.dim() != 2) throw std::invalid_argument("raysweep_2d needs d = 2");
  if (data.empty()) throw std::invalid_argument("raysweep_2d needs at least one item");
  const std::size_t n = data.size();
  SweepStats local;

  std::vector<Event> events;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      const Exchange2D ex = exchange_angle_2d(data.row(i), data.row(j));
      if (ex.ok()) events.push_back({ex.theta, i, j});
    }
  }
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.theta != b.theta) return a.theta < b.theta;
    return a.i != b.i ? a.i < b.i : a.j < b.j;
  });
  local.events = events.size();

  // Orders are evaluated mid-sector, away from the float noise at the events.
  auto sector_mid = [&](std::size_t next) {
    const double lo = next == 0 ? 0.0 : events[next - 1].theta;
    const double hi = next < events.size() ? events[next].theta : kHalfPi;
    return 0.5 * (lo + hi);
  };

  // Sweep origin: the order just after angle 0.
  Ranking order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  resort(data, sector_mid(0), order);
  std::vector<std::uint32_t> pos(n);
  for (std::size_t p = 0; p < n; ++p) pos[order[p]] = static_cast<std::uint32_t>(p);

  const bool tracked = oracle.config() && oracle.dataset() == &data;
  std::optional<PrefixTracker> tracker;
  if (tracked) tracker.emplace(oracle.compiled(), data, order);
  auto satisfied = [&] { return tracked ? tracker->satisfied() : oracle(order); };

  // Sectors: [0, e_1], [e_1, e_2], ..., [e_last, pi/2].
  std::vector<double> sector_lo{0.0};
  std::vector<char> sector_ok{static_cast<char>(satisfied())};
  std::size_t e = 0;
  while (e < events.size()) {
    std::size_t end = e + 1;
    while (end < events.size() && events[end].theta - events[end - 1].theta <= kBatchTolerance) ++end;
    const double t = events[e].theta;
    const Event& first = events[e];
    const std::uint32_t pi = pos[first.i], pj = pos[first.j];
    if (end == e + 1 && (pi + 1 == pj || pj + 1 == pi)) {
      const std::uint32_t p = std::min(pi, pj);
      std::swap(order[p], order[p + 1]);
      pos[order[p]] = p;
      pos[order[p + 1]] = p + 1;
      if (tracked) tracker->swapped(p, order);
    } else {
      std::uint32_t lo = static_cast<std::uint32_t>(n), hi = 0;
      for (std::size_t k = e; k < end; ++k) {
        for (std::uint32_t item : {events[k].i, events[k].j}) {
          lo = std::min(lo, pos[item]);
          hi = std::max(hi, pos[item]);
        }
      }
      std::span<std::uint32_t> span(order.data() + lo, hi - lo + 1);
      resort(data, sector_mid(end), span);
      for (std::uint32_t p = lo; p <= hi; ++p) pos[order[p]] = p;
      if (tracked) tracker.emplace(oracle.compiled(), data, order);
      local.batched_events += end - e;
    }
    sector_lo.push_back(t);
    sector_ok.push_back(static_cast<char>(satisfied()));
    e = end;
  }
  local.sectors = sector_lo.size();

  SatisfactoryRanges2D out;
  for (std::size_t s = 0; s < sector_lo.size(); ++s) {
    if (!sector_ok[s]) continue;
    ++local.satisfactory_sectors;
    const double lo = sector_lo[s];
    const double hi = s + 1 < sector_lo.size() ? sector_lo[s + 1] : kHalfPi;
    if (!out.ranges.empty() && out.ranges.back().hi == lo) {
      out.ranges.back().hi = hi;  // neighbouring satisfactory sectors merge
    } else {
      out.ranges.push_back({lo, hi, lo, hi});
    }
  }

  SatisfactoryRanges2D verified;
  for (Range2D r : out.ranges) {
    auto a = verified_inside(data, oracle, r.lo, r.hi);
    auto b = verified_inside(data, oracle, r.hi, r.lo);
    if (!a || !b) {
      ++local.dropped_ranges;
      continue;
    }
    r.suggest_lo = *a;
    r.suggest_hi = *b;
    verified.ranges.push_back(r);
  }
  if (stats) *stats = local;
  return verified;
}

Answer2D online_2d(const SatisfactoryRanges2D& ranges, const WeightVector& w) {
  if (w.dim() != 2) throw std::invalid_argument("online_2d needs d = 2");
  if (ranges.empty()) throw Unsatisfiable();
  const double theta = std::atan2(w[1], w[0]);
  const double r = w.norm();
  const auto& rs = ranges.ranges;
  auto it = std::lower_bound(rs.begin(), rs.end(), theta,
                             [](const Range2D& x, double t) { return x.hi < t; });
  if (it != rs.end() && it->lo <= theta) return {w, theta, 0.0, true};

  // Between it-1 (ends below theta) and it (starts above theta).
  double best = 0.0;
  double best_gap = 0.0;
  bool have = false;
  if (it != rs.begin()) {
    best = std::prev(it)->suggest_hi;
    best_gap = theta - std::prev(it)->hi;
    have = true;
  }
  if (it != rs.end() && (!have || it->lo - theta < best_gap)) {
    best = it->suggest_lo;
  }
  WeightVector out({r * std::cos(best), r * std::sin(best)});
  return {out, best, std::abs(best - theta), false};
}

}  // namespace fairrank
