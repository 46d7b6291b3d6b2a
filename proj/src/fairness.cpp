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

#include "fairrank/fairness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

namespace fairrank {
namespace {

std::size_t resolve_k(const Amount& k, std::size_t n) {
  if (k.fraction) {
    if (!(k.value > 0.0 && k.value <= 1.0)) throw OracleError("k fraction outside (0, 1]");
    return static_cast<std::size_t>(std::floor(k.value * static_cast<double>(n)));
  }
  if (!(k.value >= 1.0) || k.value != std::floor(k.value)) {
    throw OracleError("k must be a positive integer count");
  }
  return static_cast<std::size_t>(k.value);
}

std::size_t resolve_bound(const Amount& a, std::size_t k, bool upper) {
  if (a.fraction) {
    if (!(a.value > 0.0 && a.value <= 1.0)) throw OracleError("bound fraction outside (0, 1]");
    const double v = a.value * static_cast<double>(k);
    return static_cast<std::size_t>(upper ? std::floor(v) : std::ceil(v));
  }
  if (!(a.value >= 0.0) || a.value != std::floor(a.value)) {
    throw OracleError("bound must be a non-negative integer count");
  }
  return static_cast<std::size_t>(a.value);
}

int resolve_group(const TypeColumn& col, const std::string& group) {
  if (auto code = col.code_of(group)) return *code;
  int code = -1;
  auto [end, ec] = std::from_chars(group.data(), group.data() + group.size(), code);
  const std::size_t groups = col.labels.empty()
                                 ? static_cast<std::size_t>(
                                       *std::max_element(col.codes.begin(), col.codes.end()) + 1)
                                 : col.labels.size();
  if (ec != std::errc() || end != group.data() + group.size() || code < 0 ||
      static_cast<std::size_t>(code) >= groups) {
    throw OracleError("unknown group '" + group + "' for attribute '" + col.name + "'");
  }
  return code;
}

}  // namespace

Ranking order_by(const Dataset& data, std::span<const double> w) {
  if (w.size() != data.dim()) throw std::invalid_argument("weight dimension mismatch");
  const std::size_t n = data.size();
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = score(data, i, w);
  Ranking order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return s[a] > s[b] || (s[a] == s[b] && a < b);
  });
  return order;
}

std::vector<CompiledConstraint> compile(const OracleConfig& config, const Dataset& data) {
  if (config.mode != "FM1" && config.mode != "FM2") {
    throw OracleError("unknown fairness mode '" + config.mode + "'");
  }
  std::set<std::string> attrs;
  std::vector<CompiledConstraint> out;
  for (const auto& spec : config.constraints) {
    CompiledConstraint c;
    try {
      c.type = data.type_index(spec.attr);
    } catch (const DatasetError& e) {
      throw OracleError(e.what());
    }
    attrs.insert(spec.attr);
    c.group = resolve_group(data.types()[c.type], spec.group);
    c.k = resolve_k(spec.k, data.size());
    if (c.k == 0 || c.k > data.size()) throw OracleError("k outside [1, n]");
    if (!spec.min && !spec.max) throw OracleError("constraint needs min or max");
    c.min = spec.min ? resolve_bound(*spec.min, c.k, false) : 0;
    c.max = spec.max ? resolve_bound(*spec.max, c.k, true) : c.k;
    out.push_back(c);
  }
  if (config.mode == "FM1" && attrs.size() > 1) {
    throw OracleError("FM1 constrains a single type attribute");
  }
  return out;
}

bool evaluate(std::span<const CompiledConstraint> constraints, const Dataset& data,
              std::span<const std::uint32_t> order) {
  for (const auto& c : constraints) {
    const auto& codes = data.types()[c.type].codes;
    std::size_t count = 0;
    for (std::size_t p = 0; p < c.k; ++p) count += codes[order[p]] == c.group;
    if (count < c.min || count > c.max) return false;
  }
  return true;
}

FairnessOracle FairnessOracle::from_config(const OracleConfig& config,
                                           std::shared_ptr<const Dataset> data) {
  FairnessOracle o;
  o.compiled_ = compile(config, *data);
  o.config_ = config;
  o.data_ = std::move(data);
  o.fn_ = [compiled = o.compiled_, d = o.data_](std::span<const std::uint32_t> order) {
    return evaluate(compiled, *d, order);
  };
  return o;
}

FairnessOracle FairnessOracle::from_predicate(Predicate fn) {
  FairnessOracle o;
  o.fn_ = std::move(fn);
  return o;
}

FairnessOracle FairnessOracle::rebind(std::shared_ptr<const Dataset> data) const {
  if (!config_) throw OracleError("only declarative oracles can be rebound");
  return from_config(*config_, std::move(data));
}

bool FairnessOracle::satisfied_by(const Dataset& data, std::span<const double> w) const {
  const Ranking order = order_by(data, w);
  return (*this)(order);
}

bool oracle_eval(const OracleConfig& config, std::span<const std::uint32_t> order,
                 const Dataset& data) {
  return evaluate(compile(config, data), data, order);
}

PrefixTracker::PrefixTracker(std::span<const CompiledConstraint> constraints,
                             const Dataset& data, std::span<const std::uint32_t> order)
    : constraints_(constraints.begin(), constraints.end()), data_(&data) {
  counts_.assign(constraints_.size(), 0);
  for (std::size_t c = 0; c < constraints_.size(); ++c) {
    for (std::size_t p = 0; p < constraints_[c].k; ++p) counts_[c] += code(c, order[p]) == constraints_[c].group;
    violated_ += !ok(c);
  }
}

bool PrefixTracker::ok(std::size_t c) const {
  return counts_[c] >= constraints_[c].min && counts_[c] <= constraints_[c].max;
}

int PrefixTracker::code(std::size_t c, std::uint32_t row) const {
  return data_->types()[constraints_[c].type].codes[row];
}

void PrefixTracker::swapped(std::size_t pos, std::span<const std::uint32_t> order) {
  for (std::size_t c = 0; c < constraints_.size(); ++c) {
    // Only a prefix whose last slot is `pos` sees an item enter and leave.
    if (constraints_[c].k != pos + 1) continue;
    const bool was_ok = ok(c);
    counts_[c] -= code(c, order[pos + 1]) == constraints_[c].group;
    counts_[c] += code(c, order[pos]) == constraints_[c].group;
    const bool now_ok = ok(c);
    if (was_ok && !now_ok) ++violated_;
    if (!was_ok && now_ok) --violated_;
  }
}

}  // namespace fairrank
