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

#ifndef FAIRRANK_FAIRNESS_HPP_
#define FAIRRANK_FAIRNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fairrank/dataset.hpp"

namespace fairrank {

/// Row positions, best first. Ties in score are broken by ascending position,
/// which is ascending item id since ids increase with position.
using Ranking = std::vector<std::uint32_t>;

class OracleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// No satisfactory function exists (or none was found) for a dataset/oracle.
class Unsatisfiable : public std::runtime_error {
 public:
  Unsatisfiable() : std::runtime_error("unsatisfiable: no satisfactory function exists") {}
};

Ranking order_by(const Dataset& data, std::span<const double> w);

/// An absolute count, or a fraction in (0, 1].
struct Amount {
  double value = 0.0;
  bool fraction = false;

  static Amount count(double v) { return {v, false}; }
  static Amount share(double v) { return {v, true}; }
};

struct ConstraintSpec {
  std::string attr;
  std::string group;  // label from the code book, or a numeric code
  Amount k;
  std::optional<Amount> min;
  std::optional<Amount> max;
};

struct OracleConfig {
  std::string mode = "FM1";  // FM1: one type attribute, FM2: several
  std::vector<ConstraintSpec> constraints;
};

/// Counts resolved against a dataset: the top-k prefix must hold between
/// min and max rows of `group` in type column `type`.
struct CompiledConstraint {
  std::size_t type = 0;
  int group = 0;
  std::size_t k = 0;
  std::size_t min = 0;
  std::size_t max = 0;
};

std::vector<CompiledConstraint> compile(const OracleConfig& config, const Dataset& data);

bool evaluate(std::span<const CompiledConstraint> constraints, const Dataset& data,
              std::span<const std::uint32_t> order);

/// Binary predicate over orderings. Copies share the underlying predicate.
class FairnessOracle {
 public:
  using Predicate = std::function<bool(std::span<const std::uint32_t>)>;

  static FairnessOracle from_config(const OracleConfig& config,
                                    std::shared_ptr<const Dataset> data);
  static FairnessOracle from_predicate(Predicate fn);

  bool operator()(std::span<const std::uint32_t> order) const { return fn_(order); }
  bool satisfied_by(const Dataset& data, std::span<const double> w) const;

  /// Present for declarative oracles only.
  const std::optional<OracleConfig>& config() const { return config_; }
  std::span<const CompiledConstraint> compiled() const { return compiled_; }
  const Dataset* dataset() const { return data_.get(); }

  /// Same declarative config compiled against another dataset.
  FairnessOracle rebind(std::shared_ptr<const Dataset> data) const;

 private:
  Predicate fn_;
  std::optional<OracleConfig> config_;
  std::vector<CompiledConstraint> compiled_;
  std::shared_ptr<const Dataset> data_;
};

bool oracle_eval(const OracleConfig& config, std::span<const std::uint32_t> order,
                 const Dataset& data);

/// Constraint counts maintained under adjacent swaps, for sweeps that change
/// the order one transposition at a time.
class PrefixTracker {
 public:
  PrefixTracker(std::span<const CompiledConstraint> constraints, const Dataset& data,
                std::span<const std::uint32_t> order);

  /// The items at positions pos and pos+1 have just been exchanged in `order`.
  void swapped(std::size_t pos, std::span<const std::uint32_t> order);
  bool satisfied() const { return violated_ == 0; }

 private:
  bool ok(std::size_t c) const;
  int code(std::size_t c, std::uint32_t row) const;

  std::vector<CompiledConstraint> constraints_;
  const Dataset* data_;
  std::vector<std::size_t> counts_;
  std::size_t violated_ = 0;
};

}  // namespace fairrank

#endif  // FAIRRANK_FAIRNESS_HPP_
