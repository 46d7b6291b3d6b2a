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

#ifndef FAIRRANK_DATASET_HPP_
#define FAIRRANK_DATASET_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairrank {

using ItemId = std::uint32_t;

class DatasetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A categorical type attribute: one small-integer group code per row, plus
/// the code book mapping codes back to labels.
struct TypeColumn {
  std::string name;
  std::vector<int> codes;
  std::vector<std::string> labels;

  std::optional<int> code_of(const std::string& label) const;
};

/// Inverse of the min-max normalization applied at ingest.
struct ColumnScale {
  double min = 0.0;
  double max = 1.0;
  bool lower_better = false;

  double denormalize(double normalized) const;
};

/// Immutable table of n items with d scoring attributes (row-major) and any
/// number of type attributes. Rows are addressed by position; each row also
/// carries a stable item id (its row number in the source file), and ids are
/// strictly increasing with position.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t dim, std::vector<double> values);
  Dataset(std::size_t dim, std::vector<double> values, std::vector<ItemId> ids);

  static Dataset from_rows(const std::vector<std::vector<double>>& rows);

  void add_type(TypeColumn column);
  void set_scoring_names(std::vector<std::string> names);
  void set_scales(std::vector<ColumnScale> scales);

  std::size_t size() const { return ids_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return ids_.empty(); }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  ItemId id(std::size_t i) const { return ids_[i]; }
  std::span<const ItemId> ids() const { return ids_; }
  std::span<const double> values() const { return values_; }

  const std::vector<TypeColumn>& types() const { return types_; }
  const std::vector<std::string>& scoring_names() const { return scoring_names_; }
  const std::vector<ColumnScale>& scales() const { return scales_; }

  /// Index into types(); throws DatasetError for an unknown name.
  std::size_t type_index(const std::string& name) const;

  /// Rows at the given positions (ascending), keeping their ids and types.
  Dataset subset(std::span<const std::size_t> positions) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
  std::vector<ItemId> ids_;
  std::vector<TypeColumn> types_;
  std::vector<std::string> scoring_names_;
  std::vector<ColumnScale> scales_;
};

/// Score of row i under weights w.
double score(const Dataset& data, std::size_t i, std::span<const double> w);

}  // namespace fairrank

#endif  // FAIRRANK_DATASET_HPP_
