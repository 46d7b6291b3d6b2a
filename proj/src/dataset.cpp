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

#include "fairrank/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fairrank {

std::optional<int> TypeColumn::code_of(const std::string& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) return std::nullopt;
  return static_cast<int>(it - labels.begin());
}

double ColumnScale::denormalize(double normalized) const {
  const double v = lower_better ? 1.0 - normalized : normalized;
  return min + v * (max - min);
}

Dataset::Dataset(std::size_t dim, std::vector<double> values)
    : Dataset(dim, std::move(values), {}) {}

Dataset::Dataset(std::size_t dim, std::vector<double> values, std::vector<ItemId> ids)
    : dim_(dim), values_(std::move(values)), ids_(std::move(ids)) {
  if (dim_ == 0) throw DatasetError("dataset needs at least one scoring attribute");
  if (values_.size() % dim_ != 0) throw DatasetError("value count is not a multiple of dim");
  const std::size_t n = values_.size() / dim_;
  if (ids_.empty()) {
    ids_.resize(n);
    std::iota(ids_.begin(), ids_.end(), ItemId{0});
  }
  if (ids_.size() != n) throw DatasetError("id count does not match row count");
  for (std::size_t i = 1; i < n; ++i) {
    if (ids_[i] <= ids_[i - 1]) throw DatasetError("item ids must be strictly increasing");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      throw DatasetError("scoring values must be finite and non-negative");
    }
  }
}

Dataset Dataset::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DatasetError("no rows");
  const std::size_t dim = rows.front().size();
  std::vector<double> values;
  values.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw DatasetError("ragged rows");
    values.insert(values.end(), r.begin(), r.end());
  }
  return Dataset(dim, std::move(values));
}

void Dataset::add_type(TypeColumn column) {
  if (column.codes.size() != size()) {
    throw DatasetError("type column '" + column.name + "' has wrong length");
  }
  for (int c : column.codes) {
    if (c < 0) throw DatasetError("negative group code in '" + column.name + "'");
    if (!column.labels.empty() && static_cast<std::size_t>(c) >= column.labels.size()) {
      throw DatasetError("group code outside code book in '" + column.name + "'");
    }
  }
  types_.push_back(std::move(column));
}

void Dataset::set_scoring_names(std::vector<std::string> names) {
  if (names.size() != dim_) throw DatasetError("scoring name count does not match dim");
  scoring_names_ = std::move(names);
}

void Dataset::set_scales(std::vector<ColumnScale> scales) {
  if (scales.size() != dim_) throw DatasetError("scale count does not match dim");
  scales_ = std::move(scales);
}

std::size_t Dataset::type_index(const std::string& name) const {
  for (std::size_t t = 0; t < types_.size(); ++t) {
    if (types_[t].name == name) return t;
  }
  throw DatasetError("unknown type attribute '" + name + "'");
}

Dataset Dataset::subset(std::span<const std::size_t> positions) const {
  std::vector<double> values;
  std::vector<ItemId> ids;
  values.reserve(positions.size() * dim_);
  ids.reserve(positions.size());
  for (std::size_t p : positions) {
    auto r = row(p);
    values.insert(values.end(), r.begin(), r.end());
    ids.push_back(ids_[p]);
  }
  Dataset out(dim_, std::move(values), std::move(ids));
  for (const auto& col : types_) {
    TypeColumn c{col.name, {}, col.labels};
    c.codes.reserve(positions.size());
    for (std::size_t p : positions) c.codes.push_back(col.codes[p]);
    out.types_.push_back(std::move(c));
  }
  out.scoring_names_ = scoring_names_;
  out.scales_ = scales_;
  return out;
}

double score(const Dataset& data, std::size_t i, std::span<const double> w) {
  auto r = data.row(i);
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += w[k] * r[k];
  return s;
}

}  // namespace fairrank
