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

#ifndef FAIRRANK_DATAIO_HPP_
#define FAIRRANK_DATAIO_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "fairrank/dataset.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/grid_index.hpp"
#include "fairrank/planner2d.hpp"

namespace fairrank {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScoringColumn {
  std::string name;
  bool lower_better = false;
};

struct DatasetSpec {
  std::string path;
  std::vector<ScoringColumn> scoring;
  std::vector<std::string> types;
  char delimiter = ',';
};

/// "name" or "name:lower" / "name:higher".
ScoringColumn parse_scoring_column(const std::string& text);

/// Reads a delimited file with a header row. Scoring columns are min-max
/// normalized (lower-better ones flipped); type columns get code books in
/// order of first appearance; ids are 0-based row numbers.
Dataset ingest(const DatasetSpec& spec);
Dataset ingest_text(const std::string& text, const DatasetSpec& spec);

/// m distinct rows, uniformly at random, returned in ascending id order.
Dataset sample_uniform(const Dataset& data, std::size_t m, std::uint64_t seed);

/// SHA-256 over the normalized scoring matrix, ids and type columns.
std::string fingerprint(const Dataset& data);

nlohmann::json to_json(const OracleConfig& config);
OracleConfig oracle_config_from_json(const nlohmann::json& doc);
OracleConfig load_oracle_config(const std::string& path);

nlohmann::json to_json(const DatasetSpec& spec);
DatasetSpec dataset_spec_from_json(const nlohmann::json& doc);

inline constexpr int kIndexFormatVersion = 1;

struct IndexFile {
  int format_version = kIndexFormatVersion;
  std::size_t d = 0;
  std::string fingerprint;
  std::string mode;    // "2d" or "md"
  std::string status;  // "ready" or "unsatisfiable"
  nlohmann::json dataset = nlohmann::json::object();
  nlohmann::json oracle = nlohmann::json::object();
  nlohmann::json build = nlohmann::json::object();
  SatisfactoryRanges2D ranges;  // mode 2d
  CellIndex cells;              // mode md
};

/// Canonical text: sorted keys, shortest round-trip doubles.
std::string serialize_index(const IndexFile& index);
IndexFile parse_index(const std::string& text);
void save_index(const IndexFile& index, const std::string& path);
IndexFile load_index(const std::string& path);

/// A warning message when the index was built for other data.
std::optional<std::string> fingerprint_warning(const IndexFile& index, const Dataset& data);

}  // namespace fairrank

#endif  // FAIRRANK_DATAIO_HPP_
