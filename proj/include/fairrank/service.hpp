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

#ifndef FAIRRANK_SERVICE_HPP_
#define FAIRRANK_SERVICE_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"

#include "fairrank/dataio.hpp"
#include "fairrank/dataset.hpp"
#include "fairrank/fairness.hpp"
#include "fairrank/query.hpp"

namespace httplib {
class Server;
}

namespace fairrank {

/// Oracle probes per cell used by the CLI and /build unless overridden.
inline constexpr std::size_t kDefaultCellBudget = 1000;

struct PreprocessOptions {
  std::size_t cells = 400;
  std::optional<std::size_t> sample;
  std::uint64_t seed = 1;
  std::string mode = "auto";  // auto | 2d | md
  std::size_t max_probes = 0;
  std::size_t threads = 0;
  std::function<void(const std::string& phase, std::size_t done, std::size_t total)> progress;
};

/// Builds the index for `data` (2D ranges or MD cell index). With a sample,
/// the structures are built on the sample and every direct cell function is
/// re-checked on the full data; the build metadata records the pass rate.
IndexFile preprocess(const DatasetSpec& spec, std::shared_ptr<const Dataset> data,
                     const OracleConfig& config, const PreprocessOptions& options);

/// Loaded index bound to its dataset and oracle; immutable, shareable.
class Engine {
 public:
  Engine(IndexFile index, std::shared_ptr<const Dataset> data);

  QueryResult query(const WeightVector& w) const;
  const IndexFile& index() const { return index_; }
  const Dataset& data() const { return *data_; }
  const FairnessOracle& oracle() const { return oracle_; }
  bool unsatisfiable() const { return index_.status == "unsatisfiable"; }
  const std::optional<std::string>& warning() const { return warning_; }

 private:
  IndexFile index_;
  std::shared_ptr<const Dataset> data_;
  FairnessOracle oracle_;
  std::optional<std::string> warning_;
};

nlohmann::json to_json(const QueryResult& result);

/// Weights from a JSON array; throws std::invalid_argument when malformed.
WeightVector weights_from_json(const nlohmann::json& j, std::size_t d);

/// HTTP front end. Holds one engine at a time; /build swaps in a new one
/// from a background thread.
class Service {
 public:
  Service();
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void install(std::shared_ptr<const Engine> engine);
  std::shared_ptr<const Engine> engine() const;

  /// Binds to host:port (port 0 picks a free one) and returns the port.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void listen();
  void stop();

  std::string status() const;

 private:
  void routes();
  void start_build(nlohmann::json request);

  std::unique_ptr<httplib::Server> server_;
  mutable std::mutex mutex_;
  std::shared_ptr<const Engine> engine_;
  std::string status_ = "idle";  // idle | building | ready | unsatisfiable | failed
  std::string phase_;
  double progress_ = 0.0;
  std::string error_;
  std::thread builder_;
};

}  // namespace fairrank

#endif  // FAIRRANK_SERVICE_HPP_
