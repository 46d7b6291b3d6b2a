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

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairrank/dataio.hpp"
#include "fairrank/geometry.hpp"
#include "fairrank/service.hpp"

namespace {

using nlohmann::json;
using namespace fairrank;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnsatisfiable = 2;

std::vector<double> parse_weights(const std::string& text) {
  std::vector<double> w;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    w.push_back(std::stod(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("malformed weight '" + tok + "'");
  }
  return w;
}

std::shared_ptr<const Dataset> load_data(const IndexFile& index, const std::string& override_path) {
  DatasetSpec spec = dataset_spec_from_json(index.dataset);
  if (!override_path.empty()) spec.path = override_path;
  return std::make_shared<const Dataset>(ingest(spec));
}

void print_report(const IndexFile& index) {
  const json& b = index.build;
  std::cout << "mode: " << index.mode << "\nstatus: " << index.status << "\nd: " << index.d
            << "\nfingerprint: " << index.fingerprint << "\nn: " << b.value("n", 0)
            << "  sample: " << b.value("sample", 0) << "\n";
  if (index.mode == "md") {
    std::cout << "cells: " << b.value("cells", 0) << " (target " << b.value("cells_target", 0)
              << ")\nplanes: " << b.value("planes", 0) << "\ndirect: " << b.value("direct", 0)
              << "  colored: " << b.value("colored", 0) << "  rejected: " << b.value("rejected", 0)
              << "\nverify rate: " << b.value("verify_rate", 1.0)
              << "\nbudget hits: " << b.value("budget_hits", 0) << "\n";
  } else {
    std::cout << "ranges: " << index.ranges.ranges.size() << "\n";
    for (const auto& r : index.ranges.ranges) std::cout << "  [" << r.lo << ", " << r.hi << "]\n";
  }
  std::cout << "timings (s):";
  const json timings = b.value("timings", json::object());
  for (const auto& [k, v] : timings.items()) std::cout << " " << k << "=" << v;
  std::cout << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairrank: nearest satisfactory ranking functions"};
  app.require_subcommand(1);

  auto* pre = app.add_subcommand("preprocess", "build an index file");
  DatasetSpec spec;
  std::vector<std::string> scores;
  std::string delimiter = ",", oracle_path, out_path, mode = "auto", format = "text";
  PreprocessOptions opt;
  std::size_t sample = 0;
  opt.max_probes = kDefaultCellBudget;
  pre->add_option("--data", spec.path, "delimited dataset with a header row")->required();
  pre->add_option("--score", scores, "scoring column, name or name:lower")->required();
  pre->add_option("--type", spec.types, "type (group) column");
  pre->add_option("--delimiter", delimiter, "field delimiter");
  pre->add_option("--oracle", oracle_path, "fairness oracle config (JSON)")->required();
  pre->add_option("--cells", opt.cells, "target cell count N (md)");
  pre->add_option("--sample", sample, "build on a uniform sample of this many rows");
  pre->add_option("--seed", opt.seed, "sampling seed");
  pre->add_option("--mode", mode, "auto, 2d or md")->check(CLI::IsMember({"auto", "2d", "md"}));
  pre->add_option("--cell-budget", opt.max_probes, "oracle probes per cell, 0 for no limit");
  pre->add_option("--threads", opt.threads, "cell search workers, 0 for all cores");
  pre->add_option("--out", out_path, "index file to write")->required();
  pre->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* qry = app.add_subcommand("query", "answer one weight vector");
  std::string index_path, weights_text, data_override;
  qry->add_option("--index", index_path, "index file")->required();
  qry->add_option("--weights", weights_text, "comma-separated weights")->required();
  qry->add_option("--data", data_override, "dataset path (defaults to the one recorded in the index)");
  qry->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* ins = app.add_subcommand("inspect", "print index metadata");
  ins->add_option("--index", index_path, "index file")->required();
  ins->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* srv = app.add_subcommand("serve", "HTTP service (port from FAIRRANK_PORT, default 8080)");
  std::string host = "127.0.0.1";
  int port = -1;
  srv->add_option("--index", index_path, "index file to load at start");
  srv->add_option("--data", data_override, "dataset path override");
  srv->add_option("--host", host, "bind address");
  srv->add_option("--port", port, "overrides FAIRRANK_PORT");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (pre->parsed()) {
      if (delimiter.size() != 1) throw std::invalid_argument("delimiter must be one character");
      spec.delimiter = delimiter[0];
      for (const auto& s : scores) spec.scoring.push_back(parse_scoring_column(s));
      const OracleConfig cfg = load_oracle_config(oracle_path);
      auto data = std::make_shared<const Dataset>(ingest(spec));
      if (sample > 0) opt.sample = sample;
      opt.mode = mode;
      if (format == "text") {
        opt.progress = [](const std::string& phase, std::size_t done, std::size_t total) {
          std::cerr << "\r" << phase << " " << done << "/" << total << std::flush;
          if (done == total) std::cerr << "\n";
        };
      }
      const IndexFile index = preprocess(spec, data, cfg, opt);
      save_index(index, out_path);
      if (format == "json") {
        std::cout << json{{"status", index.status}, {"mode", index.mode}, {"build", index.build}}.dump(2) << "\n";
      } else {
        print_report(index);
      }
      return index.status == "unsatisfiable" ? kExitUnsatisfiable : kExitOk;
    }

    if (qry->parsed()) {
      IndexFile index = load_index(index_path);
      auto data = load_data(index, data_override);
      Engine engine(std::move(index), data);
      if (engine.warning()) std::cerr << "warning: " << *engine.warning() << "\n";
      const WeightVector w(parse_weights(weights_text));
      try {
        const QueryResult r = engine.query(w);
        if (format == "json") {
          std::cout << to_json(r).dump() << "\n";
        } else {
          std::cout << std::setprecision(10) << "satisfactory_as_is: " << std::boolalpha
                    << r.satisfactory_as_is << "\nsuggestion:";
          for (double v : r.suggestion->values()) std::cout << " " << v;
          std::cout << "\ndistance: " << r.distance << "\nverified: " << r.verified << "\n";
        }
        return kExitOk;
      } catch (const Unsatisfiable& e) {
        if (format == "json") {
          std::cout << json{{"unsatisfiable", true}}.dump() << "\n";
        } else {
          std::cout << e.what() << "\n";
        }
        return kExitUnsatisfiable;
      }
    }

    if (ins->parsed()) {
      const IndexFile index = load_index(index_path);
      if (format == "json") {
        json out{{"format_version", index.format_version}, {"d", index.d},
                 {"fingerprint", index.fingerprint}, {"mode", index.mode},
                 {"status", index.status}, {"dataset", index.dataset},
                 {"oracle", index.oracle}, {"build", index.build}};
        std::cout << out.dump(2) << "\n";
      } else {
        print_report(index);
      }
      return index.status == "unsatisfiable" ? kExitUnsatisfiable : kExitOk;
    }

    if (srv->parsed()) {
      if (port < 0) {
        const char* env = std::getenv("FAIRRANK_PORT");
        port = env ? std::stoi(env) : 8080;
      }
      Service service;
      if (!index_path.empty()) {
        IndexFile index = load_index(index_path);
        auto data = load_data(index, data_override);
        service.install(std::make_shared<const Engine>(std::move(index), data));
      }
      const int bound = service.bind(host, port);
      std::cerr << "listening on " << host << ":" << bound << "\n";
      service.listen();
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}
