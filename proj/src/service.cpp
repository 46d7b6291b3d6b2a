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

#include "fairrank/service.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "httplib.h"

#include "fairrank/arrangement.hpp"
#include "fairrank/grid_index.hpp"
#include "fairrank/planner2d.hpp"

namespace fairrank {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

json weights_json(const WeightVector& w) {
  return json(std::vector<double>(w.values().begin(), w.values().end()));
}

void reply(httplib::Response& res, int code, json body, const std::string& fp) {
  body["fingerprint"] = fp;
  res.status = code;
  res.set_header("X-Dataset-Fingerprint", fp);
  res.set_content(body.dump(), "application/json");
}

json ranges_json(const SatisfactoryRanges2D& ranges) {
  json rs = json::array(), bs = json::array();
  for (const auto& r : ranges.ranges) rs.push_back({r.lo, r.hi});
  for (const auto& b : ranges.boundaries()) {
    bs.push_back({{"theta", b.theta}, {"kind", b.start ? "start" : "end"}});
  }
  return json{{"ranges", rs}, {"boundaries", bs}};
}

}  // namespace

IndexFile preprocess(const DatasetSpec& spec, std::shared_ptr<const Dataset> data,
                     const OracleConfig& config, const PreprocessOptions& options) {
  const auto start = Clock::now();
  const std::size_t d = data->dim();
  std::string mode = options.mode;
  if (mode == "auto") mode = d == 2 ? "2d" : "md";
  if (mode == "2d" && d != 2) throw std::invalid_argument("2d mode needs exactly two scoring attributes");
  if (mode == "md" && d < 3) throw std::invalid_argument("md mode needs at least three scoring attributes");
  if (mode != "2d" && mode != "md") throw std::invalid_argument("unknown mode '" + mode + "'");

  std::shared_ptr<const Dataset> work = data;
  const bool sampled = options.sample && *options.sample < data->size();
  if (sampled) {
    work = std::make_shared<const Dataset>(sample_uniform(*data, *options.sample, options.seed));
  }
  const FairnessOracle full_oracle = FairnessOracle::from_config(config, data);
  const FairnessOracle work_oracle = sampled ? full_oracle.rebind(work) : full_oracle;

  IndexFile index;
  index.d = d;
  index.fingerprint = fingerprint(*data);
  index.mode = mode;
  index.dataset = to_json(spec);
  index.oracle = to_json(config);
  json build{{"n", data->size()}, {"sample", sampled ? work->size() : data->size()},
             {"seed", options.seed}};

  if (mode == "2d") {
    SweepStats stats;
    auto t0 = Clock::now();
    index.ranges = raysweep_2d(*work, work_oracle, &stats);
    std::size_t checked = 0, kept = 0;
    if (sampled) {
      SatisfactoryRanges2D verified;
      for (const auto& r : index.ranges.ranges) {
        ++checked;
        const double a[2] = {std::cos(r.suggest_lo), std::sin(r.suggest_lo)};
        const double b[2] = {std::cos(r.suggest_hi), std::sin(r.suggest_hi)};
        if (full_oracle.satisfied_by(*data, a) && full_oracle.satisfied_by(*data, b)) {
          verified.ranges.push_back(r);
          ++kept;
        }
      }
      index.ranges = std::move(verified);
    }
    build["events"] = stats.events;
    build["sectors"] = stats.sectors;
    build["ranges"] = index.ranges.ranges.size();
    build["verify_rate"] = checked ? static_cast<double>(kept) / checked : 1.0;
    build["timings"] = {{"sweep", std::chrono::duration<double>(Clock::now() - t0).count()}};
    index.status = index.ranges.empty() ? "unsatisfiable" : "ready";
  } else {
    BuildOptions bo;
    bo.cells = options.cells;
    bo.max_probes = options.max_probes;
    bo.threads = options.threads;
    bo.progress = options.progress;
    if (sampled) {
      bo.verify = [&](std::span<const double> theta) {
        return full_oracle(witness_ranking(*data, theta));
      };
    }
    BuildReport rep;
    index.cells = build_cell_index(*work, work_oracle, bo, &rep);
    const std::size_t found = rep.direct + rep.rejected;
    build["cells_target"] = options.cells;
    build["cells"] = rep.cells;
    build["gamma"] = index.cells.partition.gamma;
    build["planes"] = rep.planes;
    build["direct"] = rep.direct;
    build["colored"] = rep.colored;
    build["rejected"] = rep.rejected;
    build["verify_rate"] = found ? static_cast<double>(rep.direct) / found : 1.0;
    build["probes"] = rep.probes;
    build["budget_hits"] = rep.budget_hits;
    build["max_probes"] = options.max_probes;
    build["timings"] = {{"planes", rep.seconds_planes},
                        {"partition", rep.seconds_partition},
                        {"assign", rep.seconds_assign},
                        {"search", rep.seconds_search},
                        {"coloring", rep.seconds_coloring}};
    index.status = index.cells.unsatisfiable ? "unsatisfiable" : "ready";
  }
  build["timings"]["total"] = std::chrono::duration<double>(Clock::now() - start).count();
  index.build = std::move(build);
  return index;
}

Engine::Engine(IndexFile index, std::shared_ptr<const Dataset> data)
    : index_(std::move(index)), data_(std::move(data)) {
  if (data_->dim() != index_.d) throw std::invalid_argument("index and dataset dimensions differ");
  oracle_ = FairnessOracle::from_config(oracle_config_from_json(index_.oracle), data_);
  warning_ = fingerprint_warning(index_, *data_);
}

QueryResult Engine::query(const WeightVector& w) const {
  if (w.dim() != index_.d) throw std::invalid_argument("expected " + std::to_string(index_.d) + " weights");
  if (index_.mode == "2d") return query_2d(index_.ranges, *data_, oracle_, w);
  return md_online(index_.cells, *data_, oracle_, w);
}

json to_json(const QueryResult& r) {
  return json{{"input_w", weights_json(r.input)},
              {"satisfactory_as_is", r.satisfactory_as_is},
              {"suggestion", r.suggestion ? weights_json(*r.suggestion) : json(nullptr)},
              {"distance", r.distance},
              {"verified", r.verified},
              {"mode", r.mode == QueryMode::kExact ? "exact" : "approximate"}};
}

WeightVector weights_from_json(const json& j, std::size_t d) {
  if (!j.is_array()) throw std::invalid_argument("weights must be an array");
  std::vector<double> w;
  for (const auto& x : j) {
    if (!x.is_number()) throw std::invalid_argument("weights must be numbers");
    w.push_back(x.get<double>());
  }
  if (w.size() != d) throw std::invalid_argument("expected " + std::to_string(d) + " weights");
  return WeightVector(std::move(w));
}

Service::Service() : server_(std::make_unique<httplib::Server>()) { routes(); }

Service::~Service() {
  stop();
  if (builder_.joinable()) builder_.join();
}

void Service::install(std::shared_ptr<const Engine> engine) {
  std::lock_guard lock(mutex_);
  status_ = engine->unsatisfiable() ? "unsatisfiable" : "ready";
  engine_ = std::move(engine);
}

std::shared_ptr<const Engine> Service::engine() const {
  std::lock_guard lock(mutex_);
  return engine_;
}

std::string Service::status() const {
  std::lock_guard lock(mutex_);
  return status_;
}

int Service::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  if (!server_->bind_to_port(host, port)) throw std::runtime_error("cannot bind port " + std::to_string(port));
  return port;
}

void Service::listen() { server_->listen_after_bind(); }

void Service::stop() { server_->stop(); }

void Service::routes() {
  // Snapshot of engine + status taken under the lock; handlers never hold it.
  auto snapshot = [this] {
    std::lock_guard lock(mutex_);
    return std::make_pair(engine_, status_);
  };
  auto fp_of = [](const std::shared_ptr<const Engine>& e) {
    return e ? e->index().fingerprint : std::string();
  };
  auto ready = [](const std::string& status) {
    return status == "ready" || status == "unsatisfiable";
  };

  server_->Get("/meta", [=, this](const httplib::Request&, httplib::Response& res) {
    auto [engine, status] = snapshot();
    json body{{"status", status}};
    {
      std::lock_guard lock(mutex_);
      body["phase"] = phase_;
      body["progress"] = progress_;
      if (!error_.empty()) body["error"] = error_;
    }
    if (engine) {
      const auto& idx = engine->index();
      body["d"] = idx.d;
      body["n"] = engine->data().size();
      body["mode"] = idx.mode;
      body["N"] = idx.mode == "md" ? json(idx.cells.partition.cell_count()) : json(nullptr);
      body["timings"] = idx.build.value("timings", json::object());
      body["build"] = idx.build;
      body["index_status"] = idx.status;
      body["scoring"] = engine->data().scoring_names();
      if (engine->warning()) body["warning"] = *engine->warning();
    }
    reply(res, 200, std::move(body), fp_of(engine));
  });

  server_->Post("/query", [=](const httplib::Request& req, httplib::Response& res) {
    auto [engine, status] = snapshot();
    const std::string fp = fp_of(engine);
    if (!ready(status) || !engine) return reply(res, 409, {{"error", "index not ready"}, {"status", status}}, fp);
    try {
      const json body = json::parse(req.body);
      const WeightVector w = weights_from_json(body.at("weights"), engine->index().d);
      json out;
      try {
        out = to_json(engine->query(w));
        out["unsatisfiable"] = false;
      } catch (const Unsatisfiable&) {
        out = json{{"input_w", weights_json(w)}, {"unsatisfiable", true},
                   {"satisfactory_as_is", false}, {"suggestion", nullptr}};
      }
      reply(res, 200, std::move(out), fp);
    } catch (const std::exception& e) {
      reply(res, 422, {{"error", e.what()}}, fp);
    }
  });

  server_->Get("/ranges2d", [=](const httplib::Request&, httplib::Response& res) {
    auto [engine, status] = snapshot();
    const std::string fp = fp_of(engine);
    if (!ready(status) || !engine) return reply(res, 409, {{"error", "index not ready"}, {"status", status}}, fp);
    if (engine->index().mode != "2d") return reply(res, 404, {{"error", "index is not 2d"}}, fp);
    reply(res, 200, ranges_json(engine->index().ranges), fp);
  });

  server_->Post("/rank", [=](const httplib::Request& req, httplib::Response& res) {
    auto [engine, status] = snapshot();
    const std::string fp = fp_of(engine);
    if (!ready(status) || !engine) return reply(res, 409, {{"error", "index not ready"}, {"status", status}}, fp);
    try {
      const json body = json::parse(req.body);
      const auto& data = engine->data();
      const WeightVector w = weights_from_json(body.at("weights"), data.dim());
      const auto k = body.value("k", std::int64_t{10});
      if (k < 1) throw std::invalid_argument("k must be positive");
      const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), data.size());
      const Ranking order = order_by(data, w.values());
      json ids = json::array(), groups = json::object(), counts = json::object();
      for (std::size_t p = 0; p < kk; ++p) ids.push_back(data.id(order[p]));
      for (const auto& t : data.types()) {
        json codes = json::array();
        json c = json::object();
        for (const auto& label : t.labels) c[label] = 0;
        for (std::size_t p = 0; p < kk; ++p) {
          const int code = t.codes[order[p]];
          codes.push_back(code);
          const std::string label = t.labels.empty() ? std::to_string(code) : t.labels[code];
          c[label] = c.value(label, 0) + 1;
        }
        groups[t.name] = std::move(codes);
        counts[t.name] = std::move(c);
      }
      json out{{"ids", ids}, {"groups", groups}, {"counts", counts}, {"k", kk},
               {"satisfactory", engine->oracle()(order)}};
      reply(res, 200, std::move(out), fp);
    } catch (const std::exception& e) {
      reply(res, 422, {{"error", e.what()}}, fp);
    }
  });

  server_->Get("/cells", [=](const httplib::Request& req, httplib::Response& res) {
    auto [engine, status] = snapshot();
    const std::string fp = fp_of(engine);
    if (!ready(status) || !engine) return reply(res, 409, {{"error", "index not ready"}, {"status", status}}, fp);
    const auto& idx = engine->index();
    if (idx.mode != "md") return reply(res, 404, {{"error", "index is not md"}}, fp);
    const auto& part = idx.cells.partition;
    const std::size_t m = part.axes();
    std::string slice = req.has_param("slice") ? req.get_param_value("slice") : "";
    if (slice.empty()) slice = m == 2 ? "*,*" : "";
    std::vector<std::optional<double>> fixed;
    std::vector<std::size_t> free_axes;
    std::stringstream ss(slice);
    std::string tok;
    try {
      while (std::getline(ss, tok, ',')) {
        if (tok == "*") {
          free_axes.push_back(fixed.size());
          fixed.emplace_back();
        } else {
          std::size_t used = 0;
          const double v = std::stod(tok, &used);
          if (used != tok.size() || v < 0.0 || v > kHalfPi) throw std::invalid_argument(tok);
          fixed.emplace_back(v);
        }
      }
    } catch (const std::exception&) {
      return reply(res, 422, {{"error", "malformed slice"}}, fp);
    }
    if (fixed.size() != m || free_axes.size() != 2) {
      return reply(res, 422, {{"error", "slice needs one entry per angle axis, exactly two '*'"}}, fp);
    }
    json cells = json::array();
    for (std::size_t c = 0; c < part.cell_count(); ++c) {
      const Box box = part.cell_box(c);
      bool hit = true;
      for (std::size_t k = 0; k < m && hit; ++k) {
        if (fixed[k]) hit = box.lo[k] <= *fixed[k] && *fixed[k] <= box.hi[k];
      }
      if (!hit) continue;
      const auto& a = idx.cells.cells[c];
      const std::size_t x = free_axes[0], y = free_axes[1];
      json cell{{"id", c},
                {"lo", {box.lo[x], box.lo[y]}},
                {"hi", {box.hi[x], box.hi[y]}}};
      if (a) {
        cell["f"] = a->function;
        cell["dist"] = a->distance;
        cell["src"] = a->source == CellSource::kDirect ? "direct" : "colored";
      } else {
        cell["f"] = nullptr;
      }
      cells.push_back(std::move(cell));
    }
    reply(res, 200, {{"axes", free_axes}, {"cells", cells}}, fp);
  });

  server_->Post("/build", [=, this](const httplib::Request& req, httplib::Response& res) {
    auto [engine, status] = snapshot();
    const std::string fp = fp_of(engine);
    if (status == "building") return reply(res, 409, {{"error", "build in progress"}}, fp);
    json body;
    try {
      body = json::parse(req.body);
      dataset_spec_from_json(body.at("data"));
      oracle_config_from_json(body.at("oracle"));
    } catch (const std::exception& e) {
      return reply(res, 422, {{"error", e.what()}}, fp);
    }
    start_build(std::move(body));
    reply(res, 202, {{"status", "building"}}, fp);
  });
}

void Service::start_build(json request) {
  if (builder_.joinable()) builder_.join();
  {
    std::lock_guard lock(mutex_);
    status_ = "building";
    phase_ = "ingest";
    progress_ = 0.0;
    error_.clear();
  }
  builder_ = std::thread([this, request = std::move(request)] {
    try {
      const DatasetSpec spec = dataset_spec_from_json(request.at("data"));
      const OracleConfig cfg = oracle_config_from_json(request.at("oracle"));
      auto data = std::make_shared<const Dataset>(ingest(spec));
      PreprocessOptions opt;
      opt.cells = request.value("cells", std::size_t{400});
      if (request.contains("sample")) opt.sample = request.at("sample").get<std::size_t>();
      opt.seed = request.value("seed", std::uint64_t{1});
      opt.mode = request.value("mode", std::string("auto"));
      opt.max_probes = request.value("max_probes", kDefaultCellBudget);
      opt.progress = [this](const std::string& phase, std::size_t done, std::size_t total) {
        std::lock_guard lock(mutex_);
        phase_ = phase;
        progress_ = total ? static_cast<double>(done) / static_cast<double>(total) : 1.0;
      };
      IndexFile index = preprocess(spec, data, cfg, opt);
      if (request.contains("out")) save_index(index, request.at("out").get<std::string>());
      auto engine = std::make_shared<const Engine>(std::move(index), data);
      std::lock_guard lock(mutex_);
      status_ = engine->unsatisfiable() ? "unsatisfiable" : "ready";
      engine_ = std::move(engine);
      phase_ = "done";
      progress_ = 1.0;
    } catch (const std::exception& e) {
      std::lock_guard lock(mutex_);
      error_ = e.what();
      status_ = engine_ ? (engine_->unsatisfiable() ? "unsatisfiable" : "ready") : "failed";
      phase_ = "failed";
    }
  });
}

}  // namespace fairrank
