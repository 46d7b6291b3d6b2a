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

#include "fairrank/dataio.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <boost/tokenizer.hpp>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace fairrank {
namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line, char delimiter) {
  boost::escaped_list_separator<char> sep('\\', delimiter, '"');
  boost::tokenizer<boost::escaped_list_separator<char>> tok(line, sep);
  std::vector<std::string> out;
  for (const auto& t : tok) out.push_back(trim(t));
  return out;
}

std::optional<double> parse_number(const std::string& s) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v)) return std::nullopt;
  return v;
}

json amount_to_json(const Amount& a) {
  if (a.fraction) return a.value;
  return static_cast<std::int64_t>(a.value);
}

Amount amount_from_json(const json& j, const char* field) {
  if (j.is_number_integer() || j.is_number_unsigned()) {
    return Amount::count(static_cast<double>(j.get<std::int64_t>()));
  }
  if (j.is_number_float()) return Amount::share(j.get<double>());
  if (j.is_string()) {
    std::string s = trim(j.get<std::string>());
    const bool percent = !s.empty() && s.back() == '%';
    if (percent) s.pop_back();
    if (auto v = parse_number(trim(s))) return percent ? Amount::share(*v / 100.0) : Amount::share(*v);
  }
  throw OracleError(std::string("malformed '") + field + "' in oracle config");
}

void hash_bytes(EVP_MD_CTX* ctx, const void* p, std::size_t n) { EVP_DigestUpdate(ctx, p, n); }

void hash_string(EVP_MD_CTX* ctx, const std::string& s) {
  const std::uint64_t n = s.size();
  hash_bytes(ctx, &n, sizeof n);
  hash_bytes(ctx, s.data(), s.size());
}

// Partition tree as nested [lo, hi, children...] arrays.
json partition_to_json(const AnglePartition& part, std::size_t level, std::uint32_t first,
                       std::uint32_t count) {
  json arr = json::array();
  for (std::uint32_t r = first; r < first + count; ++r) {
    const auto& node = part.levels[level][r];
    json n = json::array({node.lo, node.hi});
    if (level + 1 < part.axes()) n.push_back(partition_to_json(part, level + 1, node.first, node.count));
    arr.push_back(std::move(n));
  }
  return arr;
}

void partition_from_json(AnglePartition& part, const json& arr, std::size_t level,
                         std::uint32_t parent) {
  auto& rows = part.levels.at(level);
  const auto first = static_cast<std::uint32_t>(rows.size());
  for (const auto& n : arr) {
    AnglePartition::Node node;
    node.lo = n.at(0).get<double>();
    node.hi = n.at(1).get<double>();
    node.parent = parent;
    rows.push_back(node);
  }
  const auto count = static_cast<std::uint32_t>(rows.size() - first);
  if (level > 0) {
    part.levels[level - 1][parent].first = first;
    part.levels[level - 1][parent].count = count;
  }
  if (level + 1 < part.levels.size()) {
    std::uint32_t r = first;
    for (const auto& n : arr) partition_from_json(part, n.at(2), level + 1, r++);
  }
}

}  // namespace

ScoringColumn parse_scoring_column(const std::string& text) {
  ScoringColumn col;
  const auto colon = text.rfind(':');
  col.name = text.substr(0, colon);
  if (colon != std::string::npos) {
    const std::string dir = text.substr(colon + 1);
    if (dir == "lower") {
      col.lower_better = true;
    } else if (dir != "higher") {
      throw IngestError("unknown direction '" + dir + "' for column '" + col.name + "'");
    }
  }
  return col;
}

Dataset ingest_text(const std::string& text, const DatasetSpec& spec) {
  if (spec.scoring.size() < 2) throw IngestError("need at least two scoring attributes");
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IngestError("empty dataset file");
  const auto header = split_line(line, spec.delimiter);
  auto column = [&](const std::string& name) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw IngestError("missing column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  std::vector<std::size_t> score_cols, type_cols;
  std::vector<std::string> names;
  for (const auto& s : spec.scoring) {
    if (std::find(names.begin(), names.end(), s.name) != names.end()) {
      throw IngestError("duplicate scoring column '" + s.name + "'");
    }
    names.push_back(s.name);
    score_cols.push_back(column(s.name));
  }
  for (const auto& t : spec.types) type_cols.push_back(column(t));

  const std::size_t d = score_cols.size();
  std::vector<double> raw;
  std::vector<TypeColumn> types(spec.types.size());
  std::vector<std::map<std::string, int>> books(spec.types.size());
  for (std::size_t t = 0; t < types.size(); ++t) types[t].name = spec.types[t];
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_line(line, spec.delimiter);
    if (cells.size() != header.size()) {
      throw IngestError("line " + std::to_string(line_no) + ": expected " +
                        std::to_string(header.size()) + " fields");
    }
    for (std::size_t k = 0; k < d; ++k) {
      auto v = parse_number(cells[score_cols[k]]);
      if (!v) {
        throw IngestError("non-numeric value '" + cells[score_cols[k]] + "' in column '" +
                          names[k] + "' at line " + std::to_string(line_no));
      }
      raw.push_back(*v);
    }
    for (std::size_t t = 0; t < types.size(); ++t) {
      const std::string& label = cells[type_cols[t]];
      auto [it, fresh] = books[t].emplace(label, static_cast<int>(types[t].labels.size()));
      if (fresh) types[t].labels.push_back(label);
      types[t].codes.push_back(it->second);
    }
  }
  const std::size_t n = raw.size() / d;
  if (n == 0) throw IngestError("dataset has no rows");

  std::vector<ColumnScale> scales(d);
  for (std::size_t k = 0; k < d; ++k) {
    double lo = raw[k], hi = raw[k];
    for (std::size_t i = 0; i < n; ++i) {
      lo = std::min(lo, raw[i * d + k]);
      hi = std::max(hi, raw[i * d + k]);
    }
    if (!(hi > lo)) throw IngestError("constant column '" + names[k] + "'");
    scales[k] = {lo, hi, spec.scoring[k].lower_better};
    for (std::size_t i = 0; i < n; ++i) {
      double v = (raw[i * d + k] - lo) / (hi - lo);
      raw[i * d + k] = scales[k].lower_better ? 1.0 - v : v;
    }
  }
  Dataset data(d, std::move(raw));
  data.set_scoring_names(names);
  data.set_scales(std::move(scales));
  for (auto& t : types) data.add_type(std::move(t));
  return data;
}

Dataset ingest(const DatasetSpec& spec) {
  std::ifstream f(spec.path, std::ios::binary);
  if (!f) throw IngestError("cannot open dataset '" + spec.path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ingest_text(ss.str(), spec);
}

Dataset sample_uniform(const Dataset& data, std::size_t m, std::uint64_t seed) {
  const std::size_t n = data.size();
  if (m == 0 || m > n) throw std::invalid_argument("sample size must be in [1, n]");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  // Partial Fisher-Yates: the first m slots become a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return data.subset(idx);
}

std::string fingerprint(const Dataset& data) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  const std::uint64_t header[2] = {data.dim(), data.size()};
  hash_bytes(ctx, header, sizeof header);
  hash_bytes(ctx, data.values().data(), data.values().size() * sizeof(double));
  hash_bytes(ctx, data.ids().data(), data.ids().size() * sizeof(ItemId));
  for (const auto& t : data.types()) {
    hash_string(ctx, t.name);
    hash_bytes(ctx, t.codes.data(), t.codes.size() * sizeof(int));
    for (const auto& l : t.labels) hash_string(ctx, l);
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

json to_json(const OracleConfig& config) {
  json cs = json::array();
  for (const auto& c : config.constraints) {
    json j{{"attr", c.attr}, {"group", c.group}, {"k", amount_to_json(c.k)}};
    if (c.min) j["min"] = amount_to_json(*c.min);
    if (c.max) j["max"] = amount_to_json(*c.max);
    cs.push_back(std::move(j));
  }
  return json{{"mode", config.mode}, {"constraints", std::move(cs)}};
}

OracleConfig oracle_config_from_json(const json& doc) {
  try {
    OracleConfig cfg;
    cfg.mode = doc.value("mode", std::string("FM1"));
    for (const auto& c : doc.at("constraints")) {
      ConstraintSpec spec;
      spec.attr = c.at("attr").get<std::string>();
      const auto& g = c.at("group");
      spec.group = g.is_string() ? g.get<std::string>() : std::to_string(g.get<std::int64_t>());
      spec.k = amount_from_json(c.at("k"), "k");
      if (c.contains("min")) spec.min = amount_from_json(c.at("min"), "min");
      if (c.contains("max")) spec.max = amount_from_json(c.at("max"), "max");
      if (!spec.min && !spec.max) throw OracleError("constraint needs min or max");
      cfg.constraints.push_back(std::move(spec));
    }
    return cfg;
  } catch (const json::exception& e) {
    throw OracleError(std::string("malformed oracle config: ") + e.what());
  }
}

OracleConfig load_oracle_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw OracleError("cannot open oracle config '" + path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::exception& e) {
    throw OracleError(std::string("malformed oracle config: ") + e.what());
  }
  return oracle_config_from_json(doc);
}

json to_json(const DatasetSpec& spec) {
  json scoring = json::array();
  for (const auto& s : spec.scoring) {
    scoring.push_back({{"name", s.name}, {"direction", s.lower_better ? "lower" : "higher"}});
  }
  return json{{"path", spec.path},
              {"scoring", std::move(scoring)},
              {"types", spec.types},
              {"delimiter", std::string(1, spec.delimiter)}};
}

DatasetSpec dataset_spec_from_json(const json& doc) {
  DatasetSpec spec;
  spec.path = doc.at("path").get<std::string>();
  for (const auto& s : doc.at("scoring")) {
    spec.scoring.push_back({s.at("name").get<std::string>(),
                            s.at("direction").get<std::string>() == "lower"});
  }
  spec.types = doc.at("types").get<std::vector<std::string>>();
  const auto delim = doc.at("delimiter").get<std::string>();
  spec.delimiter = delim.empty() ? ',' : delim[0];
  return spec;
}

std::string serialize_index(const IndexFile& index) {
  json doc{{"format_version", index.format_version},
           {"d", index.d},
           {"fingerprint", index.fingerprint},
           {"mode", index.mode},
           {"status", index.status},
           {"dataset", index.dataset},
           {"oracle", index.oracle},
           {"build", index.build}};
  if (index.mode == "2d") {
    json ranges = json::array();
    for (const auto& r : index.ranges.ranges) {
      ranges.push_back({{"lo", r.lo}, {"hi", r.hi}, {"suggest_lo", r.suggest_lo},
                        {"suggest_hi", r.suggest_hi}});
    }
    doc["ranges2d"] = std::move(ranges);
  } else {
    const auto& part = index.cells.partition;
    doc["partition"] = {{"gamma", part.gamma},
                        {"n_target", part.n_target},
                        {"tree", partition_to_json(part, 0, 0, part.roots())}};
    json cells = json::array();
    for (const auto& c : index.cells.cells) {
      if (!c) {
        cells.push_back(nullptr);
        continue;
      }
      cells.push_back({{"f", c->function},
                       {"dist", c->distance},
                       {"src", c->source == CellSource::kDirect ? "direct" : "colored"},
                       {"seed", c->seed}});
    }
    doc["cells"] = std::move(cells);
  }
  return doc.dump() + "\n";
}

IndexFile parse_index(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception&) {
    throw IndexError("corrupt index");
  }
  try {
    IndexFile index;
    index.format_version = doc.at("format_version").get<int>();
    if (index.format_version > kIndexFormatVersion) {
      throw IndexError("unsupported index format version " +
                       std::to_string(index.format_version));
    }
    if (index.format_version < 1) throw IndexError("corrupt index");
    index.d = doc.at("d").get<std::size_t>();
    index.fingerprint = doc.at("fingerprint").get<std::string>();
    index.mode = doc.at("mode").get<std::string>();
    index.status = doc.at("status").get<std::string>();
    index.dataset = doc.at("dataset");
    index.oracle = doc.at("oracle");
    index.build = doc.at("build");
    if (index.mode == "2d") {
      for (const auto& r : doc.at("ranges2d")) {
        index.ranges.ranges.push_back({r.at("lo").get<double>(), r.at("hi").get<double>(),
                                       r.at("suggest_lo").get<double>(),
                                       r.at("suggest_hi").get<double>()});
      }
    } else if (index.mode == "md") {
      if (index.d < 3) throw IndexError("corrupt index");
      auto& part = index.cells.partition;
      const auto& p = doc.at("partition");
      part.d = index.d;
      part.gamma = p.at("gamma").get<double>();
      part.n_target = p.at("n_target").get<std::size_t>();
      part.levels.resize(index.d - 1);
      partition_from_json(part, p.at("tree"), 0, 0);
      const auto& cells = doc.at("cells");
      if (cells.size() != part.cell_count()) throw IndexError("corrupt index");
      for (const auto& c : cells) {
        if (c.is_null()) {
          index.cells.cells.emplace_back();
          continue;
        }
        CellAssignment a;
        a.function = c.at("f").get<std::vector<double>>();
        if (a.function.size() != index.d - 1) throw IndexError("corrupt index");
        a.distance = c.at("dist").get<double>();
        a.source = c.at("src").get<std::string>() == "direct" ? CellSource::kDirect
                                                               : CellSource::kColored;
        a.seed = c.at("seed").get<std::uint32_t>();
        index.cells.cells.push_back(std::move(a));
      }
      index.cells.unsatisfiable = index.status == "unsatisfiable";
    } else {
      throw IndexError("corrupt index");
    }
    return index;
  } catch (const json::exception&) {
    throw IndexError("corrupt index");
  }
}

void save_index(const IndexFile& index, const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IndexError("cannot write index '" + path + "'");
  f << serialize_index(index);
  if (!f) throw IndexError("cannot write index '" + path + "'");
}

IndexFile load_index(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IndexError("cannot open index '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_index(ss.str());
}

std::optional<std::string> fingerprint_warning(const IndexFile& index, const Dataset& data) {
  const std::string fp = fingerprint(data);
  if (fp == index.fingerprint) return std::nullopt;
  return "index fingerprint " + index.fingerprint.substr(0, 12) +
         " does not match dataset fingerprint " + fp.substr(0, 12);
}

}  // namespace fairrank
