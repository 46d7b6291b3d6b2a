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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "doctest.h"
#include "fairrank/geometry.hpp"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(FAIRRANK_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  char buf[4096];
  while (std::size_t got = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Scratch directory removed on exit.
struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("fairrank_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string write(const std::string& name, const std::string& text) const {
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p.string();
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

const char* kLayout =
    "x,y,color\n0.9,0.9,orange\n0.85,0.85,orange\n1.05,0.6,orange\n"
    "0.55,1.0,blue\n0.4,1.2,blue\n0.3,0.3,orange\n";

std::string random_csv(int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::string s = "a,b,c,color\n";
  for (int i = 0; i < n; ++i) {
    s += std::to_string(u(rng)) + "," + std::to_string(u(rng)) + "," + std::to_string(u(rng)) +
         (i % 3 ? ",orange\n" : ",blue\n");
  }
  return s;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("2D preprocess and query") {
    Scratch tmp;
    const auto data = tmp.write("layout.csv", kLayout);
    const auto oracle = tmp.write(
        "o.json", R"({"mode":"FM1","constraints":[{"attr":"color","group":"orange","k":4,"min":2,"max":2}]})");
    const auto index = tmp.path("layout.idx");
    const Run pre = run("preprocess --data " + data + " --score x y --type color --oracle " + oracle +
                        " --out " + index + " --format json");
    REQUIRE(pre.code == 0);
    const json built = json::parse(pre.out);
    CHECK(built["mode"] == "2d");
    CHECK(built["status"] == "ready");

    const Run q = run("query --index " + index + " --weights 1,1 --format json");
    REQUIRE(q.code == 0);
    const json r = json::parse(q.out);
    CHECK(r["satisfactory_as_is"] == false);
    CHECK(r["verified"] == true);
    const auto in = r["input_w"].get<std::vector<double>>();
    const auto s = r["suggestion"].get<std::vector<double>>();
    CHECK(r["distance"].get<double>() == doctest::Approx(fairrank::weight_angle(in, s)).epsilon(1e-12));
    CHECK(r["distance"].get<double>() > 0.0);

    // Columns are min-max normalized at ingest; feed the suggestion back.
    char again[128];
    std::snprintf(again, sizeof again, "%.17g,%.17g", s[0], s[1]);
    const json ok = json::parse(
        run("query --index " + index + " --weights " + again + " --format json").out);
    CHECK(ok["satisfactory_as_is"] == true);
    CHECK(ok["distance"] == 0.0);

    const Run text = run("query --index " + index + " --weights 1,1");
    CHECK(text.code == 0);
    CHECK(text.out.find("distance:") != std::string::npos);
    CHECK(run("inspect --index " + index).code == 0);
  }

  TEST_CASE("vacuous oracle makes every cell direct") {
    Scratch tmp;
    const auto data = tmp.write("r.csv", random_csv(12, 4));
    const auto oracle = tmp.write(
        "o.json", R"({"mode":"FM1","constraints":[{"attr":"color","group":"orange","k":5,"max":5}]})");
    const Run pre = run("preprocess --data " + data + " --score a b c:lower --type color --oracle " +
                        oracle + " --cells 200 --out " + tmp.path("r.idx") + " --format json");
    REQUIRE(pre.code == 0);
    const json b = json::parse(pre.out)["build"];
    CHECK(json::parse(pre.out)["mode"] == "md");
    CHECK(b["direct"] == b["cells"]);
    CHECK(b["colored"] == 0);
  }

  TEST_CASE("unsatisfiable exits with 2") {
    Scratch tmp;
    const auto data = tmp.write("layout.csv", kLayout);
    const auto oracle = tmp.write(
        "o.json", R"({"mode":"FM1","constraints":[{"attr":"color","group":"blue","k":4,"min":3}]})");
    const auto index = tmp.path("u.idx");
    CHECK(run("preprocess --data " + data + " --score x y --type color --oracle " + oracle +
              " --out " + index).code == 2);
    CHECK(run("inspect --index " + index).code == 2);
    const Run q = run("query --index " + index + " --weights 1,1 --format json");
    CHECK(q.code == 2);
    CHECK(json::parse(q.out)["unsatisfiable"] == true);
  }

  TEST_CASE("bad input exits with 1") {
    Scratch tmp;
    const auto data = tmp.write("layout.csv", kLayout);
    const auto oracle = tmp.write(
        "o.json", R"({"mode":"FM1","constraints":[{"attr":"color","group":"orange","k":4,"max":3}]})");
    const auto index = tmp.path("b.idx");
    CHECK(run("").code == 1);
    CHECK(run("--help").code == 0);
    CHECK(run("frobnicate").code == 1);
    CHECK(run("preprocess --data " + data).code == 1);
    CHECK(run("preprocess --data " + data + " --score x y --type color --oracle " + oracle +
              " --out " + index + " --mode sideways").code == 1);
    CHECK(run("preprocess --data " + tmp.path("missing.csv") + " --score x y --type color --oracle " +
              oracle + " --out " + index).code == 1);
    CHECK(run("preprocess --data " + data + " --score x nope --type color --oracle " + oracle +
              " --out " + index).code == 1);
    REQUIRE(run("preprocess --data " + data + " --score x y --type color --oracle " + oracle +
                " --out " + index).code == 0);
    CHECK(run("query --index " + index + " --weights 1,1,1").code == 1);
    CHECK(run("query --index " + index + " --weights -1,1").code == 1);
    CHECK(run("query --index " + index + " --weights 1,abc").code == 1);
    CHECK(run("query --index " + tmp.path("missing.idx") + " --weights 1,1").code == 1);
  }
}
