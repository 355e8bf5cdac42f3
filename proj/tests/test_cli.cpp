// Copyright 2026 The maserkur Authors
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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#ifndef MASERKUR_CLI_PATH
#error "MASERKUR_CLI_PATH must name the CLI binary"
#endif

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kRef = "--gamma-h 0.016 --gamma-c 2 --n-h 5 --n-c 0.001";

struct Result {
  int status;
  std::string out;
  std::string err;
};

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() / ("maserkur_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run(const Scratch& tmp, const std::string& args) {
  const std::string out = tmp.path("stdout"), err = tmp.path("stderr");
  const std::string cmd = std::string(MASERKUR_CLI_PATH) + " " + args + " >" + out + " 2>" + err;
  const int raw = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(raw));
  return {WEXITSTATUS(raw), slurp(out), slurp(err)};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("point in the violation window") {
    Scratch tmp;
    const Result r = run(tmp, "point " + kRef + " --lambda 0.02 --model q2 --seed 5");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("schema_version") == 1);
    CHECK(j.at("seed") == 5);
    CHECK(j.at("model") == "q2");
    CHECK(j.at("Q").get<double>() > 1.0);
    CHECK(j.at("route_discrepancy").get<double>() < 1e-6);
    CHECK(j.at("engine_regime") == true);
  }

  TEST_CASE("point with zero coupling reports undefined values") {
    Scratch tmp;
    const Result r = run(tmp, "point " + kRef + " --lambda 0 --model q1");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("Q").is_null());
    CHECK(j.at("ratio_R").is_null());
    CHECK(j.at("current").get<double>() == 0.0);
    CHECK_FALSE(j.at("warnings").empty());
  }

  TEST_CASE("point with frequencies adds power") {
    Scratch tmp;
    const Result r = run(tmp, "point " + kRef + " --lambda 0.05 --omega-h 3 --omega-c 1");
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("power").at("power").get<double>() ==
          doctest::Approx(2.0 * j.at("current").get<double>()).epsilon(1e-14));
  }

  TEST_CASE("validation and usage errors") {
    Scratch tmp;
    Result r = run(tmp, "point --gamma-h -1 --gamma-c 2 --n-h 5 --n-c 0.001 --lambda 0.05");
    CHECK(r.status == 1);
    CHECK(r.err.find("gamma_h") != std::string::npos);
    r = run(tmp, "point --gamma-c 2");
    CHECK(r.status == 1);
    CHECK(r.err.find("lambda") != std::string::npos);
    r = run(tmp, "verify --n-draws 0");
    CHECK(r.status == 1);
    r = run(tmp, "point " + kRef + " --lambda 0.05 --model q7");
    CHECK(r.status == 1);
    r = run(tmp, "frobnicate");
    CHECK(r.status != 0);
    r = run(tmp, "point --config " + tmp.path("missing.json"));
    CHECK(r.status == 1);
    r = run(tmp, "traj " + kRef + " --lambda 0.05 --model c1");
    CHECK(r.status == 1);
  }

  TEST_CASE("degenerate steady state exits with its own code") {
    Scratch tmp;
    const Result r = run(tmp, "point --gamma-h 0.5 --gamma-c 0.5 --n-h 0 --n-c 0 --lambda 0 --model q2");
    CHECK(r.status == 3);
    CHECK_FALSE(r.err.empty());
  }

  TEST_CASE("config files and overrides") {
    Scratch tmp;
    const std::string cfg = tmp.path("cfg.json");
    std::ofstream(cfg) << R"({"gamma_h": 0.016, "gamma_c": 2, "n_h": 5, "n_c": 0.001, "lambda": 0.05, "model": "q2"})";
    const Result a = run(tmp, "point --config " + cfg);
    REQUIRE(a.status == 0);
    CHECK(json::parse(a.out).at("params").at("lambda") == 0.05);
    const Result b = run(tmp, "point --config " + cfg + " --lambda 0.02");
    REQUIRE(b.status == 0);
    CHECK(json::parse(b.out).at("params").at("lambda") == 0.02);
    std::ofstream(cfg) << R"({"gamma": 1})";
    CHECK(run(tmp, "point --config " + cfg).status == 1);
  }

  TEST_CASE("sweep output is byte-stable and shows the Model II violation") {
    Scratch tmp;
    const std::string a = tmp.path("a.csv"), b = tmp.path("b.csv");
    REQUIRE(run(tmp, "sweep --out " + a).status == 0);
    REQUIRE(run(tmp, "sweep --threads 3 --out " + b).status == 0);
    const std::string text = slurp(a);
    CHECK(text == slurp(b));
    const json side = json::parse(slurp(a + ".json"));
    CHECK(side.at("points") == 200);
    double max_q2 = 0.0;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
      ++rows;
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string c; std::getline(ls, c, ',');) f.push_back(c);
      REQUIRE(f.size() == 9);
      if (f[1] == "q2") max_q2 = std::max(max_q2, std::stod(f[7]));
    }
    CHECK(rows == 800);
    CHECK(max_q2 > 1.0);
  }

  TEST_CASE("histogram run records violations and its seed") {
    Scratch tmp;
    const std::string a = tmp.path("h.csv"), b = tmp.path("h2.csv");
    REQUIRE(run(tmp, "hist --n-samples 10000 --seed 3 --model q2 --out " + a).status == 0);
    REQUIRE(run(tmp, "hist --n-samples 10000 --seed 3 --model q2 --threads 2 --out " + b).status == 0);
    CHECK(slurp(a) == slurp(b));
    const json side = json::parse(slurp(a + ".json"));
    CHECK(side.at("n_violations").get<int>() > 0);
    CHECK(side.at("seed") == 3);
    CHECK(side.at("n_samples") == 10000);
    REQUIRE(run(tmp, "hist --n-samples 10000 --seed 3 --model q1 --out " + a).status == 0);
    CHECK(json::parse(slurp(a + ".json")).at("n_violations") == 0);
  }

  TEST_CASE("verify succeeds and fault injection fails by name") {
    Scratch tmp;
    Result r = run(tmp, "verify --n-draws 200");
    CHECK(r.status == 0);
    r = run(tmp, "verify --n-draws 200 --inject-fault ratio_r");
    CHECK(r.status == 2);
    CHECK((r.out + r.err).find("ratio_ordering") != std::string::npos);
    CHECK((r.out + r.err).find("maserkur point --gamma-h") != std::string::npos);
  }

  TEST_CASE("trajectory smoke run") {
    Scratch tmp;
    const std::string rec = tmp.path("rec.csv");
    const std::string args = "traj --gamma-h 0.3 --gamma-c 1.2 --n-h 2 --n-c 0.05 --lambda 0.7 --n-traj 100 --seed 4";
    const Result r = run(tmp, args + " --records " + rec);
    REQUIRE(r.status == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("n_traj") == 100);
    CHECK(j.at("seed") == 4);
    for (const char* q : {"current", "activity"}) {
      const double z = j.at(q).at("z").get<double>();
      CHECK(std::abs(z) < 5.0);
      CHECK(j.at(q).at("stderr").get<double>() > 0.0);
    }
    const Result again = run(tmp, args + " --threads 2");
    CHECK(again.out == r.out);
    std::istringstream in(slurp(rec));
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    CHECK(lines == 101);
  }
}
