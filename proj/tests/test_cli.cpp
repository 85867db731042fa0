// Copyright 2026 The holo-refocus Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string output;
};

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("holonomy_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Run invoke(const std::string& args) {
  const fs::path log = scratch() / "out.txt";
  const std::string cmd = std::string(HOLONOMY_BIN) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

fs::path write_config(const std::string& name, const json& doc) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

json quick_config(const std::string& report) {
  return json{{"scheme", "lambda_double"},
              {"gamma", 0.05},
              {"kappa", 0.05},
              {"numeric", {{"wilson_steps", 2000}, {"seed", 7}}},
              {"output", {{"report", (scratch() / report).string()}}}};
}

json load(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

}  // namespace

TEST_CASE("invalid rate exits 2 and names the field") {
  json doc = quick_config("bad.json");
  doc["kappa"] = -1.0;
  const Run r = invoke("run " + write_config("bad_cfg.json", doc).string());
  CHECK(r.code == 2);
  CHECK(r.output.find("kappa") != std::string::npos);
}

TEST_CASE("missing config and bad arguments exit 2") {
  CHECK(invoke("run " + (scratch() / "nope.json").string()).code == 2);
  CHECK(invoke("frobnicate").code == 2);
  CHECK(invoke("verify --filter no_such_criterion").code == 2);
}

TEST_CASE("runs are reproducible modulo the timestamp") {
  const fs::path cfg_a = write_config("a.json", quick_config("report_a.json"));
  const fs::path cfg_b = write_config("b.json", quick_config("report_b.json"));
  REQUIRE(invoke("run " + cfg_a.string()).code == 0);
  REQUIRE(invoke("run " + cfg_b.string()).code == 0);
  json a = load(scratch() / "report_a.json"), b = load(scratch() / "report_b.json");
  for (json* j : {&a, &b}) {
    j->erase("generated_at");
    (*j)["config"].erase("output");
  }
  CHECK(a.dump() == b.dump());
  CHECK(a["tool"]["name"] == "holonomy");
  CHECK(a["result"]["metrics"]["homogeneity_defect"].get<double>() < 1e-2);
  CHECK(a.contains("resolved"));
}

TEST_CASE("echoed config re-runs to the same result") {
  const fs::path cfg = write_config("echo_src.json", quick_config("echo_a.json"));
  REQUIRE(invoke("run " + cfg.string()).code == 0);
  json echoed = load(scratch() / "echo_a.json")["config"];
  echoed["output"]["report"] = (scratch() / "echo_b.json").string();
  REQUIRE(invoke("run " + write_config("echo_cfg.json", echoed).string()).code == 0);
  CHECK(load(scratch() / "echo_a.json")["result"].dump() == load(scratch() / "echo_b.json")["result"].dump());
}

TEST_CASE("sweep: empty grid exits 2, regime flags recorded") {
  json doc = quick_config("unused.json");
  doc["scheme"] = "single";
  doc["grid"] = json::object();
  CHECK(invoke("sweep " + write_config("empty_grid.json", doc).string()).code == 2);

  doc["grid"] = {{"kappa_over_gamma", {0.5, 1.0}}, {"kappa_over_omega", {0.01, 0.6}}};
  doc["output"]["sweep_csv"] = (scratch() / "sweep.csv").string();
  doc["output"]["sweep_fit"] = (scratch() / "fit.json").string();
  REQUIRE(invoke("sweep " + write_config("grid.json", doc).string()).code == 0);
  std::ifstream csv(scratch() / "sweep.csv");
  int lines = 0;
  for (std::string l; std::getline(csv, l);) ++lines;
  CHECK(lines == 5);
  const json fit = load(scratch() / "fit.json");
  CHECK(fit["excluded_rows"].size() == 2);
}

TEST_CASE("verify: filter and coarse-step negative control") {
  const Run coarse = invoke("verify --filter c9 --dt-scale 10");
  CHECK(coarse.code == 1);
  CHECK(coarse.output.find("[FAIL] 9") != std::string::npos);

  const Run nmr = invoke("verify --filter nmr --dt-scale 10");
  CHECK(nmr.output.find("c1_nmr") != std::string::npos);
  CHECK(nmr.output.find("c2_nmr") != std::string::npos);
  CHECK(nmr.output.find("c3_nmr") != std::string::npos);
  CHECK(nmr.output.find("c4_") == std::string::npos);
  CHECK(nmr.output.find("c9_") == std::string::npos);
}
