/*
   Copyright 2026 The LayoutGraph Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
 */

// Drives the layoutgraph binary end to end.

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

const fs::path& workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "lg_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args, const std::string& env = "") {
  const fs::path err = workdir() / "stderr.txt";
  const std::string cmd =
      "cd " + workdir().string() + " && " + env + " " + LG_CLI_PATH + " " + args + " 2>" + err.string();
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.err = slurp(err);
  return r;
}

json ok_json(const std::string& args) {
  const Run r = cli("--json " + args);
  INFO(args, " -> ", r.err);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

const char* kSmallNet = "--node-dim 16 --coord-dim 8 --text-dim 8 --appearance-dim 4 --type-dim 8";

}  // namespace

TEST_CASE("cli: generate, pair, train, evaluate") {
  CHECK(ok_json("gen-synthetic --seed 5 --count 64 --out data")["count"] == 64);
  CHECK(fs::exists(workdir() / "data" / "gui_00063.json"));
  CHECK(ok_json("pairs --data data --seed 2 --chunks 2 --out pairs.json")["pairs"].get<int>() > 0);

  const std::string train = std::string("train --data data --epochs 15 --lr 3e-3 --chunks 2 ") + kSmallNet;
  const json t = ok_json(train + " --out a.ck");
  CHECK(t["steps"] == 120);
  for (const char* k : {"total", "element_mse", "boundary", "constraint_bce"}) CHECK(t["loss"].contains(k));
  ok_json(train + " --out b.ck --log b.csv");
  CHECK(slurp(workdir() / "a.ck") == slurp(workdir() / "b.ck"));
  ok_json(train + " --out c.ck --seed 2");
  CHECK(slurp(workdir() / "a.ck") != slurp(workdir() / "c.ck"));

  const std::string csv = slurp(workdir() / "a.ck.csv");
  CHECK(csv.rfind("step,total,element_mse,boundary,constraint_bce\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 121);

  const json model = ok_json("eval --model a.ck --pairs pairs.json --report report.json");
  const json center = ok_json("eval --placer center --pairs pairs.json");
  CHECK(model["overall"]["pos_error"].get<double>() < center["overall"]["pos_error"].get<double>());
  const json report = json::parse(slurp(workdir() / "report.json"));
  CHECK(report["buckets"].size() > 1);
  CHECK(report["buckets"][0].contains("count"));
  const json oracle = ok_json("eval --placer oracle --pairs pairs.json");
  CHECK(oracle["overall"]["pos_error"] == 0.0);
}

TEST_CASE("cli: suggest, classify, index and retrieve") {
  ok_json("gen-synthetic --seed 8 --count 16 --out small");
  ok_json(std::string("train --data small --epochs 1 --chunks 1 --out s.ck ") + kSmallNet);

  // A GUI with two unplaced elements.
  json g = json::parse(slurp(workdir() / "small" / "gui_00000.json"));
  auto& els = g["elements"];
  for (std::size_t i = els.size() - 2; i < els.size(); ++i) els[i].erase("bbox");
  std::ofstream(workdir() / "partial.json") << g.dump();

  const json one = ok_json("suggest --model s.ck --gui partial.json");
  CHECK(one.contains("bbox"));
  CHECK(one["confidence"].is_string());
  CHECK(ok_json("suggest --model s.ck --gui partial.json --mode all").size() == 2);
  CHECK(ok_json("suggest --model s.ck --gui partial.json --mode group").size() >= 1);
  const std::string last = els.back()["id"];
  CHECK(ok_json("suggest --model s.ck --gui partial.json --target " + last)["element_id"] == last);

  // Not trained for classification: answered but flagged.
  const Run warn = cli("classify --model s.ck --gui small/gui_00001.json");
  CHECK(warn.code == 0);
  CHECK(warn.err.find("not trained") != std::string::npos);
  CHECK(json::parse(warn.out)["trained"] == false);

  ok_json("train --task classify --init s.ck --data small --epochs 2 --out cls.ck");
  const json c = ok_json("classify --model cls.ck --gui small/gui_00001.json");
  CHECK(c["trained"] == true);
  double sum = 0.0;
  for (auto& [k, v] : c["probs"].items()) sum += v.get<double>();
  CHECK(sum == doctest::Approx(1.0));

  CHECK(ok_json("index --model cls.ck --data small --out idx.bin")["entries"] == 16);
  const json nn = ok_json("retrieve --index idx.bin --gui small/gui_00003.json -k 3");
  REQUIRE(nn["neighbors"].size() == 3);
  CHECK(nn["neighbors"][0]["id"] != "gui_00003");  // the query itself is excluded
  CHECK(nn["neighbors"][0]["distance"] <= nn["neighbors"][2]["distance"]);
  CHECK(cli("--json retrieve --index idx.bin --gui small/gui_00003.json -k 16").code == 1);
}

TEST_CASE("cli: config file precedence and errors") {
  std::ofstream(workdir() / "cfg.json") << R"({"gen-synthetic": {"count": 7, "seed": 9}})";
  CHECK(ok_json("--config cfg.json gen-synthetic --out cfg_a")["count"] == 7);
  CHECK(ok_json("--config cfg.json gen-synthetic --out cfg_b --count 3")["count"] == 3);
  CHECK(cli("--json gen-synthetic --out cfg_c", "LAYOUTGRAPH_CONFIG=cfg.json").out ==
        cli("--json --config cfg.json gen-synthetic --out cfg_c").out);

  Run r = cli("--json extract-constraints --in missing.json");
  CHECK(r.code == 2);
  CHECK(json::parse(r.err)["error"] == "io");
  std::ofstream(workdir() / "broken.json") << R"({"canvas": {"w": 10, "h": 10}, "elements": [{"id": "a"}]})";
  r = cli("--json extract-constraints --in broken.json");
  CHECK(r.code == 1);
  CHECK(json::parse(r.err)["error"] == "validation");
  r = cli("--json train --data data");
  CHECK(r.code == 1);
  CHECK(json::parse(r.err)["error"] == "usage");

  const json cs = ok_json("extract-constraints --in data/gui_00002.json --tol 2");
  CHECK(cs.is_array());
  CHECK(!cs.empty());
}
