// Copyright 2026 The petzlab Authors
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

#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(PETZLAB_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t k = 0;
  while ((k = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, k);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("petzlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

const char* kConfig = R"({
  "algebra": {"dim": 2},
  "reference": {"kind": "random", "seed": 3},
  "channel": {"kind": "random", "target_dim": 2, "rank": 2, "seed": 5},
  "state": {"kind": "random", "seed": 8},
  "n_max": 6,
  "restarts": 4,
  "fuzz": {"registry": ["dpi", "spectral_certificate"], "shape": {"n_max": 6}}
})";

}  // namespace

TEST_CASE("every subcommand succeeds and is reproducible") {
  TempDir dir;
  const fs::path cfg = dir.write("c.json", kConfig);
  for (const char* sub : {"analyze", "iterate", "decompose", "dpi", "bound", "fuzz", "probe-l1"}) {
    const Run a = run(std::string(sub) + " --config " + cfg.string());
    const Run b = run(std::string(sub) + " --config " + cfg.string());
    CHECK_MESSAGE(a.code == 0, sub);
    CHECK_FALSE(a.out.empty());
    CHECK(a.out == b.out);
  }
}

TEST_CASE("--out writes the same bytes as stdout") {
  TempDir dir;
  const fs::path cfg = dir.write("c.json", kConfig);
  const fs::path out = dir.path / "analysis.json";
  const Run a = run("analyze --config " + cfg.string());
  const Run b = run("analyze --config " + cfg.string() + " --out " + out.string());
  CHECK(b.code == 0);
  CHECK(b.out.empty());
  CHECK(slurp(out) == a.out);
  // Matrices survive a parse and re-dump unchanged.
  const auto j = nlohmann::ordered_json::parse(a.out);
  CHECK(j.dump(2) + "\n" == a.out);
}

TEST_CASE("--seed and stdin config") {
  TempDir dir;
  const fs::path cfg = dir.write("c.json", kConfig);
  const Run a = run("analyze --config " + cfg.string());
  const Run s0 = run("analyze --seed 0 --config " + cfg.string());
  const Run s7 = run("analyze --seed 7 --config " + cfg.string());
  CHECK(a.out == s0.out);
  CHECK(a.out != s7.out);
  const Run in = run("analyze --config - < " + cfg.string());
  CHECK(in.code == 0);
  CHECK(in.out == a.out);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run("analyze --config " + (dir.path / "missing.json").string()).code == 2);
  CHECK(run("analyze --config " + dir.write("bad.json", "{oops").string()).code == 2);
  CHECK(run("analyze").code == 2);
  CHECK(run("transmogrify --config x").code == 2);
  CHECK(run("").code == 2);
  // No strict channel survives this tolerance, so every fuzz instance is rejected.
  const fs::path rej = dir.write(
      "r.json", R"({"num_instances": 2, "tolerances": {"tol_pd": 0.99}, "fuzz": {"registry": ["dpi"], "dims": [3]}})");
  CHECK(run("fuzz --config " + rej.string()).code == 1);
  CHECK(run("--help").code == 0);
}
