// Copyright 2026 The xbarlife Authors
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

// Drives the command-line tool as a subprocess.

#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const fs::path kWork = fs::temp_directory_path() / "xbl_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::string& args, const std::string& env = "") {
  fs::create_directories(kWork);
  const fs::path out = kWork / "stdout.txt", err = kWork / "stderr.txt";
  const std::string cmd = "env -u XBARLIFE_CONFIG " + env + " '" XBL_CLI "' " +
                          args + " >'" + out.string() + "' 2>'" +
                          err.string() + "'";
  const int status = std::system(cmd.c_str());
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
}

const std::string kConfig = "--config '" XBL_SOURCE_DIR "/config/default.toml'";

std::string out_dir(const std::string& name) {
  return "--out '" + (kWork / name).string() + "'";
}

}  // namespace

TEST_CASE("help and usage errors") {
  fs::remove_all(kWork);
  CHECK(run("--help").code == 0);
  CHECK(run("").code == 2);
  CHECK(run("frobnicate").code == 2);
  const auto h = run("endurance-map --help");
  CHECK(h.code == 0);
  CHECK(h.out.find("--pulse-width") != std::string::npos);
  CHECK(h.out.find("XBARLIFE_CONFIG") != std::string::npos);
  CHECK(run("current-map " + kConfig).code == 2);  // --out is required
  CHECK(run("current-map " + kConfig + " --node 7 " + out_dir("x")).code == 2);
  CHECK(run("current-map " + kConfig + " --size 1 " + out_dir("x")).code == 2);
  CHECK(run("current-map " + kConfig + " --state lrs9 " + out_dir("x")).code == 2);
}

TEST_CASE("missing config prints usage") {
  const auto r = run("current-map " + out_dir("cm"));
  CHECK(r.code == 2);
  CHECK(r.err.find("--config") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  const auto m = run("current-map --config /no/such.toml " + out_dir("cm"));
  CHECK(m.code == 4);
  CHECK(m.err.find("Usage") != std::string::npos);
  CHECK(!fs::exists(kWork / "cm"));
}

TEST_CASE("config from the environment") {
  const auto r = run("current-map --size 2 " + out_dir("env"),
                     "XBARLIFE_CONFIG='" XBL_SOURCE_DIR "/config/default.toml'");
  CHECK(r.code == 0);
  CHECK(fs::exists(kWork / "env" / "current_map.csv"));
  CHECK(slurp(kWork / "env" / "manifest.json").find("default.toml") !=
        std::string::npos);
}

TEST_CASE("current map on a 2x2 crossbar") {
  const auto r = run("current-map " + kConfig + " --size 2 " + out_dir("cm2"));
  REQUIRE(r.code == 0);
  const auto csv = slurp(kWork / "cm2" / "current_map.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  CHECK(std::count(csv.begin(), csv.end(), ',') == 2);
}

TEST_CASE("validation and solver failures map to exit codes") {
  fs::create_directories(kWork);
  std::ofstream(kWork / "bad.toml") << "[crossbar]\nunknown_key = 3\n";
  const auto bad = run("cost-sweep --config '" + (kWork / "bad.toml").string() +
                       "' " + out_dir("bad"));
  CHECK(bad.code == 2);
  CHECK(bad.err.find("line 2") != std::string::npos);

  std::ofstream(kWork / "tight.toml") << "[crossbar]\ntolerance = 1e-30\n";
  const auto tight = run("current-map --config '" + (kWork / "tight.toml").string() +
                         "' --size 4 " + out_dir("tight"));
  CHECK(tight.code == 3);
  CHECK(tight.err.find("residual") != std::string::npos);
  CHECK(!fs::exists(kWork / "tight" / "current_map.csv"));

  const auto over = run("optimize " + kConfig + " --size 2 --synapses 5 " +
                        out_dir("over"));
  CHECK(over.code == 2);
  CHECK(run("optimize " + kConfig + " --workload /no/such.json " + out_dir("nw"))
            .code == 4);
  CHECK(run("cost-sweep " + kConfig + " --out /proc/xbarlife_forbidden").code == 4);
}

TEST_CASE("identical runs give identical bytes") {
  const std::string args = "optimize " + kConfig +
                           " --size 16 --generate 'zipf(1.5)' --seed 11 " +
                           out_dir("rep");
  REQUIRE(run(args).code == 0);
  std::map<std::string, std::string> first;
  for (const auto& e : fs::directory_iterator(kWork / "rep"))
    first[e.path().filename().string()] = slurp(e.path());
  REQUIRE(run(args + " --jobs 2").code == 0);
  for (const auto& [name, bytes] : first)
    CHECK(slurp(kWork / "rep" / name) == bytes);
  fs::remove_all(kWork);
}
