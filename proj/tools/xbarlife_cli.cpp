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

// xbarlife command-line front end. Talks to the library only through the C
// interface.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "xbarlife/xbarlife.h"

namespace {

constexpr const char* kConfigEnv = "XBARLIFE_CONFIG";

struct Flags {
  std::string config;
  std::string out;
  std::size_t size = 0;
  int node = 0;
  std::string state;
  double pulse_width = 0.0;
  double v_spike = 0.0;
  std::string mode;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::vector<std::size_t> sizes;
  std::vector<int> nodes;
  std::string workload;
  std::string generate;
  std::size_t synapses = 0;
  bool local_search = false;
};

int state_code(const std::string& s) {
  static const std::map<std::string, int> m{
      {"hrs", XBL_HRS}, {"lrs1", XBL_LRS1}, {"lrs2", XBL_LRS2},
      {"lrs3", XBL_LRS3}};
  return s.empty() ? -1 : m.at(s);
}

int mode_code(const std::string& s) {
  if (s.empty()) return -1;
  return s == "full" ? XBL_READ_FULL : XBL_READ_ISOLATED;
}

void common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config,
                  std::string("TOML configuration (default: $") + kConfigEnv +
                      ")");
  cmd->add_option("--out", f.out, "Output directory")->required();
  cmd->add_option("--jobs", f.jobs, "Concurrent workers")
      ->check(CLI::Range(1u, 1024u));
}

void array_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--size", f.size, "Crossbar dimension N")
      ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  cmd->add_option("--node", f.node, "Technology node in nm")
      ->check(CLI::IsMember({90, 65, 45, 32}));
}

int report(xbl_status status, const char* summary) {
  if (status == XBL_OK) {
    std::cout << summary << '\n';
    return 0;
  }
  std::cerr << "xbarlife: error: " << xbl_last_error() << '\n';
  return static_cast<int>(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Crossbar read-endurance analysis for neuromorphic hardware"};
  app.set_version_flag("--version", xbl_version());
  app.require_subcommand(1);
  app.footer(std::string("Environment:\n  ") + kConfigEnv +
             "  configuration used when --config is absent\n\n"
             "Exit codes: 0 ok, 2 usage or validation, 3 solver "
             "non-convergence, 4 I/O");
  Flags f;

  auto* current = app.add_subcommand(
      "current-map", "Cell currents with all wordlines spiking");
  common(current, f);
  array_flags(current, f);
  current->add_option("--state", f.state, "Uniform cell state")
      ->check(CLI::IsMember({"hrs", "lrs1", "lrs2", "lrs3"}));
  current->add_option("--v-spike", f.v_spike,
                      "Spike voltage in V (default: calibrated)")
      ->check(CLI::PositiveNumber);

  auto* endurance = app.add_subcommand(
      "endurance-map", "Per-cell read endurance in spike pulses");
  common(endurance, f);
  array_flags(endurance, f);
  endurance->add_option("--state", f.state, "Uniform cell state (default hrs)")
      ->check(CLI::IsMember({"hrs", "lrs1", "lrs2", "lrs3"}));
  endurance->add_option("--pulse-width", f.pulse_width, "Spike width in s")
      ->check(CLI::PositiveNumber);
  endurance->add_option("--v-spike", f.v_spike, "Stress voltage in V")
      ->check(CLI::PositiveNumber);

  auto* disparity = app.add_subcommand(
      "disparity-sweep", "Shortest vs longest path current over sizes");
  common(disparity, f);
  disparity->add_option("--sizes", f.sizes, "Crossbar sizes")
      ->delimiter(',');
  disparity->add_option("--node", f.node, "Technology node in nm")
      ->check(CLI::IsMember({90, 65, 45, 32}));
  disparity->add_option("--mode", f.mode, "Read mode")
      ->check(CLI::IsMember({"isolated", "full"}));

  auto* cost = app.add_subcommand("cost-sweep", "Normalized cost per bit");
  common(cost, f);
  cost->add_option("--sizes", f.sizes, "Crossbar sizes")->delimiter(',');
  cost->add_option("--nodes", f.nodes, "Technology nodes in nm")
      ->delimiter(',');

  auto* optimize = app.add_subcommand(
      "optimize", "Endurance-aware synapse placement");
  common(optimize, f);
  array_flags(optimize, f);
  auto* wl = optimize->add_option("--workload", f.workload,
                                  "Clustered workload JSON");
  optimize->add_option("--generate", f.generate,
                       "Synthetic spikes: zipf(s[,kmax]), uniform(lo,hi), "
                       "lognormal(mu,sigma)")
      ->excludes(wl);
  optimize->add_option("--synapses", f.synapses,
                       "Synthetic synapse count (default N*N)");
  optimize->add_option("--seed", f.seed, "Generator / random seed");
  optimize->add_option("--pulse-width", f.pulse_width, "Spike width in s")
      ->check(CLI::PositiveNumber);
  optimize->add_flag("--local-search", f.local_search,
                     "Run the swap refinement pass");

  auto* calibrate = app.add_subcommand(
      "calibrate", "Fit the per-segment resistance to the target disparity");
  common(calibrate, f);
  calibrate->add_option("--node", f.node, "Technology node in nm")
      ->check(CLI::IsMember({90, 65, 45, 32}));
  calibrate->add_option("--size", f.size, "Crossbar dimension N")
      ->check(CLI::Range(std::size_t{2}, std::size_t{4096}));
  calibrate->add_option("--mode", f.mode, "Read mode")
      ->check(CLI::IsMember({"isolated", "full"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : XBL_ERR_INVALID;
  }

  CLI::App* cmd = app.get_subcommands().front();
  if (f.config.empty()) {
    if (const char* env = std::getenv(kConfigEnv); env && *env)
      f.config = env;
  }
  if (f.config.empty()) {
    std::cerr << "xbarlife: error: no configuration; pass --config or set "
              << kConfigEnv << "\n\n"
              << cmd->help();
    return XBL_ERR_INVALID;
  }

  xbl_config* config = nullptr;
  if (xbl_status s = xbl_config_load(f.config.c_str(), &config); s != XBL_OK) {
    std::cerr << "xbarlife: error: " << xbl_last_error() << "\n\n"
              << cmd->help();
    return static_cast<int>(s);
  }

  xbl_run_options o;
  xbl_run_options_init(&o);
  o.config_path = f.config.c_str();
  o.out_dir = f.out.c_str();
  o.size = f.size;
  o.node = f.node;
  o.state = state_code(f.state);
  o.pulse_width = f.pulse_width;
  o.v_spike = f.v_spike;
  o.mode = mode_code(f.mode);
  o.seed = f.seed;
  o.jobs = f.jobs;
  o.sizes = f.sizes.empty() ? nullptr : f.sizes.data();
  o.sizes_count = f.sizes.size();
  o.nodes = f.nodes.empty() ? nullptr : f.nodes.data();
  o.nodes_count = f.nodes.size();
  o.workload_path = f.workload.empty() ? nullptr : f.workload.c_str();
  o.generator = f.generate.empty() ? nullptr : f.generate.c_str();
  o.synapses = f.synapses;
  o.local_search = f.local_search ? 1 : 0;

  char summary[1024] = {0};
  const xbl_status status =
      xbl_run(cmd->get_name().c_str(), config, &o, summary, sizeof summary);
  xbl_config_free(config);
  return report(status, summary);
}
