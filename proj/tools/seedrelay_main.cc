// Copyright 2026 The Seedrelay Authors
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


// seedrelay: multi-hop seed-sample collection simulator.
//
//   seedrelay [global flags] run [key=value ...]
//   seedrelay [global flags] sweep --axis M --values 1,2,3 --seeds 200
//   seedrelay [global flags] export-seeds --out seeds.bin
//   seedrelay [global flags] mds seeds.bin

#include <iostream>

#include "CLI11.hpp"
#include "seedrelay/commands.h"
#include "seedrelay/config.h"

int main(int argc, char** argv) {
  using seedrelay::GlobalOptions;
  GlobalOptions g;
  uint64_t seed = 0;

  CLI::App app{"Multi-hop seed-sample collection simulator"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand
  app.option_defaults()->always_capture_default();
  app.add_option("--config", g.config_path, "Config file (key = value sections)")
      ->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Master seed");
  app.add_option("--out", g.out, "Output path (stdout when omitted)");
  app.add_option("--jobs", g.jobs, "Worker threads for sweeps")
      ->check(CLI::PositiveNumber);
  app.add_option("--topology-file", g.topology_file,
                 "Fixed placement and routes instead of random ones");
  auto* mnist = app.add_option("--mnist-dir", g.mnist_dir,
                               "Directory with train-images/labels IDX files");
  app.add_flag("--synthetic", g.synthetic, "Use the synthetic digit pool")
      ->excludes(mnist);

  std::string footer = "Config keys:";
  for (const std::string& k : seedrelay::ConfigKeys()) footer += " " + k;
  app.footer(footer);

  auto* run = app.add_subcommand("run", "One collection round, JSON report");
  run->add_option("overrides", g.overrides, "key=value overrides");

  seedrelay::SweepRequest sweep_req;
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep, CSV table");
  sweep->add_option("--axis", sweep_req.axis, "rho | M | l | tau | tx_power")
      ->required();
  sweep->add_option("--values", sweep_req.values, "Comma-separated values")
      ->required();
  sweep->add_option("--seeds", sweep_req.seeds, "Runs per value");
  sweep->add_option("overrides", g.overrides, "key=value overrides");

  auto* exp = app.add_subcommand("export-seeds",
                                 "Write delivered seed samples and JSON sidecar");
  exp->add_option("overrides", g.overrides, "key=value overrides");

  std::string mds_input;
  auto* mds = app.add_subcommand("mds", "2-D embedding of a seed export, CSV");
  mds->add_option("input", mds_input, "Seed-export file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return seedrelay::kExitConfig;
  }
  if (*seed_opt) g.seed = seed;

  if (*run) return seedrelay::CmdRun(g, std::cout, std::cerr);
  if (*sweep) return seedrelay::CmdSweep(g, sweep_req, std::cout, std::cerr);
  if (*exp) return seedrelay::CmdExportSeeds(g, std::cout, std::cerr);
  if (*mds) return seedrelay::CmdMds(g, mds_input, std::cout, std::cerr);
  return seedrelay::kExitConfig;
}
