// Copyright 2026 The ioncycle Authors
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

// ioncycle: batch runner for engine and refrigerator cycle simulations.
//
//   ioncycle run      --preset fig1c --out out/fig1c
//   ioncycle sweep    --spec sweep.json
//   ioncycle tomo     --scan scan.csv --prior distribution.csv --out out/fit
//   ioncycle validate --spec experiment.json
//
// Every flag can also come from the environment: IONCYCLE_SPEC, IONCYCLE_PRESET, IONCYCLE_OUT, IONCYCLE_SEED, ...

#include <iostream>

#include <CLI11.hpp>

#include "app/commands.hpp"
#include "app/presets.hpp"

using namespace ioncycle::app;

namespace {

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--spec", o.spec, "experiment spec (JSON); a run.json is accepted too")->envname("IONCYCLE_SPEC");
  cmd->add_option("--preset", o.preset, "named preset")
      ->envname("IONCYCLE_PRESET")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--out", o.out, "output directory")->envname("IONCYCLE_OUT");
  cmd->add_option("--seed", o.seed, "random seed (overrides the spec)")->envname("IONCYCLE_SEED");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion engine/refrigerator cycle simulator"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOptions run_opts, sweep_opts, validate_opts;
  TomoOptions tomo_opts;

  auto* run = app.add_subcommand("run", "simulate one experiment and write its artifacts");
  add_common(run, run_opts);
  auto* sweep = app.add_subcommand("sweep", "one run per point of the spec's parameter grid, plus summary.csv");
  add_common(sweep, sweep_opts);
  auto* validate = app.add_subcommand("validate", "check a spec and print it with defaults filled in");
  add_common(validate, validate_opts);

  auto* tomo = app.add_subcommand("tomo", "fit a Rabi scan to a phonon distribution");
  tomo->add_option("--scan", tomo_opts.scan, "scan CSV (time_s, p_S, sigma_p, shots)")->required()->envname("IONCYCLE_SCAN");
  tomo->add_option("--prior", tomo_opts.prior, "prior distribution CSV (n, p_n, sigma)")->required()->envname("IONCYCLE_PRIOR");
  tomo->add_option("--out", tomo_opts.out, "output directory")->envname("IONCYCLE_OUT");
  tomo->add_option("--spec", tomo_opts.spec, "spec whose calibration is used")->envname("IONCYCLE_SPEC");
  tomo->add_option("--n-levels", tomo_opts.n_levels, "levels fitted (default 14)")->envname("IONCYCLE_N_LEVELS");
  tomo->add_option("--box", tomo_opts.box_halfwidth, "box half-width around the prior (default 0.05)")->envname("IONCYCLE_BOX");
  tomo->add_option("--gamma-base", tomo_opts.gamma_base, "decay rate gamma_base in 1/s (default 318)")
      ->envname("IONCYCLE_GAMMA_BASE");
  tomo->add_option("--grid-points", tomo_opts.grid_points, "expected number of scan points");
  tomo->add_option("--grid-spacing", tomo_opts.grid_spacing, "expected scan spacing in s");
  tomo->add_flag("--reference-grid", tomo_opts.reference_grid, "expect the 200-point, 600 us reference grid");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << Json({{"error", "invalid-argument"}, {"message", e.what()}}).dump() << "\n";
    return kValidation;
  }

  if (*run) return cmd_run(run_opts, std::cout, std::cerr);
  if (*sweep) return cmd_sweep(sweep_opts, std::cout, std::cerr);
  if (*validate) return cmd_validate(validate_opts, std::cout, std::cerr);
  return cmd_tomo(tomo_opts, std::cout, std::cerr);
}
