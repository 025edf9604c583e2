// Copyright 2026 The pvqc Authors
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

#include <exception>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

using pvqc::cli::ConfigSource;

void add_config_options(CLI::App* cmd, ConfigSource& src) {
  cmd->add_option("-c,--config", src.path, "Flat key = value config file")->check(CLI::ExistingFile);
  cmd->add_option("-s,--set", src.overrides, "Override a config key, e.g. --set samples=50 (repeatable)")
      ->take_all();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Postselected photonic circuit experiments: Fock sectors, g-purity and gradient-variance sweeps"};
  app.require_subcommand(1);
  app.footer(
      "Exit codes: 0 success, 1 check failure, 2 usage or configuration error.\n"
      "PVQC_WORKERS sets the sweep worker count when --workers is not given.");

  int basis_m = 0, basis_n = 0;
  std::size_t basis_limit = 20;
  auto* basis = app.add_subcommand("basis", "Print the n-photon sector size over m modes and its states");
  basis->add_option("-m,--modes", basis_m, "Number of optical modes (>= 1)")->required();
  basis->add_option("-n,--photons", basis_n, "Number of photons (>= 0)")->required();
  basis->add_option("--list-limit", basis_limit, "List every state when the sector has at most this many")
      ->capture_default_str();

  auto* hom = app.add_subcommand("hom", "Hong-Ou-Mandel check on a balanced two-mode mesh (exit 1 on deviation)");

  ConfigSource purity_src;
  auto* purity = app.add_subcommand(
      "purity",
      "Write a g-purity CSV (regime,m,n,subspace_dim,purity).\n"
      "Keys: regimes, m (list), n (list, default m/2),\n"
      "observable (first_outcome|number0|success, default first_outcome),\n"
      "algebra (u|su, default u), output (default stdout)");
  add_config_options(purity, purity_src);

  ConfigSource sweep_src;
  std::optional<int> sweep_workers;
  auto* sweep = app.add_subcommand(
      "sweep",
      "Estimate gradient variance over a grid of cells and write a results CSV.\n"
      "Keys: regimes, inits, N_min, N_max, mode_rule (footprint|sweep), m_max, samples, seed,\n"
      "epsilon, output (required), max_dim, workers");
  add_config_options(sweep, sweep_src);
  sweep->add_option("-w,--workers", sweep_workers, "Worker threads; overrides PVQC_WORKERS and the config")
      ->check(CLI::PositiveNumber);

  std::string fit_input, fit_output;
  std::vector<std::string> fit_models;
  auto* fit = app.add_subcommand("fit", "Fit scaling laws to a results CSV and compare them by AIC");
  fit->add_option("results", fit_input, "Results CSV written by 'sweep'")->required();
  fit->add_option("-m,--model", fit_models, "exponential, power or cubic_log (repeatable; default all)");
  fit->add_option("-o,--output", fit_output, "Report file (default stdout)");

  ConfigSource grad_src;
  auto* gradcheck = app.add_subcommand(
      "gradcheck",
      "Compare analytic loss gradients with central finite differences (exit 1 on failure).\n"
      "Keys: configs, seed, step, tolerance, abs_tolerance");
  add_config_options(gradcheck, grad_src);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? pvqc::cli::kExitOk : pvqc::cli::kExitUsage;
  }

  try {
    if (*basis) return pvqc::cli::cmd_basis(basis_m, basis_n, basis_limit, std::cout);
    if (*hom) return pvqc::cli::cmd_hom(std::cout);
    if (*purity) return pvqc::cli::cmd_purity(purity_src, std::cout);
    if (*sweep) return pvqc::cli::cmd_sweep(sweep_src, sweep_workers, std::cout);
    if (*fit) return pvqc::cli::cmd_fit(fit_input, fit_models, fit_output, std::cout);
    if (*gradcheck) return pvqc::cli::cmd_gradcheck(grad_src, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return pvqc::cli::kExitUsage;
  }
  return pvqc::cli::kExitUsage;
}
