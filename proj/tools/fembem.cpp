// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "fembem/common.hpp"
#include "fembem/experiment.hpp"

int main(int argc, char** argv) {
  CLI::App app{"2D adaptive FEM-BEM coupling workbench"};

  std::string experiment;
  std::string precond = "mlas";
  std::string coupling = "jn";
  fembem::ExperimentConfig cfg;

  app.add_option("--experiment", experiment,
                 "Experiment driver: weaksing | jn | sym_vs_jn | bmc | artificial")
      ->required();
  app.add_option("--levels", cfg.levels, "Number of refinement levels (default per experiment)");
  app.add_option("--theta", cfg.theta, "Doerfler bulk parameter")->check(CLI::Range(0.0, 1.0));
  app.add_option("--tol", cfg.tol, "GMRES relative tolerance (default per experiment)");
  app.add_option("--precond", precond, "Preconditioner: mlas | hb | diag | none");
  app.add_option("--coupling", coupling, "Coupling: jn | sym | bmc");
  app.add_option("--stabilized", cfg.stabilized, "Solve the stabilized system (true/false)");
  app.add_option("--out", cfg.out, "Output CSV path (stdout when omitted)");
  app.add_option("--mesh", cfg.mesh_path, "Optional external initial mesh file");
  app.add_option("--max-dofs", cfg.max_dofs, "Cap for dense spectral computations");
  app.add_option("--quad-order", cfg.quad.gauss_order, "Outer Gauss order")
      ->check(CLI::Range(2, 64));

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.experiment = experiment;
    cfg.precond = fembem::parse_precond(precond);
    if (coupling == "jn")
      cfg.coupling = fembem::CouplingKind::johnson_nedelec;
    else if (coupling == "sym")
      cfg.coupling = fembem::CouplingKind::symmetric;
    else if (coupling == "bmc")
      cfg.coupling = fembem::CouplingKind::bielak_maccamy;
    else
      throw fembem::ConfigError("unknown coupling: " + coupling);

    fembem::run_experiment(cfg);
  } catch (const fembem::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const fembem::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
