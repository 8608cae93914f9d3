// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fembem/adapt.hpp"
#include "fembem/coupling.hpp"
#include "fembem/gmres.hpp"
#include "fembem/hierarchy.hpp"
#include "fembem/precond.hpp"
#include "fembem/problems.hpp"
#include "fembem/spectral.hpp"

namespace fembem {

/// One CSV row. Absent measurements stay empty in the output, never zero.
struct ExperimentRecord {
  int level = 0;
  int nT_omega = 0;
  int M = 0;
  double h_max = 0.0;
  double h_min = 0.0;
  std::optional<double> cond2_est;
  std::optional<double> cond_mlas;
  std::optional<double> cond_hb;
  std::optional<double> cond_diag;
  std::optional<int> iters_stab;
  std::optional<int> iters_nostab;
  std::optional<double> relres;
};

extern const char* const kCsvHeader;

struct CsvSection {
  std::string comment;  ///< emitted as "# section <comment>" when non-empty
  std::vector<ExperimentRecord> records;
};

void write_csv(std::ostream& os, const std::vector<std::string>& metadata,
               const std::vector<CsvSection>& sections);

enum class PrecondChoice { mlas, hb, diag, none };
PrecondChoice parse_precond(const std::string& name);

enum class MarkingStrategy { doerfler, uniform, corner };

struct ExperimentConfig {
  std::string experiment;  ///< weaksing | jn | sym_vs_jn | bmc | artificial
  int levels = -1;         ///< -1 picks the per-experiment default
  double theta = 0.5;
  double tol = -1.0;  ///< GMRES tolerance; -1 picks the per-experiment default
  PrecondChoice precond = PrecondChoice::mlas;
  CouplingKind coupling = CouplingKind::johnson_nedelec;
  bool stabilized = true;
  std::string out;        ///< CSV path; empty writes to stdout
  std::string mesh_path;  ///< optional external initial mesh
  int max_dofs = 5000;    ///< dense spectral work skipped above this
  QuadratureConfig quad;
};

/// Weakly-singular experiment: adaptive single-layer solves with
/// condition-number tracking and per-level operator-identity checks.
struct WeaksingLevel {
  ExperimentRecord record;
  double maue_rel_err = 0.0;       ///< local Haar congruence vs entrywise A_W
  double hyp_kernel_rel_err = 0.0; ///< ||A_W 1|| relative
  double k_identity_rel_err = 0.0; ///< ||(M/2 - K)1 - lengths|| relative
  double lambda_min_mlas = 0.0, lambda_max_mlas = 0.0;
  double alpha_bound = 0.0, beta_bound = 0.0;
  double total_estimator = 0.0;
};
struct WeaksingRun {
  std::vector<WeaksingLevel> levels;
  MeshHierarchy hierarchy;
};
WeaksingRun run_weaksing(int num_levels, double theta, int max_dofs,
                         const QuadratureConfig& quad, const std::string& mesh_path = {});

/// Coupled transmission-problem experiment (one coupling kind).
struct CoupledLevel {
  ExperimentRecord record;
  int dofs = 0;
  double lambda_min_fem = 0.0, lambda_max_fem = 0.0;  ///< pencil (A_Acal, P_Acal)
  double lambda_min_slp = 0.0, lambda_max_slp = 0.0;  ///< pencil (A_V, P_V)
  double agree_max_rel_diff = -1.0;  ///< stabilized vs non-stabilized dense solves
};
struct CoupledRun {
  std::vector<CoupledLevel> levels;
  MeshHierarchy hierarchy;
};

struct CoupledRunOptions {
  int num_levels = 12;
  double theta = 0.5;
  double gmres_tol = 1e-6;
  CouplingKind kind = CouplingKind::johnson_nedelec;
  bool stabilized = true;  ///< false solves only the non-stabilized system
  PrecondChoice precond = PrecondChoice::mlas;
  MarkingStrategy marking = MarkingStrategy::doerfler;
  bool prolongate_guess = false;
  bool run_nostab = true;        ///< also solve the non-stabilized system
  bool with_spectra = true;      ///< dense condition numbers / pencils
  bool with_agreement = false;   ///< dense stabilized vs non-stabilized solves
  int max_dofs = 5000;
  QuadratureConfig quad;
  std::string mesh_path;  ///< optional external initial mesh
};
CoupledRun run_coupled(const CoupledRunOptions& opts);

/// Iteration-count comparison of the symmetric vs Johnson-Nedelec coupling
/// with prolongated initial guesses (adaptivity steered by the symmetric
/// solution).
struct SymVsJnRun {
  std::vector<ExperimentRecord> jn;
  std::vector<ExperimentRecord> sym;
  MeshHierarchy hierarchy;
};
SymVsJnRun run_sym_vs_jn(int num_levels, double theta, double tol,
                         const QuadratureConfig& quad, const std::string& mesh_path = {});

/// Artificial corner refinement; condition numbers only.
CoupledRun run_artificial(int num_levels, int max_dofs, const QuadratureConfig& quad);

/// Runs the named experiment and writes its CSV; throws ConfigError /
/// NumericalError on invalid configuration resp. numerical failure.
void run_experiment(const ExperimentConfig& cfg);

}  // namespace fembem
