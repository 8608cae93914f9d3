// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "fembem/common.hpp"
#include "fembem/kernels.hpp"

namespace fembem {

const char* const kCsvHeader =
    "level,nT_omega,M,h_max,h_min,cond2_est,cond_mlas,cond_hb,cond_diag,"
    "iters_stab,iters_nostab,relres";

namespace {

std::string opt_str(const std::optional<double>& v) {
  if (!v) return "";
  std::ostringstream os;
  os.precision(12);
  os << *v;
  return os.str();
}

std::string opt_str(const std::optional<int>& v) { return v ? std::to_string(*v) : ""; }

// P0 mass against boundary hats, in boundary-node ids (M x nB).
Eigen::SparseMatrix<double> mass_bnd(const BoundaryMesh& bm) {
  std::vector<Eigen::Triplet<double>> trips;
  for (int s = 0; s < bm.num_segments(); ++s) {
    const double half = 0.5 * bm.length(s);
    trips.emplace_back(s, bm.segments[s].src, half);
    trips.emplace_back(s, bm.segments[s].dst, half);
  }
  Eigen::SparseMatrix<double> out(bm.num_segments(), bm.num_nodes());
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::VectorXd coupled_diag(const GalerkinBlocks& g, const Eigen::VectorXd& S) {
  Eigen::VectorXd d(g.N + g.M);
  d.head(g.N) = g.A_fem.diagonal();
  d.tail(g.M) = g.A_slp.diagonal();
  d += S.cwiseProduct(S);
  return d;
}

struct LevelMarks {
  std::vector<int> vol, bnd;
};

LevelMarks pick_marks(MarkingStrategy strategy, const VolumeMesh& mesh,
                      const BoundaryMesh& bmesh, const IndicatorField& ind, double theta) {
  LevelMarks m;
  switch (strategy) {
    case MarkingStrategy::doerfler: {
      auto [v, b] = mark_doerfler_combined(ind, theta);
      m.vol = std::move(v);
      m.bnd = std::move(b);
      break;
    }
    case MarkingStrategy::uniform:
      m.vol.resize(mesh.num_triangles());
      for (size_t t = 0; t < m.vol.size(); ++t) m.vol[t] = static_cast<int>(t);
      break;
    case MarkingStrategy::corner: {
      auto [v, b] = mark_corner(mesh, bmesh);
      m.vol = std::move(v);
      m.bnd = std::move(b);
      break;
    }
  }
  return m;
}

PreconditionerHandle make_coupled_precond(PrecondChoice choice, const MeshHierarchy& h,
                                          const GalerkinBlocks& g, const MaterialTensor& A,
                                          CouplingKind kind, const QuadratureConfig& quad) {
  const bool hyp_diag = kind == CouplingKind::symmetric;
  switch (choice) {
    case PrecondChoice::mlas:
      return compose_block(
          build_mlas_fem(h, A, quad, MultilevelKind::local_multilevel, hyp_diag),
          build_mlas_slp(h, g.A_slp, quad));
    case PrecondChoice::hb:
      return compose_block(build_hb_fem(h, A, quad, hyp_diag), build_hb_slp(h, g.A_slp, quad));
    case PrecondChoice::diag:
      return build_diag(coupled_diag(g, kind == CouplingKind::bielak_maccamy ? g.S_bmc : g.S_jn));
    case PrecondChoice::none:
      return identity_precond(g.N + g.M);
  }
  throw ConfigError("unknown preconditioner choice");
}

Eigen::MatrixXd dense_pform_fem(const GalerkinBlocks& g) {
  Eigen::MatrixXd A = Eigen::MatrixXd(g.A_fem);
  const Eigen::VectorXd s = g.S_jn.head(g.N);
  A += s * s.transpose();
  return A;
}

MeshHierarchy initial_hierarchy(const std::string& mesh_path) {
  if (mesh_path.empty()) return MeshHierarchy::from_initial(lshape_initial_mesh());
  VolumeMesh mesh;
  BoundaryMesh bmesh;
  read_mesh_file(mesh_path, mesh, bmesh);
  return MeshHierarchy::from_initial(std::move(mesh));
}

}  // namespace

void write_csv(std::ostream& os, const std::vector<std::string>& metadata,
               const std::vector<CsvSection>& sections) {
  for (const std::string& m : metadata) os << "# " << m << "\n";
  os << kCsvHeader << "\n";
  for (const CsvSection& sec : sections) {
    if (!sec.comment.empty()) os << "# section " << sec.comment << "\n";
    for (const ExperimentRecord& r : sec.records) {
      std::ostringstream row;
      row.precision(12);
      row << r.level << "," << r.nT_omega << "," << r.M << "," << r.h_max << "," << r.h_min
          << "," << opt_str(r.cond2_est) << "," << opt_str(r.cond_mlas) << ","
          << opt_str(r.cond_hb) << "," << opt_str(r.cond_diag) << "," << opt_str(r.iters_stab)
          << "," << opt_str(r.iters_nostab) << "," << opt_str(r.relres);
      os << row.str() << "\n";
    }
  }
}

PrecondChoice parse_precond(const std::string& name) {
  if (name == "mlas") return PrecondChoice::mlas;
  if (name == "hb") return PrecondChoice::hb;
  if (name == "diag") return PrecondChoice::diag;
  if (name == "none") return PrecondChoice::none;
  throw ConfigError("unknown preconditioner: " + name);
}

WeaksingRun run_weaksing(int num_levels, double theta, int max_dofs,
                         const QuadratureConfig& quad, const std::string& mesh_path) {
  WeaksingRun run{.levels = {}, .hierarchy = initial_hierarchy(mesh_path)};
  const ProblemData problem = problem_weaksing();

  for (int level = 0; level <= num_levels; ++level) {
    const BoundaryMesh& bm = run.hierarchy.boundary(run.hierarchy.finest());
    const int M = bm.num_segments();
    WeaksingLevel lv;
    lv.record.level = level;
    lv.record.nT_omega = run.hierarchy.volume(run.hierarchy.finest()).num_triangles();
    lv.record.M = M;
    lv.record.h_max = bm.h_max();
    lv.record.h_min = bm.h_min();

    const Eigen::MatrixXd V = assemble_slp(bm, quad);
    const Eigen::MatrixXd K = assemble_dlp(bm, quad);
    const Eigen::SparseMatrix<double> Mb = mass_bnd(bm);

    Eigen::VectorXd g_nodal(bm.num_nodes());
    for (int b = 0; b < bm.num_nodes(); ++b) g_nodal[b] = problem.u0(bm.nodes[b]);
    const Eigen::VectorXd rhs = 0.5 * (Mb * g_nodal) + K * g_nodal;
    const Eigen::VectorXd phi = Eigen::LLT<Eigen::MatrixXd>(V).solve(rhs);

    // Operator identities: (M/2 - K) 1 = segment lengths, W 1 = 0.
    Eigen::VectorXd lengths(M);
    for (int s = 0; s < M; ++s) lengths[s] = bm.length(s);
    const Eigen::VectorXd ones_b = Eigen::VectorXd::Ones(bm.num_nodes());
    lv.k_identity_rel_err =
        ((0.5 * (Mb * ones_b) - K * ones_b) - lengths).cwiseAbs().maxCoeff() /
        lengths.maxCoeff();
    const Eigen::MatrixXd W = assemble_hyp(bm, quad);
    lv.hyp_kernel_rel_err =
        (W * Eigen::VectorXd::Ones(W.cols())).cwiseAbs().maxCoeff() /
        W.cwiseAbs().maxCoeff();

    // Maue congruence on the level increment nodes.
    const auto& inc = run.hierarchy.increment(run.hierarchy.finest()).bnd_nodes;
    if (!inc.empty()) {
      const Eigen::SparseMatrix<double> H = haar_map_local(bm, inc);
      const Eigen::MatrixXd congr = Eigen::MatrixXd(H.transpose()) * V * Eigen::MatrixXd(H);
      const Eigen::MatrixXd direct = assemble_hyp_local(bm, inc, quad);
      lv.maue_rel_err =
          (congr - direct).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff();
    }

    if (M <= max_dofs) {
      lv.record.cond2_est = cond2_estimate(V);
      const PreconditionerHandle P = build_mlas_slp(run.hierarchy, V, quad);
      const SpectralReport rep = cond_precond_sym(P, V);
      lv.record.cond_mlas = rep.cond;
      lv.lambda_min_mlas = rep.lambda_min;
      lv.lambda_max_mlas = rep.lambda_max;
      lv.record.cond_diag = cond_precond_sym(build_diag(V.diagonal()), V).cond;
    }
    const GrowthBounds gb = unpreconditioned_growth_bounds(M, bm.h_max(), bm.h_min());
    lv.alpha_bound = gb.alpha;
    lv.beta_bound = gb.beta;

    const IndicatorField ind = estimate_weaksing(bm, phi, g_nodal, quad);
    lv.total_estimator = std::sqrt(ind.total());
    run.levels.push_back(std::move(lv));

    if (level < num_levels) {
      const std::vector<int> marked = mark_doerfler(ind.boundary, theta);
      run.hierarchy.extend({}, marked);
    }
  }
  return run;
}

CoupledRun run_coupled(const CoupledRunOptions& opts) {
  CoupledRun run{.levels = {}, .hierarchy = initial_hierarchy(opts.mesh_path)};
  const ProblemData problem = problem_transmission();
  const bool with_hyp = opts.kind == CouplingKind::symmetric;

  Eigen::VectorXd prev_u, prev_phi;
  for (int level = 0; level <= opts.num_levels; ++level) {
    const MeshHierarchy& h = run.hierarchy;
    const VolumeMesh& mesh = h.volume(h.finest());
    const BoundaryMesh& bm = h.boundary(h.finest());
    auto blocks = std::make_shared<GalerkinBlocks>(
        assemble_blocks(mesh, bm, problem.A, opts.quad, with_hyp));

    CoupledLevel lv;
    lv.dofs = blocks->N + blocks->M;
    lv.record.level = level;
    lv.record.nT_omega = mesh.num_triangles();
    lv.record.M = blocks->M;
    lv.record.h_max = bm.h_max();
    lv.record.h_min = bm.h_min();

    const RhsData rhs_stab =
        assemble_rhs(problem, mesh, bm, *blocks, opts.kind, true, opts.quad);
    const PreconditionerHandle P =
        make_coupled_precond(opts.precond, h, *blocks, problem.A, opts.kind, opts.quad);

    Eigen::VectorXd U0 = Eigen::VectorXd::Zero(lv.dofs);
    if (opts.prolongate_guess && level > 0) {
      U0.head(blocks->N) = h.prolongate_p1_once(h.finest() - 1, prev_u);
      U0.tail(blocks->M) = h.prolongate_p0_once(h.finest() - 1, prev_phi);
    }

    GmresConfig gcfg;
    gcfg.tol = opts.gmres_tol;
    Eigen::VectorXd primary_solution;
    if (opts.stabilized) {
      BlockSystem sys_stab = build_system(opts.kind, true, blocks, rhs_stab.F);
      const GmresReport rep = gmres_pfree(
          [&](const Eigen::VectorXd& v) { return sys_stab.apply(v); },
          [&](const Eigen::VectorXd& v) { return P.apply_inverse(v); }, rhs_stab.F, U0, gcfg);
      if (rep.reason == GmresStop::failure)
        throw NumericalError("run_coupled: GMRES failure on the stabilized system");
      lv.record.iters_stab = rep.iterations;
      lv.record.relres = rep.final_relres();
      primary_solution = rep.solution;
    }

    RhsData rhs_nostab;
    if (opts.run_nostab || !opts.stabilized || opts.with_agreement)
      rhs_nostab = assemble_rhs(problem, mesh, bm, *blocks, opts.kind, false, opts.quad);
    if (opts.run_nostab || !opts.stabilized) {
      BlockSystem sys_ns = build_system(opts.kind, false, blocks, rhs_nostab.F);
      const GmresReport rep_ns = gmres_pfree(
          [&](const Eigen::VectorXd& v) { return sys_ns.apply(v); },
          [&](const Eigen::VectorXd& v) { return P.apply_inverse(v); }, rhs_nostab.F, U0, gcfg);
      if (rep_ns.reason == GmresStop::failure)
        throw NumericalError("run_coupled: GMRES failure on the non-stabilized system");
      lv.record.iters_nostab = rep_ns.iterations;
      if (!opts.stabilized) {
        lv.record.relres = rep_ns.final_relres();
        primary_solution = rep_ns.solution;
      }
    }

    if (opts.with_spectra && lv.dofs <= opts.max_dofs &&
        opts.kind != CouplingKind::symmetric) {
      BlockSystem stab_full = build_system(opts.kind, true, blocks, rhs_stab.F);
      lv.record.cond2_est = cond2_estimate(stab_full.densify());

      const Eigen::MatrixXd A_fem_dense = dense_pform_fem(*blocks);
      const PreconditionerHandle P_fem = build_mlas_fem(h, problem.A, opts.quad);
      const PreconditionerHandle P_slp = build_mlas_slp(h, blocks->A_slp, opts.quad);
      const SpectralReport rep_fem = cond_precond_sym(P_fem, A_fem_dense);
      const SpectralReport rep_slp = cond_precond_sym(P_slp, blocks->A_slp);
      lv.lambda_min_fem = rep_fem.lambda_min;
      lv.lambda_max_fem = rep_fem.lambda_max;
      lv.lambda_min_slp = rep_slp.lambda_min;
      lv.lambda_max_slp = rep_slp.lambda_max;
      // Block-diagonal pencil: extremes combine the two diagonal pencils.
      lv.record.cond_mlas = std::max(rep_fem.lambda_max, rep_slp.lambda_max) /
                            std::min(rep_fem.lambda_min, rep_slp.lambda_min);

      const PreconditionerHandle Ph_fem = build_hb_fem(h, problem.A, opts.quad);
      const PreconditionerHandle Ph_slp = build_hb_slp(h, blocks->A_slp, opts.quad);
      const SpectralReport hb_fem = cond_precond_sym(Ph_fem, A_fem_dense);
      const SpectralReport hb_slp = cond_precond_sym(Ph_slp, blocks->A_slp);
      lv.record.cond_hb = std::max(hb_fem.lambda_max, hb_slp.lambda_max) /
                          std::min(hb_fem.lambda_min, hb_slp.lambda_min);
    }

    if (opts.with_agreement && lv.dofs <= 2000) {
      BlockSystem s1 = build_system(opts.kind, true, blocks, rhs_stab.F);
      BlockSystem s0 = build_system(opts.kind, false, blocks, rhs_nostab.F);
      const Eigen::VectorXd x1 = s1.densify().partialPivLu().solve(rhs_stab.F);
      const Eigen::VectorXd x0 = s0.densify().partialPivLu().solve(rhs_nostab.F);
      lv.agree_max_rel_diff = solutions_agree(x1, x0).max_rel_diff;
    }

    prev_u = primary_solution.head(blocks->N);
    prev_phi = primary_solution.tail(blocks->M);
    run.levels.push_back(std::move(lv));

    if (level < opts.num_levels) {
      IndicatorField ind;
      if (opts.marking == MarkingStrategy::doerfler)
        ind = estimate_coupling(mesh, bm, *blocks, problem, primary_solution, opts.quad,
                                opts.kind);
      const LevelMarks marks = pick_marks(opts.marking, mesh, bm, ind, opts.theta);
      run.hierarchy.extend(marks.vol, marks.bnd);
    }
  }
  return run;
}

SymVsJnRun run_sym_vs_jn(int num_levels, double theta, double tol,
                         const QuadratureConfig& quad, const std::string& mesh_path) {
  SymVsJnRun run{.jn = {}, .sym = {}, .hierarchy = initial_hierarchy(mesh_path)};
  const ProblemData problem = problem_transmission();

  Eigen::VectorXd prev_jn_u, prev_jn_phi, prev_sym_u, prev_sym_phi;
  for (int level = 0; level <= num_levels; ++level) {
    const MeshHierarchy& h = run.hierarchy;
    const VolumeMesh& mesh = h.volume(h.finest());
    const BoundaryMesh& bm = h.boundary(h.finest());
    auto blocks =
        std::make_shared<GalerkinBlocks>(assemble_blocks(mesh, bm, problem.A, quad, true));

    ExperimentRecord base;
    base.level = level;
    base.nT_omega = mesh.num_triangles();
    base.M = blocks->M;
    base.h_max = bm.h_max();
    base.h_min = bm.h_min();

    GmresConfig gcfg;
    gcfg.tol = tol;

    const PreconditionerHandle P_jn =
        make_coupled_precond(PrecondChoice::mlas, h, *blocks, problem.A,
                             CouplingKind::johnson_nedelec, quad);
    const PreconditionerHandle P_sym = make_coupled_precond(
        PrecondChoice::mlas, h, *blocks, problem.A, CouplingKind::symmetric, quad);

    const RhsData rhs_jn =
        assemble_rhs(problem, mesh, bm, *blocks, CouplingKind::johnson_nedelec, true, quad);
    const RhsData rhs_sym =
        assemble_rhs(problem, mesh, bm, *blocks, CouplingKind::symmetric, true, quad);
    BlockSystem sys_jn =
        build_system(CouplingKind::johnson_nedelec, true, blocks, rhs_jn.F);
    BlockSystem sys_sym = build_system(CouplingKind::symmetric, true, blocks, rhs_sym.F);

    Eigen::VectorXd U0_jn = Eigen::VectorXd::Zero(sys_jn.dim());
    Eigen::VectorXd U0_sym = Eigen::VectorXd::Zero(sys_sym.dim());
    if (level > 0) {
      U0_jn.head(blocks->N) = h.prolongate_p1_once(h.finest() - 1, prev_jn_u);
      U0_jn.tail(blocks->M) = h.prolongate_p0_once(h.finest() - 1, prev_jn_phi);
      U0_sym.head(blocks->N) = h.prolongate_p1_once(h.finest() - 1, prev_sym_u);
      U0_sym.tail(blocks->M) = h.prolongate_p0_once(h.finest() - 1, prev_sym_phi);
    }

    const GmresReport rep_jn = gmres_pfree(
        [&](const Eigen::VectorXd& v) { return sys_jn.apply(v); },
        [&](const Eigen::VectorXd& v) { return P_jn.apply_inverse(v); }, rhs_jn.F, U0_jn, gcfg);
    const GmresReport rep_sym = gmres_pfree(
        [&](const Eigen::VectorXd& v) { return sys_sym.apply(v); },
        [&](const Eigen::VectorXd& v) { return P_sym.apply_inverse(v); }, rhs_sym.F, U0_sym,
        gcfg);
    if (rep_jn.reason == GmresStop::failure || rep_sym.reason == GmresStop::failure)
      throw NumericalError("run_sym_vs_jn: GMRES failure");

    ExperimentRecord rec_jn = base;
    rec_jn.iters_stab = rep_jn.iterations;
    rec_jn.relres = rep_jn.final_relres();
    ExperimentRecord rec_sym = base;
    rec_sym.iters_stab = rep_sym.iterations;
    rec_sym.relres = rep_sym.final_relres();
    run.jn.push_back(rec_jn);
    run.sym.push_back(rec_sym);

    prev_jn_u = rep_jn.solution.head(blocks->N);
    prev_jn_phi = rep_jn.solution.tail(blocks->M);
    prev_sym_u = rep_sym.solution.head(blocks->N);
    prev_sym_phi = rep_sym.solution.tail(blocks->M);

    if (level < num_levels) {
      // Adaptivity is steered by the symmetric-coupling solution.
      const IndicatorField ind = estimate_coupling(mesh, bm, *blocks, problem,
                                                   rep_sym.solution, quad,
                                                   CouplingKind::symmetric);
      auto [mv, mb] = mark_doerfler_combined(ind, theta);
      run.hierarchy.extend(mv, mb);
    }
  }
  return run;
}

CoupledRun run_artificial(int num_levels, int max_dofs, const QuadratureConfig& quad) {
  CoupledRun run{.levels = {}, .hierarchy = initial_hierarchy({})};
  const ProblemData problem = problem_transmission();

  for (int level = 0; level <= num_levels; ++level) {
    const MeshHierarchy& h = run.hierarchy;
    const VolumeMesh& mesh = h.volume(h.finest());
    const BoundaryMesh& bm = h.boundary(h.finest());
    auto blocks =
        std::make_shared<GalerkinBlocks>(assemble_blocks(mesh, bm, problem.A, quad, false));

    CoupledLevel lv;
    lv.dofs = blocks->N + blocks->M;
    lv.record.level = level;
    lv.record.nT_omega = mesh.num_triangles();
    lv.record.M = blocks->M;
    lv.record.h_max = bm.h_max();
    lv.record.h_min = bm.h_min();

    if (lv.dofs <= max_dofs) {
      const RhsData rhs =
          assemble_rhs(problem, mesh, bm, *blocks, CouplingKind::johnson_nedelec, true, quad);
      BlockSystem sys = build_system(CouplingKind::johnson_nedelec, true, blocks, rhs.F);
      lv.record.cond2_est = cond2_estimate(sys.densify());

      const Eigen::MatrixXd A_fem_dense = dense_pform_fem(*blocks);
      const SpectralReport rf =
          cond_precond_sym(build_mlas_fem(h, problem.A, quad), A_fem_dense);
      const SpectralReport rs = cond_precond_sym(build_mlas_slp(h, blocks->A_slp, quad),
                                                 blocks->A_slp);
      lv.record.cond_mlas = std::max(rf.lambda_max, rs.lambda_max) /
                            std::min(rf.lambda_min, rs.lambda_min);
      lv.lambda_min_fem = rf.lambda_min;
      lv.lambda_max_fem = rf.lambda_max;
      lv.lambda_min_slp = rs.lambda_min;
      lv.lambda_max_slp = rs.lambda_max;

      const SpectralReport hf =
          cond_precond_sym(build_hb_fem(h, problem.A, quad), A_fem_dense);
      const SpectralReport hs = cond_precond_sym(build_hb_slp(h, blocks->A_slp, quad),
                                                 blocks->A_slp);
      lv.record.cond_hb = std::max(hf.lambda_max, hs.lambda_max) /
                          std::min(hf.lambda_min, hs.lambda_min);
    }
    run.levels.push_back(std::move(lv));

    if (level < num_levels) {
      auto [mv, mb] = mark_corner(mesh, bm);
      run.hierarchy.extend(mv, mb);
    }
  }
  return run;
}

namespace {

std::vector<std::string> standard_metadata(const ExperimentConfig& cfg, int levels, double tol) {
  const double a = lshape_half_width();
  std::vector<std::string> md;
  md.push_back("experiment=" + cfg.experiment);
  std::ostringstream geo;
  geo.precision(17);
  geo << "geometry=L-shape (-a,a)^2 minus [-a,0]^2, a=" << a << ", diam=2/3";
  md.push_back(geo.str());
  md.push_back("levels=" + std::to_string(levels));
  md.push_back("theta=" + std::to_string(cfg.theta));
  if (tol > 0) md.push_back("gmres_tol=" + std::to_string(tol));
  md.push_back("quad_order=" + std::to_string(cfg.quad.gauss_order));
  md.push_back("quad_rel_tol=" + std::to_string(cfg.quad.rel_tol));
  md.push_back("max_dofs=" + std::to_string(cfg.max_dofs));
  md.push_back("coupling=" + std::string(to_string(cfg.coupling)));
  md.push_back(std::string("stabilized=") + (cfg.stabilized ? "true" : "false"));
  md.push_back("seed=deterministic");
  return md;
}

std::vector<ExperimentRecord> collect(const std::vector<CoupledLevel>& levels) {
  std::vector<ExperimentRecord> out;
  for (const CoupledLevel& lv : levels) out.push_back(lv.record);
  return out;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
  std::vector<CsvSection> sections;
  int levels = cfg.levels;
  double tol = cfg.tol;

  if (cfg.experiment == "weaksing") {
    if (levels < 0) levels = 15;
    const WeaksingRun run =
        run_weaksing(levels, cfg.theta, cfg.max_dofs, cfg.quad, cfg.mesh_path);
    CsvSection sec;
    for (const WeaksingLevel& lv : run.levels) sec.records.push_back(lv.record);
    sections.push_back(std::move(sec));
  } else if (cfg.experiment == "jn" || cfg.experiment == "bmc") {
    if (levels < 0) levels = cfg.experiment == "jn" ? 12 : 10;
    if (tol < 0) tol = 1e-6;
    CoupledRunOptions opts;
    opts.num_levels = levels;
    opts.theta = cfg.theta;
    opts.gmres_tol = tol;
    opts.kind = cfg.experiment == "bmc" ? CouplingKind::bielak_maccamy : cfg.coupling;
    opts.stabilized = cfg.stabilized;
    opts.precond = cfg.precond;
    opts.max_dofs = cfg.max_dofs;
    opts.quad = cfg.quad;
    opts.mesh_path = cfg.mesh_path;
    const CoupledRun run = run_coupled(opts);
    sections.push_back({"", collect(run.levels)});
  } else if (cfg.experiment == "sym_vs_jn") {
    if (levels < 0) levels = 12;
    if (tol < 0) tol = 1e-3;
    const SymVsJnRun run = run_sym_vs_jn(levels, cfg.theta, tol, cfg.quad, cfg.mesh_path);
    sections.push_back({"coupling=jn", run.jn});
    sections.push_back({"coupling=sym", run.sym});
  } else if (cfg.experiment == "artificial") {
    if (levels < 0) levels = 23;
    const CoupledRun run = run_artificial(levels, cfg.max_dofs, cfg.quad);
    sections.push_back({"", collect(run.levels)});
  } else {
    throw ConfigError("unknown experiment: " + cfg.experiment);
  }

  const std::vector<std::string> md = standard_metadata(cfg, levels, tol);
  if (cfg.out.empty()) {
    write_csv(std::cout, md, sections);
  } else {
    std::ofstream os(cfg.out);
    if (!os) throw ConfigError("cannot open output file: " + cfg.out);
    write_csv(os, md, sections);
  }
}

}  // namespace fembem
