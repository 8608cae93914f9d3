// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/coupling.hpp"

#include <cmath>

#include "fembem/common.hpp"

namespace fembem {

const char* to_string(CouplingKind k) {
  switch (k) {
    case CouplingKind::johnson_nedelec: return "jn";
    case CouplingKind::symmetric: return "sym";
    case CouplingKind::bielak_maccamy: return "bmc";
  }
  return "?";
}

namespace {

Eigen::VectorXd gather_boundary(const GalerkinBlocks& g, const Eigen::VectorXd& u) {
  Eigen::VectorXd ub(g.nB);
  for (int b = 0; b < g.nB; ++b) ub[b] = u[g.bnode_vol[b]];
  return ub;
}

// Adds a boundary-indexed vector into the FEM head of the stacked vector.
void scatter_boundary(const GalerkinBlocks& g, const Eigen::VectorXd& vb,
                      Eigen::Ref<Eigen::VectorXd> out) {
  for (int b = 0; b < g.nB; ++b) out[g.bnode_vol[b]] += vb[b];
}

}  // namespace

const Eigen::VectorXd& BlockSystem::stab_vector() const {
  return kind == CouplingKind::bielak_maccamy ? blocks->S_bmc : blocks->S_jn;
}

Eigen::VectorXd BlockSystem::apply(const Eigen::VectorXd& u) const {
  const GalerkinBlocks& g = *blocks;
  if (u.size() != dim()) throw ConfigError("BlockSystem::apply: dimension mismatch");
  const auto uf = u.head(g.N);
  const auto phi = u.tail(g.M);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim());
  auto out_f = out.head(g.N);
  auto out_b = out.tail(g.M);

  if (block_diagonal) {
    out_f = g.A_fem * uf;
    const Eigen::VectorXd s = g.S_jn.head(g.N);
    out_f += s * (s.dot(uf));
    out_b = g.A_slp * phi;
    return out;
  }

  const Eigen::VectorXd ub = gather_boundary(g, uf);
  switch (kind) {
    case CouplingKind::johnson_nedelec:
      out_f = g.A_fem * uf - g.mass.transpose() * phi;
      out_b = 0.5 * (g.mass * uf) - g.K * ub + g.A_slp * phi;
      break;
    case CouplingKind::symmetric: {
      out_f = g.A_fem * uf - 0.5 * (g.mass.transpose() * phi);
      if (g.A_hyp.size() == 0)
        throw ConfigError("BlockSystem::apply: symmetric coupling needs the hypersingular block");
      scatter_boundary(g, g.A_hyp * ub, out_f);
      scatter_boundary(g, g.K.transpose() * phi, out_f);
      out_b = 0.5 * (g.mass * uf) - g.K * ub + g.A_slp * phi;
      break;
    }
    case CouplingKind::bielak_maccamy: {
      out_f = g.A_fem * uf + 0.5 * (g.mass.transpose() * phi);
      Eigen::VectorXd kt = -(g.K.transpose() * phi);
      scatter_boundary(g, kt, out_f);
      out_b = -(g.mass * uf) + g.A_slp * phi;
      break;
    }
  }
  if (stabilized) {
    const Eigen::VectorXd& S = stab_vector();
    out += S * S.dot(u);
  }
  return out;
}

Eigen::MatrixXd BlockSystem::densify() const {
  const int n = dim();
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    A.col(j) = apply(e);
    e[j] = 0.0;
  }
  return A;
}

BlockSystem build_system(CouplingKind kind, bool stabilized,
                         std::shared_ptr<const GalerkinBlocks> blocks, Eigen::VectorXd rhs) {
  if (kind == CouplingKind::symmetric && blocks->A_hyp.size() == 0)
    throw ConfigError("build_system: symmetric coupling needs the hypersingular block");
  if (rhs.size() != blocks->N + blocks->M)
    throw ConfigError("build_system: right-hand side dimension mismatch");
  BlockSystem sys;
  sys.kind = kind;
  sys.stabilized = stabilized;
  sys.blocks = std::move(blocks);
  sys.rhs = std::move(rhs);
  return sys;
}

BlockSystem build_pform(std::shared_ptr<const GalerkinBlocks> blocks) {
  BlockSystem sys;
  sys.kind = CouplingKind::johnson_nedelec;
  sys.stabilized = true;
  sys.block_diagonal = true;
  sys.blocks = std::move(blocks);
  sys.rhs = Eigen::VectorXd::Zero(sys.dim());
  return sys;
}

RhsData assemble_rhs(const ProblemData& problem, const VolumeMesh& mesh,
                     const BoundaryMesh& bmesh, const GalerkinBlocks& blocks,
                     CouplingKind kind, bool stabilized, const QuadratureConfig& cfg) {
  const int N = blocks.N;
  const int M = blocks.M;
  RhsData out;
  out.F = Eigen::VectorXd::Zero(N + M);
  auto F_f = out.F.head(N);
  auto F_b = out.F.tail(M);

  double int_f = 0.0;
  double abs_data = 0.0;
  if (problem.f) {
    // Order-2 rule at edge midpoints; the hat of one vertex is 1/2 at the two
    // adjacent midpoints and 0 at the opposite one.
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const Triangle& tr = mesh.triangles[t];
      const double w = mesh.area(t) / 3.0;
      for (int r = 0; r < 3; ++r) {
        const Point2 m = midpoint(mesh.nodes[tr.v[r]], mesh.nodes[tr.v[(r + 1) % 3]]);
        const double fm = problem.f(m);
        int_f += w * fm;
        abs_data += w * std::abs(fm);
        F_f[tr.v[r]] += 0.5 * w * fm;
        F_f[tr.v[(r + 1) % 3]] += 0.5 * w * fm;
      }
    }
  }

  double int_phi0 = 0.0;
  if (problem.phi0) {
    const GaussRule& gr = gauss_legendre(cfg.gauss_order);
    for (int s = 0; s < M; ++s) {
      const SegmentGeom sg = segment_geom(bmesh, s);
      const int vs = bmesh.vol_node[bmesh.segments[s].src];
      const int vd = bmesh.vol_node[bmesh.segments[s].dst];
      for (size_t i = 0; i < gr.x.size(); ++i) {
        const double u = gr.x[i];
        const Point2 x = sg.a + u * (sg.b - sg.a);
        const double p = problem.phi0(x, sg.normal);
        const double w = gr.w[i] * sg.len;
        int_phi0 += w * p;
        abs_data += w * std::abs(p);
        F_f[vs] += w * p * (1.0 - u);
        F_f[vd] += w * p * u;
      }
    }
  }
  out.compatibility = int_f + int_phi0;
  out.compat_warning = std::abs(out.compatibility) > 1e-6 * std::max(abs_data, 1e-30);

  // Boundary data via its nodal interpolant.
  Eigen::VectorXd u0_b = Eigen::VectorXd::Zero(blocks.nB);
  if (problem.u0)
    for (int b = 0; b < blocks.nB; ++b) u0_b[b] = problem.u0(bmesh.nodes[b]);
  Eigen::VectorXd u0_vol = Eigen::VectorXd::Zero(N);
  for (int b = 0; b < blocks.nB; ++b) u0_vol[blocks.bnode_vol[b]] = u0_b[b];

  switch (kind) {
    case CouplingKind::johnson_nedelec:
      F_b = 0.5 * (blocks.mass * u0_vol) - blocks.K * u0_b;
      out.stab_scalar = F_b.sum();
      break;
    case CouplingKind::symmetric: {
      if (blocks.A_hyp.size() == 0)
        throw ConfigError("assemble_rhs: symmetric coupling needs the hypersingular block");
      const Eigen::VectorXd wu0 = blocks.A_hyp * u0_b;
      for (int b = 0; b < blocks.nB; ++b) F_f[blocks.bnode_vol[b]] += wu0[b];
      F_b = 0.5 * (blocks.mass * u0_vol) - blocks.K * u0_b;
      out.stab_scalar = F_b.sum();
      break;
    }
    case CouplingKind::bielak_maccamy:
      F_b = -(blocks.mass * u0_vol);
      out.stab_scalar = F_b.sum();
      break;
  }
  if (stabilized) {
    const Eigen::VectorXd& S =
        kind == CouplingKind::bielak_maccamy ? blocks.S_bmc : blocks.S_jn;
    out.F += out.stab_scalar * S;
  }
  return out;
}

AgreementReport solutions_agree(const Eigen::VectorXd& stabilized,
                                const Eigen::VectorXd& non_stabilized, double tol) {
  AgreementReport r;
  const double scale = std::max(stabilized.cwiseAbs().maxCoeff(),
                                non_stabilized.cwiseAbs().maxCoeff());
  if (scale == 0.0) {
    r.agree = true;
    return r;
  }
  r.max_rel_diff = (stabilized - non_stabilized).cwiseAbs().maxCoeff() / scale;
  r.agree = r.max_rel_diff <= tol;
  return r;
}

}  // namespace fembem
