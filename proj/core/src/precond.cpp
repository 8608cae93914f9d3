// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/precond.hpp"

#include <memory>
#include <utility>
#include <vector>

#include "fembem/common.hpp"
#include "fembem/kernels.hpp"

namespace fembem {

Eigen::VectorXd PreconditionerHandle::apply_inverse(const Eigen::VectorXd& v) const {
  if (!apply_) throw ConfigError("PreconditionerHandle: empty handle");
  if (v.size() != dim_) throw ConfigError("PreconditionerHandle: dimension mismatch");
  return apply_(v);
}

namespace {

struct LevelTerm {
  Eigen::SparseMatrix<double> embed;  // finest-dim x n
  Eigen::VectorXd diag;               // n
};

PreconditionerHandle make_additive(int dim, std::vector<LevelTerm> terms,
                                   Eigen::VectorXd constant_dir, double constant_weight) {
  auto state = std::make_shared<std::pair<std::vector<LevelTerm>, Eigen::VectorXd>>(
      std::move(terms), std::move(constant_dir));
  return PreconditionerHandle(
      dim, true, [state, constant_weight](const Eigen::VectorXd& u) {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(u.size());
        if (state->second.size() > 0)
          out += state->second * (state->second.dot(u) / constant_weight);
        for (const LevelTerm& t : state->first) {
          const Eigen::VectorXd loc = (t.embed.transpose() * u).cwiseQuotient(t.diag);
          out += t.embed * loc;
        }
        return out;
      });
}

// Diagonal of the level stiffness matrix for the requested nodes.
Eigen::VectorXd stiffness_diagonal(const VolumeMesh& mesh, const MaterialTensor& A) {
  Eigen::VectorXd d = Eigen::VectorXd::Zero(mesh.num_nodes());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    const double area = mesh.area(t);
    const Eigen::Matrix2d At = A.value(mesh.centroid(t));
    for (int i = 0; i < 3; ++i) {
      const Point2 g = (1.0 / (2.0 * area)) *
                       perp(mesh.nodes[tr.v[(i + 2) % 3]] - mesh.nodes[tr.v[(i + 1) % 3]]);
      Eigen::Vector2d gv;
      gv << g.x, g.y;
      d[tr.v[i]] += area * gv.dot(At * gv);
    }
  }
  return d;
}

// s_z = <1, (1/2 - K) zeta_z> for a boundary node of the level mesh.
double stabilization_entry(const BoundaryMesh& bm, int node, const QuadratureConfig& cfg) {
  const double mass = 0.5 * (bm.length(bm.seg_in(node)) + bm.length(bm.seg_out(node)));
  const HatSupport hat = hat_support(bm, node);
  double k_colsum = 0.0;
  for (int s = 0; s < bm.num_segments(); ++s)
    k_colsum += dlp_pair_integral(segment_geom(bm, s), hat, cfg);
  return 0.5 * mass - k_colsum;
}

PreconditionerHandle build_fem(const MeshHierarchy& h, const MaterialTensor& A,
                               const QuadratureConfig& cfg, MultilevelKind kind,
                               bool include_hyp_diag) {
  const int L = h.finest();
  const int N = h.volume(L).num_nodes();
  std::vector<LevelTerm> terms;
  for (int l = 0; l <= L; ++l) {
    const std::vector<int>& nodes = kind == MultilevelKind::local_multilevel
                                        ? h.increment(l).vol_nodes
                                        : h.new_only(l).vol_nodes;
    if (nodes.empty()) continue;
    const VolumeMesh& mesh = h.volume(l);
    const BoundaryMesh& bm = h.boundary(l);
    std::vector<int> vol2bnd(mesh.num_nodes(), -1);
    for (int b = 0; b < bm.num_nodes(); ++b) vol2bnd[bm.vol_node[b]] = b;
    const Eigen::VectorXd stiff = stiffness_diagonal(mesh, A);
    LevelTerm term;
    term.embed = h.hat_embedding(l, nodes);
    term.diag.resize(static_cast<int>(nodes.size()));
    for (size_t k = 0; k < nodes.size(); ++k) {
      double d = stiff[nodes[k]];
      const int b = vol2bnd[nodes[k]];
      if (b >= 0) {
        const double s = stabilization_entry(bm, b, cfg);
        d += s * s;
        if (include_hyp_diag) d += hyp_diagonal_entry(bm, b, cfg);
      }
      if (d <= 0.0) throw NumericalError("build_mlas_fem: non-positive scaling entry");
      term.diag[static_cast<int>(k)] = d;
    }
    terms.push_back(std::move(term));
  }
  return make_additive(N, std::move(terms), Eigen::VectorXd(), 1.0);
}

PreconditionerHandle build_slp(const MeshHierarchy& h, const Eigen::MatrixXd& A_slp,
                               const QuadratureConfig& cfg, MultilevelKind kind) {
  const int L = h.finest();
  const int M = h.boundary(L).num_segments();
  if (A_slp.rows() != M || A_slp.cols() != M)
    throw ConfigError("build_mlas_slp: single-layer matrix does not match the finest level");
  const double D = A_slp.sum();  // <1, V 1> on the finest mesh
  if (!(D > 0.0)) throw NumericalError("build_mlas_slp: <1, V 1> must be positive");
  std::vector<LevelTerm> terms;
  for (int l = 0; l <= L; ++l) {
    const std::vector<int>& nodes = kind == MultilevelKind::local_multilevel
                                        ? h.increment(l).bnd_nodes
                                        : h.new_only(l).bnd_nodes;
    if (nodes.empty()) continue;  // legal: the level contributes nothing
    const BoundaryMesh& bm = h.boundary(l);
    LevelTerm term;
    term.embed = (h.p0_prolongation(l) * haar_map_local(bm, nodes)).eval();
    term.diag.resize(static_cast<int>(nodes.size()));
    for (size_t k = 0; k < nodes.size(); ++k) {
      const double d = hyp_diagonal_entry(bm, nodes[k], cfg);
      if (d <= 0.0) throw NumericalError("build_mlas_slp: non-positive Haar scaling entry");
      term.diag[static_cast<int>(k)] = d;
    }
    terms.push_back(std::move(term));
  }
  return make_additive(M, std::move(terms), Eigen::VectorXd::Ones(M), D);
}

}  // namespace

PreconditionerHandle build_mlas_fem(const MeshHierarchy& h, const MaterialTensor& A,
                                    const QuadratureConfig& cfg, MultilevelKind kind,
                                    bool include_hyp_diag) {
  return build_fem(h, A, cfg, kind, include_hyp_diag);
}

PreconditionerHandle build_mlas_slp(const MeshHierarchy& h, const Eigen::MatrixXd& A_slp_finest,
                                    const QuadratureConfig& cfg, MultilevelKind kind) {
  return build_slp(h, A_slp_finest, cfg, kind);
}

PreconditionerHandle build_hb_fem(const MeshHierarchy& h, const MaterialTensor& A,
                                  const QuadratureConfig& cfg, bool include_hyp_diag) {
  return build_fem(h, A, cfg, MultilevelKind::hierarchical_basis, include_hyp_diag);
}

PreconditionerHandle build_hb_slp(const MeshHierarchy& h, const Eigen::MatrixXd& A_slp_finest,
                                  const QuadratureConfig& cfg) {
  return build_slp(h, A_slp_finest, cfg, MultilevelKind::hierarchical_basis);
}

PreconditionerHandle build_diag(const Eigen::VectorXd& diagonal) {
  for (int i = 0; i < diagonal.size(); ++i)
    if (!(diagonal[i] > 0.0)) throw ConfigError("build_diag: non-positive diagonal entry");
  Eigen::VectorXd d = diagonal;
  return PreconditionerHandle(static_cast<int>(d.size()), true,
                              [d](const Eigen::VectorXd& u) { return u.cwiseQuotient(d).eval(); });
}

PreconditionerHandle identity_precond(int n) {
  return PreconditionerHandle(n, true, [](const Eigen::VectorXd& u) { return u; });
}

PreconditionerHandle compose_block(PreconditionerHandle fem, PreconditionerHandle slp) {
  const int n = fem.dim();
  const int m = slp.dim();
  const bool sym = fem.symmetry_certificate() && slp.symmetry_certificate();
  auto f = std::make_shared<PreconditionerHandle>(std::move(fem));
  auto s = std::make_shared<PreconditionerHandle>(std::move(slp));
  return PreconditionerHandle(n + m, sym, [f, s, n, m](const Eigen::VectorXd& u) {
    Eigen::VectorXd out(n + m);
    out.head(n) = f->apply_inverse(u.head(n));
    out.tail(m) = s->apply_inverse(u.tail(m));
    return out;
  });
}

Eigen::MatrixXd densify_inverse(const PreconditionerHandle& P) {
  const int n = P.dim();
  Eigen::MatrixXd out(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    out.col(j) = P.apply_inverse(e);
    e[j] = 0.0;
  }
  return out;
}

}  // namespace fembem
