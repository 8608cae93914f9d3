// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <functional>

#include "fembem/hierarchy.hpp"
#include "fembem/operators.hpp"

namespace fembem {

/// Apply-inverse-only contract: preconditioners expose a linear map
/// u -> P^{-1} u inducing a symmetric positive definite bilinear form.
class PreconditionerHandle {
 public:
  PreconditionerHandle() = default;
  PreconditionerHandle(int dim, bool symmetric,
                       std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply)
      : dim_(dim), symmetric_(symmetric), apply_(std::move(apply)) {}

  Eigen::VectorXd apply_inverse(const Eigen::VectorXd& v) const;
  int dim() const { return dim_; }
  bool symmetry_certificate() const { return symmetric_; }
  explicit operator bool() const { return static_cast<bool>(apply_); }

 private:
  int dim_ = 0;
  bool symmetric_ = false;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> apply_;
};

enum class MultilevelKind { local_multilevel, hierarchical_basis };

/// Local multilevel additive Schwarz preconditioner for the stabilized FEM
/// operator: P^{-1} u = sum_l I_l D_l^{-1} I_l^T u, scaling on the increment
/// node sets per level. The scaling diagonal is the level-l Galerkin diagonal
/// of the stabilized operator, i.e. the stiffness diagonal plus (s_z)^2 with
/// s_z = <1, (1/2 - K) zeta_z>; with include_hyp_diag it additionally carries
/// <W zeta_z, zeta_z> (symmetric coupling).
PreconditionerHandle build_mlas_fem(const MeshHierarchy& h, const MaterialTensor& A,
                                    const QuadratureConfig& cfg,
                                    MultilevelKind kind = MultilevelKind::local_multilevel,
                                    bool include_hyp_diag = false);

/// Local multilevel additive Schwarz preconditioner for the single-layer
/// operator: P^{-1} = 1 D^{-1} 1^T + sum_l J_l H_l D_l^{-1} H_l^T J_l^T with
/// Haar columns on the boundary increment sets and D = <1, V 1> evaluated on
/// the finest level.
PreconditionerHandle build_mlas_slp(const MeshHierarchy& h, const Eigen::MatrixXd& A_slp_finest,
                                    const QuadratureConfig& cfg,
                                    MultilevelKind kind = MultilevelKind::local_multilevel);

/// Hierarchical-basis variants: increment sets replaced by strictly new nodes
/// (level 0 keeps all nodes).
PreconditionerHandle build_hb_fem(const MeshHierarchy& h, const MaterialTensor& A,
                                  const QuadratureConfig& cfg, bool include_hyp_diag = false);
PreconditionerHandle build_hb_slp(const MeshHierarchy& h, const Eigen::MatrixXd& A_slp_finest,
                                  const QuadratureConfig& cfg);

/// Entrywise division by a positive diagonal.
PreconditionerHandle build_diag(const Eigen::VectorXd& diagonal);

PreconditionerHandle identity_precond(int n);

/// Block-diagonal composition acting on (u_fem, u_bem) stacked vectors.
PreconditionerHandle compose_block(PreconditionerHandle fem, PreconditionerHandle slp);

/// P^{-1} as a dense matrix (applies to unit vectors); desk scale only.
Eigen::MatrixXd densify_inverse(const PreconditionerHandle& P);

}  // namespace fembem
