// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <memory>

#include "fembem/operators.hpp"
#include "fembem/problems.hpp"

namespace fembem {

enum class CouplingKind { johnson_nedelec, symmetric, bielak_maccamy };

const char* to_string(CouplingKind k);

/// Coupled Galerkin system with matrix-free application. The stabilized flag
/// toggles the rank-1 term S S^T (O(N+M) extra work per apply). The
/// preconditioning form is represented by the same type with
/// block_diagonal = true: diag(A_A + s s^T, A_V) with s the FEM part of the
/// stabilization vector.
struct BlockSystem {
  CouplingKind kind = CouplingKind::johnson_nedelec;
  bool stabilized = true;
  bool block_diagonal = false;
  std::shared_ptr<const GalerkinBlocks> blocks;
  Eigen::VectorXd rhs;

  int N() const { return blocks->N; }
  int M() const { return blocks->M; }
  int dim() const { return blocks->N + blocks->M; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const;
  Eigen::MatrixXd densify() const;
  const Eigen::VectorXd& stab_vector() const;
};

BlockSystem build_system(CouplingKind kind, bool stabilized,
                         std::shared_ptr<const GalerkinBlocks> blocks, Eigen::VectorXd rhs);

/// Block-diagonal preconditioning form diag(A_A + s s^T, A_V); symmetric and
/// positive definite.
BlockSystem build_pform(std::shared_ptr<const GalerkinBlocks> blocks);

struct RhsData {
  Eigen::VectorXd F;
  double compatibility = 0.0;  ///< <f,1>_Omega + <phi0,1>_Gamma
  bool compat_warning = false;
  double stab_scalar = 0.0;  ///< factor multiplying the stabilization vector
};

/// Discrete right-hand side for the given coupling; smooth boundary data
/// enter integral operators through their nodal interpolant, volume terms by
/// the order-2 midpoint rule, plain boundary data terms by segment Gauss.
RhsData assemble_rhs(const ProblemData& problem, const VolumeMesh& mesh,
                     const BoundaryMesh& bmesh, const GalerkinBlocks& blocks,
                     CouplingKind kind, bool stabilized, const QuadratureConfig& cfg);

struct AgreementReport {
  bool agree = false;
  double max_rel_diff = 0.0;
};

/// Checks that stabilized and non-stabilized Galerkin solutions coincide.
AgreementReport solutions_agree(const Eigen::VectorXd& stabilized,
                                const Eigen::VectorXd& non_stabilized, double tol = 1e-8);

}  // namespace fembem
