// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fembem/kernels.hpp"
#include "fembem/mesh.hpp"
#include "fembem/quadrature.hpp"

namespace fembem {

struct MaterialTensor {
  std::function<Eigen::Matrix2d(Point2)> value;
  double c_min = 1.0;  ///< lower ellipticity bound
  double c_max = 1.0;  ///< upper bound

  static MaterialTensor identity();
  static MaterialTensor scalar(double c);
};

/// P1 stiffness matrix <A grad eta_k, grad eta_j>_Omega with the material
/// tensor sampled at triangle centroids.
Eigen::SparseMatrix<double> assemble_fem_stiffness(const VolumeMesh& mesh,
                                                   const MaterialTensor& A);

/// Dense Galerkin matrix of the single-layer operator on P0. Requires
/// diam(Omega) < 1 for ellipticity; throws ConfigError otherwise.
Eigen::MatrixXd assemble_slp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg);

/// Dense M x nB matrix <psi_j, K zeta_k> against boundary hat functions.
Eigen::MatrixXd assemble_dlp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg);

/// Sparse M x nB mass matrix <psi_j, zeta_k> (|T|/2 per endpoint incidence).
Eigen::SparseMatrix<double> assemble_mass_trace(const BoundaryMesh& bmesh);

/// Full Haar map: column z holds the coefficients of chi_z = (zeta_z)' in the
/// P0 basis, i.e. +1/|seg_in| and -1/|seg_out|.
Eigen::SparseMatrix<double> haar_map(const BoundaryMesh& bmesh);
Eigen::SparseMatrix<double> haar_map_local(const BoundaryMesh& bmesh,
                                           const std::vector<int>& nodes);

/// Hypersingular Galerkin matrix via Maue's identity, computed entrywise as
/// <V chi_k, chi_j> from single-layer pair integrals of the support segments.
Eigen::MatrixXd assemble_hyp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg);
Eigen::MatrixXd assemble_hyp_local(const BoundaryMesh& bmesh, const std::vector<int>& nodes,
                                   const QuadratureConfig& cfg);

/// <V chi_z, chi_z> from the 2x2 single-layer sub-block at node z.
double hyp_diagonal_entry(const BoundaryMesh& bmesh, int node, const QuadratureConfig& cfg);

enum class StabKind { jn_sym, bmc };

/// Stabilization vector of length N + M assembled from the Galerkin blocks.
/// jn_sym: S_j = sum_rows(M/2 - K) col j, S_{j+N} = sum_rows A_V col j;
/// bmc:    S_j = -(sum_rows M col j),     S_{j+N} = sum_rows A_V col j.
Eigen::VectorXd assemble_stabilization(const Eigen::MatrixXd& A_slp, const Eigen::MatrixXd& K,
                                       const Eigen::SparseMatrix<double>& mass,
                                       const std::vector<int>& bnode_vol, int N, StabKind kind);

/// All Galerkin blocks of one level. K and A_hyp index boundary hats by
/// boundary-node id; bnode_vol embeds them into the N volume unknowns.
struct GalerkinBlocks {
  Eigen::SparseMatrix<double> A_fem;  // N x N
  Eigen::MatrixXd A_slp;              // M x M
  Eigen::MatrixXd K;                  // M x nB
  Eigen::SparseMatrix<double> mass;   // M x N (non-zeros only at boundary columns)
  Eigen::MatrixXd A_hyp;              // nB x nB (empty unless requested)
  Eigen::VectorXd S_jn;               // N + M
  Eigen::VectorXd S_bmc;              // N + M
  std::vector<int> bnode_vol;         // boundary node -> volume node
  int N = 0, M = 0, nB = 0;
};

GalerkinBlocks assemble_blocks(const VolumeMesh& mesh, const BoundaryMesh& bmesh,
                               const MaterialTensor& A, const QuadratureConfig& cfg,
                               bool with_hyp);

// Plain-text coordinate export: `matrix <rows> <cols> <nnz>` then
// `row col value` triplets, for oracle cross-checks.
void write_matrix(std::ostream& os, const Eigen::MatrixXd& m);
void write_matrix(std::ostream& os, const Eigen::SparseMatrix<double>& m);
Eigen::MatrixXd read_matrix(std::istream& is);

}  // namespace fembem
