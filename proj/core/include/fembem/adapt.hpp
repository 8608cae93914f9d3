// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "fembem/coupling.hpp"
#include "fembem/mesh.hpp"
#include "fembem/problems.hpp"

namespace fembem {

/// Squared local error indicators (volume and/or boundary elements).
struct IndicatorField {
  Eigen::VectorXd volume;
  Eigen::VectorXd boundary;

  double total() const {
    return (volume.size() ? volume.sum() : 0.0) + (boundary.size() ? boundary.sum() : 0.0);
  }
};

/// Weighted-residual indicator for the weakly-singular equation:
/// eta_T^2 = |T| * || (d/ds)(V phi_h - (1/2 + K) I_h g) ||^2_{L2(T)}.
IndicatorField estimate_weaksing(const BoundaryMesh& bmesh, const Eigen::VectorXd& phi_h,
                                 const Eigen::VectorXd& g_nodal, const QuadratureConfig& cfg);

/// Residual indicators for the coupled problem: volume terms
/// h_T^2 ||f||^2_{L2(T)} + h_T ||[A grad u_h . n]||^2_{L2(dT cap Omega)},
/// boundary terms h_T ||(d/ds) rho||^2_{L2(T)} with rho the residual of the
/// second coupling equation (V phi_h + (1/2 - K)(u_h - I_h u0) for jn/sym,
/// V phi_h - (u_h - I_h u0) for bmc), plus the flux mismatch
/// h_T ||A grad u_h . n - phi_h - phi0||^2_{L2(T)}.
IndicatorField estimate_coupling(const VolumeMesh& mesh, const BoundaryMesh& bmesh,
                                 const GalerkinBlocks& blocks, const ProblemData& problem,
                                 const Eigen::VectorXd& solution, const QuadratureConfig& cfg,
                                 CouplingKind kind = CouplingKind::johnson_nedelec);

/// Minimal-cardinality bulk chasing: greedy on sorted squared indicators,
/// ties broken by element id, until the marked sum reaches theta * total.
std::vector<int> mark_doerfler(const Eigen::VectorXd& eta_sq, double theta);

/// Dörfler marking over the combined volume/boundary field; returns the two
/// marked id sets.
std::pair<std::vector<int>, std::vector<int>> mark_doerfler_combined(const IndicatorField& ind,
                                                                     double theta);

/// All volume triangles and boundary segments containing the origin. Throws
/// if the origin is not a mesh vertex.
std::pair<std::vector<int>, std::vector<int>> mark_corner(const VolumeMesh& mesh,
                                                          const BoundaryMesh& bmesh);

}  // namespace fembem
