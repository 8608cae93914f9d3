// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "fembem/mesh.hpp"

namespace fembem {

/// Per-level increment sets: the nodes the local multilevel preconditioner
/// scales on. At level 0 these are all nodes; for l >= 1 the new nodes plus
/// the old nodes whose patch strictly shrank.
struct LevelIncrement {
  std::vector<int> vol_nodes;
  std::vector<int> bnd_nodes;
};

/// Sequence of nested volume/boundary mesh pairs produced by newest vertex
/// bisection with the induced boundary trace. Immutable except through
/// extend(); node ids persist across levels (old nodes keep their index).
class MeshHierarchy {
 public:
  static MeshHierarchy from_initial(VolumeMesh initial);

  /// Refine the finest level; at least one of the marked sets must be
  /// non-empty. Marked boundary segments are refined by marking their owning
  /// triangles (the boundary mesh is always the induced trace).
  void extend(const std::vector<int>& marked_vol, const std::vector<int>& marked_bnd,
              NvbMarking mode = NvbMarking::all_edges);

  /// Uniform refinement (all triangles marked).
  void extend_uniform();

  int num_levels() const { return static_cast<int>(levels_.size()); }
  int finest() const { return num_levels() - 1; }

  const VolumeMesh& volume(int level) const { return levels_[level].vol; }
  const BoundaryMesh& boundary(int level) const { return levels_[level].bnd; }

  /// Ntilde sets (new nodes + patch-shrunk old nodes).
  const LevelIncrement& increment(int level) const { return increments_[level]; }
  /// Strictly-new node sets (hierarchical basis); level 0 holds all nodes.
  const LevelIncrement& new_only(int level) const { return new_only_[level]; }

  /// Two-level P1 prolongation, level -> level+1.
  const Eigen::SparseMatrix<double>& vol_prolongation(int level) const {
    return vol_prolong_[level];
  }
  /// Parent segment at `level` of each segment at `level+1`.
  const std::vector<int>& bnd_parent(int level) const { return bnd_parent_[level]; }

  /// Coefficient vectors of the level-l hats at `nodes` in the finest-level
  /// nodal basis (N_L x n), built by composing two-level prolongations.
  Eigen::SparseMatrix<double> hat_embedding(int level, const std::vector<int>& nodes) const;

  /// P0 prolongation Y^level -> Y^L (M_L x M_level, one unit entry per row).
  Eigen::SparseMatrix<double> p0_prolongation(int level) const;

  /// Nodal P1 prolongation of a level-l coefficient vector to level l+1.
  Eigen::VectorXd prolongate_p1_once(int level, const Eigen::VectorXd& u) const;
  /// P0 prolongation of a level-l boundary vector to level l+1 (sons inherit).
  Eigen::VectorXd prolongate_p0_once(int level, const Eigen::VectorXd& phi) const;

  /// The triangles marked at the last extend() call, after closure:
  /// ids of coarse triangles that were actually bisected (for diagnostics).
  const std::vector<int>& parent_triangles(int level) const { return vol_parent_tri_[level]; }

 private:
  struct Level {
    VolumeMesh vol;
    BoundaryMesh bnd;
  };
  std::vector<Level> levels_;
  std::vector<LevelIncrement> increments_;
  std::vector<LevelIncrement> new_only_;
  std::vector<Eigen::SparseMatrix<double>> vol_prolong_;
  std::vector<std::vector<int>> bnd_parent_;
  std::vector<std::vector<int>> vol_parent_tri_;  // fine tri -> coarse tri
};

}  // namespace fembem
