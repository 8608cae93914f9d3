// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/hierarchy.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "fembem/common.hpp"

namespace fembem {

MeshHierarchy MeshHierarchy::from_initial(VolumeMesh initial) {
  initial.validate();
  MeshHierarchy h;
  BoundaryMesh bnd = induced_boundary_mesh(initial);
  LevelIncrement inc;
  for (int z = 0; z < initial.num_nodes(); ++z) inc.vol_nodes.push_back(z);
  for (int z = 0; z < bnd.num_nodes(); ++z) inc.bnd_nodes.push_back(z);
  h.levels_.push_back({std::move(initial), std::move(bnd)});
  h.increments_.push_back(inc);
  h.new_only_.push_back(std::move(inc));
  return h;
}

void MeshHierarchy::extend(const std::vector<int>& marked_vol,
                           const std::vector<int>& marked_bnd, NvbMarking mode) {
  if (marked_vol.empty() && marked_bnd.empty())
    throw ConfigError("extend_hierarchy: marked sets must not both be empty");
  const Level& top = levels_.back();

  // Induced coupling: transfer boundary marks to the owning triangles. Only
  // all_edges marking guarantees that a marked boundary segment is bisected.
  std::set<int> marks(marked_vol.begin(), marked_vol.end());
  if (!marked_bnd.empty() && mode != NvbMarking::all_edges)
    throw ConfigError("extend_hierarchy: boundary marks require all_edges marking");
  if (!marked_bnd.empty()) {
    std::map<std::pair<int, int>, int> owner;
    for (const auto& e : top.vol.boundary_edges())
      owner[{std::min(e[0], e[1]), std::max(e[0], e[1])}] = e[2];
    for (int s : marked_bnd) {
      if (s < 0 || s >= top.bnd.num_segments())
        throw ConfigError("extend_hierarchy: invalid boundary segment id");
      const int a = top.bnd.vol_node[top.bnd.segments[s].src];
      const int b = top.bnd.vol_node[top.bnd.segments[s].dst];
      marks.insert(owner.at({std::min(a, b), std::max(a, b)}));
    }
  }

  RefinementData rd =
      refine_nvb_detailed(top.vol, std::vector<int>(marks.begin(), marks.end()), mode);
  BoundaryRefinementData bd = refine_induced_boundary(top.bnd, rd.mesh, rd);

  const int n_coarse = top.vol.num_nodes();
  const int n_fine = rd.mesh.num_nodes();

  Eigen::SparseMatrix<double> P(n_fine, n_coarse);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(n_coarse + 2 * rd.new_nodes.size());
  for (int i = 0; i < n_coarse; ++i) trips.emplace_back(i, i, 1.0);
  for (size_t k = 0; k < rd.new_nodes.size(); ++k) {
    trips.emplace_back(rd.new_nodes[k], rd.parent_edge[k][0], 0.5);
    trips.emplace_back(rd.new_nodes[k], rd.parent_edge[k][1], 0.5);
  }
  P.setFromTriplets(trips.begin(), trips.end());

  LevelIncrement inc;
  inc.vol_nodes = rd.new_nodes;
  inc.vol_nodes.insert(inc.vol_nodes.end(), rd.touched_nodes.begin(), rd.touched_nodes.end());
  std::sort(inc.vol_nodes.begin(), inc.vol_nodes.end());
  inc.bnd_nodes = bd.new_nodes;
  inc.bnd_nodes.insert(inc.bnd_nodes.end(), bd.touched_nodes.begin(), bd.touched_nodes.end());
  std::sort(inc.bnd_nodes.begin(), inc.bnd_nodes.end());

  LevelIncrement fresh;
  fresh.vol_nodes = rd.new_nodes;
  fresh.bnd_nodes = bd.new_nodes;
  std::sort(fresh.vol_nodes.begin(), fresh.vol_nodes.end());
  std::sort(fresh.bnd_nodes.begin(), fresh.bnd_nodes.end());

  vol_prolong_.push_back(std::move(P));
  bnd_parent_.push_back(std::move(bd.parent_segment));
  vol_parent_tri_.push_back(std::move(rd.parent_triangle));
  increments_.push_back(std::move(inc));
  new_only_.push_back(std::move(fresh));
  levels_.push_back({std::move(rd.mesh), std::move(bd.mesh)});
}

void MeshHierarchy::extend_uniform() {
  std::vector<int> all(levels_.back().vol.num_triangles());
  for (size_t t = 0; t < all.size(); ++t) all[t] = static_cast<int>(t);
  extend(all, {});
}

Eigen::SparseMatrix<double> MeshHierarchy::hat_embedding(
    int level, const std::vector<int>& nodes) const {
  const int n_l = levels_[level].vol.num_nodes();
  Eigen::SparseMatrix<double> E(n_l, static_cast<int>(nodes.size()));
  std::vector<Eigen::Triplet<double>> trips;
  for (size_t k = 0; k < nodes.size(); ++k) trips.emplace_back(nodes[k], static_cast<int>(k), 1.0);
  E.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseMatrix<double> acc = E;
  for (int l = level; l < finest(); ++l) acc = (vol_prolong_[l] * acc).eval();
  return acc;
}

Eigen::SparseMatrix<double> MeshHierarchy::p0_prolongation(int level) const {
  const int M_L = levels_.back().bnd.num_segments();
  const int M_l = levels_[level].bnd.num_segments();
  Eigen::SparseMatrix<double> J(M_L, M_l);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(M_L);
  for (int m = 0; m < M_L; ++m) {
    int j = m;
    for (int l = finest() - 1; l >= level; --l) j = bnd_parent_[l][j];
    trips.emplace_back(m, j, 1.0);
  }
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

Eigen::VectorXd MeshHierarchy::prolongate_p1_once(int level, const Eigen::VectorXd& u) const {
  return vol_prolong_[level] * u;
}

Eigen::VectorXd MeshHierarchy::prolongate_p0_once(int level, const Eigen::VectorXd& phi) const {
  const auto& par = bnd_parent_[level];
  Eigen::VectorXd out(static_cast<int>(par.size()));
  for (size_t m = 0; m < par.size(); ++m) out[static_cast<int>(m)] = phi[par[m]];
  return out;
}

}  // namespace fembem
