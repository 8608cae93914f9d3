// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/operators.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "fembem/common.hpp"

namespace fembem {

MaterialTensor MaterialTensor::identity() { return scalar(1.0); }

MaterialTensor MaterialTensor::scalar(double c) {
  if (c <= 0.0) throw ConfigError("MaterialTensor: non-positive coefficient");
  MaterialTensor A;
  A.value = [c](Point2) { return (c * Eigen::Matrix2d::Identity()).eval(); };
  A.c_min = A.c_max = c;
  return A;
}

Eigen::SparseMatrix<double> assemble_fem_stiffness(const VolumeMesh& mesh,
                                                   const MaterialTensor& A) {
  const int N = mesh.num_nodes();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(9 * mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    const double area = mesh.area(t);
    if (area <= 0.0) throw ConfigError("assemble_fem_stiffness: degenerate triangle");
    const Eigen::Matrix2d At = A.value(mesh.centroid(t));
    Eigen::Vector2d grad[3];
    for (int i = 0; i < 3; ++i) {
      const Point2 g =
          (1.0 / (2.0 * area)) * perp(mesh.nodes[tr.v[(i + 2) % 3]] - mesh.nodes[tr.v[(i + 1) % 3]]);
      grad[i] << g.x, g.y;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(tr.v[i], tr.v[j], area * grad[j].dot(At * grad[i]));
  }
  Eigen::SparseMatrix<double> K(N, N);
  K.setFromTriplets(trips.begin(), trips.end());
  return K;
}

Eigen::MatrixXd assemble_slp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg) {
  // diam(Omega) < 1 keeps the single-layer operator elliptic.
  double diam = 0.0;
  for (int i = 0; i < bmesh.num_nodes(); ++i)
    for (int j = i + 1; j < bmesh.num_nodes(); ++j)
      diam = std::max(diam, dist(bmesh.nodes[i], bmesh.nodes[j]));
  if (diam >= 1.0)
    throw ConfigError("assemble_slp: diam(Omega) >= 1, single-layer ellipticity lost");

  const int M = bmesh.num_segments();
  std::vector<SegmentGeom> segs(M);
  for (int s = 0; s < M; ++s) segs[s] = segment_geom(bmesh, s);
  Eigen::MatrixXd V(M, M);
  for (int j = 0; j < M; ++j) {
    V(j, j) = slp_pair_integral(segs[j], segs[j], cfg);
    for (int k = j + 1; k < M; ++k) {
      const double v = slp_pair_integral(segs[j], segs[k], cfg);
      V(j, k) = v;
      V(k, j) = v;
    }
  }
  return V;
}

Eigen::MatrixXd assemble_dlp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg) {
  const int M = bmesh.num_segments();
  const int nB = bmesh.num_nodes();
  std::vector<SegmentGeom> segs(M);
  for (int s = 0; s < M; ++s) segs[s] = segment_geom(bmesh, s);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M, nB);
  for (int z = 0; z < nB; ++z) {
    const HatSupport hat{segs[bmesh.seg_in(z)], segs[bmesh.seg_out(z)]};
    for (int j = 0; j < M; ++j) K(j, z) = dlp_pair_integral(segs[j], hat, cfg);
  }
  return K;
}

Eigen::SparseMatrix<double> assemble_mass_trace(const BoundaryMesh& bmesh) {
  const int M = bmesh.num_segments();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * M);
  int N = 0;
  for (int z = 0; z < bmesh.num_nodes(); ++z) {
    if (bmesh.vol_node[z] < 0)
      throw ConfigError("assemble_mass_trace: boundary mesh is not a volume trace");
    N = std::max(N, bmesh.vol_node[z] + 1);
  }
  // The mass matrix is rectangular against all volume nodes; the caller
  // resizes if the volume mesh has more nodes than appear on the boundary.
  for (int j = 0; j < M; ++j) {
    const double half = 0.5 * bmesh.length(j);
    trips.emplace_back(j, bmesh.vol_node[bmesh.segments[j].src], half);
    trips.emplace_back(j, bmesh.vol_node[bmesh.segments[j].dst], half);
  }
  Eigen::SparseMatrix<double> out(M, N);
  out.setFromTriplets(trips.begin(), trips.end());
  return out;
}

Eigen::SparseMatrix<double> haar_map(const BoundaryMesh& bmesh) {
  std::vector<int> all(bmesh.num_nodes());
  for (int z = 0; z < bmesh.num_nodes(); ++z) all[z] = z;
  return haar_map_local(bmesh, all);
}

Eigen::SparseMatrix<double> haar_map_local(const BoundaryMesh& bmesh,
                                           const std::vector<int>& nodes) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * nodes.size());
  for (size_t k = 0; k < nodes.size(); ++k) {
    const int z = nodes[k];
    const int si = bmesh.seg_in(z);
    const int so = bmesh.seg_out(z);
    trips.emplace_back(si, static_cast<int>(k), 1.0 / bmesh.length(si));
    trips.emplace_back(so, static_cast<int>(k), -1.0 / bmesh.length(so));
  }
  Eigen::SparseMatrix<double> H(bmesh.num_segments(), static_cast<int>(nodes.size()));
  H.setFromTriplets(trips.begin(), trips.end());
  return H;
}

Eigen::MatrixXd assemble_hyp(const BoundaryMesh& bmesh, const QuadratureConfig& cfg) {
  std::vector<int> all(bmesh.num_nodes());
  for (int z = 0; z < bmesh.num_nodes(); ++z) all[z] = z;
  return assemble_hyp_local(bmesh, all, cfg);
}

Eigen::MatrixXd assemble_hyp_local(const BoundaryMesh& bmesh, const std::vector<int>& nodes,
                                   const QuadratureConfig& cfg) {
  // <W zeta_k, zeta_j> = <V chi_k, chi_j> with chi_z a +-1/length combination
  // of the two segments adjacent to z.
  const int n = static_cast<int>(nodes.size());
  struct HaarCol {
    int seg[2];
    double c[2];
  };
  std::vector<HaarCol> cols(n);
  for (int k = 0; k < n; ++k) {
    const int z = nodes[k];
    const int si = bmesh.seg_in(z);
    const int so = bmesh.seg_out(z);
    cols[k] = {{si, so}, {1.0 / bmesh.length(si), -1.0 / bmesh.length(so)}};
  }
  std::vector<SegmentGeom> segs(bmesh.num_segments());
  for (int s = 0; s < bmesh.num_segments(); ++s) segs[s] = segment_geom(bmesh, s);
  Eigen::MatrixXd W(n, n);
  for (int j = 0; j < n; ++j) {
    for (int k = j; k < n; ++k) {
      double sum = 0.0;
      for (int p = 0; p < 2; ++p)
        for (int q = 0; q < 2; ++q)
          sum += cols[j].c[p] * cols[k].c[q] *
                 slp_pair_integral(segs[cols[j].seg[p]], segs[cols[k].seg[q]], cfg);
      W(j, k) = sum;
      W(k, j) = sum;
    }
  }
  return W;
}

double hyp_diagonal_entry(const BoundaryMesh& bmesh, int node, const QuadratureConfig& cfg) {
  const int si = bmesh.seg_in(node);
  const int so = bmesh.seg_out(node);
  const SegmentGeom gi = segment_geom(bmesh, si);
  const SegmentGeom go = segment_geom(bmesh, so);
  const double ci = 1.0 / gi.len, co = 1.0 / go.len;
  const double vii = slp_pair_integral(gi, gi, cfg);
  const double voo = slp_pair_integral(go, go, cfg);
  const double vio = slp_pair_integral(gi, go, cfg);
  return ci * ci * vii + co * co * voo - 2.0 * ci * co * vio;
}

Eigen::VectorXd assemble_stabilization(const Eigen::MatrixXd& A_slp, const Eigen::MatrixXd& K,
                                       const Eigen::SparseMatrix<double>& mass,
                                       const std::vector<int>& bnode_vol, int N, StabKind kind) {
  const int M = static_cast<int>(A_slp.rows());
  const int nB = static_cast<int>(K.cols());
  Eigen::VectorXd S = Eigen::VectorXd::Zero(N + M);
  Eigen::VectorXd mass_colsum = Eigen::VectorXd::Zero(N);
  for (int k = 0; k < mass.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(mass, k); it; ++it)
      mass_colsum[it.col()] += it.value();
  if (kind == StabKind::jn_sym) {
    const Eigen::VectorXd k_colsum = K.colwise().sum();
    for (int b = 0; b < nB; ++b)
      S[bnode_vol[b]] = 0.5 * mass_colsum[bnode_vol[b]] - k_colsum[b];
  } else {
    for (int b = 0; b < nB; ++b) S[bnode_vol[b]] = -mass_colsum[bnode_vol[b]];
  }
  S.tail(M) = A_slp.colwise().sum();
  return S;
}

GalerkinBlocks assemble_blocks(const VolumeMesh& mesh, const BoundaryMesh& bmesh,
                               const MaterialTensor& A, const QuadratureConfig& cfg,
                               bool with_hyp) {
  GalerkinBlocks g;
  g.N = mesh.num_nodes();
  g.M = bmesh.num_segments();
  g.nB = bmesh.num_nodes();
  g.bnode_vol = bmesh.vol_node;
  for (int b : g.bnode_vol)
    if (b < 0 || b >= g.N) throw ConfigError("assemble_blocks: boundary/volume meshes do not match");
  g.A_fem = assemble_fem_stiffness(mesh, A);
  g.A_slp = assemble_slp(bmesh, cfg);
  g.K = assemble_dlp(bmesh, cfg);
  Eigen::SparseMatrix<double> m = assemble_mass_trace(bmesh);
  m.conservativeResize(g.M, g.N);
  g.mass = m;
  if (with_hyp) g.A_hyp = assemble_hyp(bmesh, cfg);
  g.S_jn = assemble_stabilization(g.A_slp, g.K, g.mass, g.bnode_vol, g.N, StabKind::jn_sym);
  g.S_bmc = assemble_stabilization(g.A_slp, g.K, g.mass, g.bnode_vol, g.N, StabKind::bmc);
  return g;
}

void write_matrix(std::ostream& os, const Eigen::MatrixXd& m) {
  long nnz = 0;
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) ++nnz;
  os << "matrix " << m.rows() << " " << m.cols() << " " << nnz << "\n";
  os.precision(17);
  for (long j = 0; j < m.cols(); ++j)
    for (long i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) os << i << " " << j << " " << m(i, j) << "\n";
}

void write_matrix(std::ostream& os, const Eigen::SparseMatrix<double>& m) {
  os << "matrix " << m.rows() << " " << m.cols() << " " << m.nonZeros() << "\n";
  os.precision(17);
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(m, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

Eigen::MatrixXd read_matrix(std::istream& is) {
  std::string tag;
  long rows = 0, cols = 0, nnz = 0;
  is >> tag >> rows >> cols >> nnz;
  if (tag != "matrix" || !is) throw ConfigError("read_matrix: bad header");
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double v = 0.0;
    is >> i >> j >> v;
    if (!is) throw ConfigError("read_matrix: truncated data");
    m(i, j) = v;
  }
  return m;
}

}  // namespace fembem
