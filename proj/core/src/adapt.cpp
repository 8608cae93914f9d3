// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "fembem/common.hpp"
#include "fembem/kernels.hpp"

namespace fembem {

namespace {

// L2 norm squared over a segment of a residual derivative with possible
// endpoint log singularities: graded panels toward both endpoints.
template <class F>
double seg_l2sq(const SegmentGeom& sg, const F& deriv, int order) {
  const auto panels = graded_panels(1.0, true, true, 30);
  const auto f = [&](double u) {
    const Point2 x = sg.a + u * (sg.b - sg.a);
    const double r = deriv(x);
    return r * r;
  };
  return sg.len * integrate_panels(f, panels, order);
}

}  // namespace

IndicatorField estimate_weaksing(const BoundaryMesh& bmesh, const Eigen::VectorXd& phi_h,
                                 const Eigen::VectorXd& g_nodal, const QuadratureConfig& cfg) {
  const int M = bmesh.num_segments();
  IndicatorField out;
  out.boundary.resize(M);
  for (int s = 0; s < M; ++s) {
    const SegmentGeom sg = segment_geom(bmesh, s);
    const double g_slope =
        (g_nodal[bmesh.segments[s].dst] - g_nodal[bmesh.segments[s].src]) / sg.len;
    const auto deriv = [&](Point2 x) {
      return slp_potential_deriv_at(x, sg.dir, bmesh, phi_h, cfg) - 0.5 * g_slope -
             dlp_potential_deriv_at(x, sg.dir, bmesh, g_nodal, cfg);
    };
    out.boundary[s] = sg.len * seg_l2sq(sg, deriv, cfg.gauss_order);
  }
  return out;
}

IndicatorField estimate_coupling(const VolumeMesh& mesh, const BoundaryMesh& bmesh,
                                 const GalerkinBlocks& blocks, const ProblemData& problem,
                                 const Eigen::VectorXd& solution, const QuadratureConfig& cfg,
                                 CouplingKind kind) {
  const int N = blocks.N;
  const int M = blocks.M;
  const auto u = solution.head(N);
  const auto phi = solution.tail(M);

  // Per-triangle flux A grad u_h (constant).
  std::vector<Point2> flux(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    const double area = mesh.area(t);
    Point2 g{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      const Point2 gi = (1.0 / (2.0 * area)) *
                        perp(mesh.nodes[tr.v[(i + 2) % 3]] - mesh.nodes[tr.v[(i + 1) % 3]]);
      g = g + u[tr.v[i]] * gi;
    }
    const Eigen::Matrix2d At = problem.A.value(mesh.centroid(t));
    Eigen::Vector2d gv;
    gv << g.x, g.y;
    const Eigen::Vector2d fv = At * gv;
    flux[t] = {fv[0], fv[1]};
  }

  // Interior edge -> owning triangles.
  std::map<std::pair<int, int>, std::vector<int>> edge_owner;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    for (int r = 0; r < 3; ++r) {
      const int a = tr.v[r], b = tr.v[(r + 1) % 3];
      edge_owner[{std::min(a, b), std::max(a, b)}].push_back(t);
    }
  }

  IndicatorField out;
  out.volume = Eigen::VectorXd::Zero(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    const double hT = mesh.diameter(t);
    double eta = 0.0;
    if (problem.f) {
      const double w = mesh.area(t) / 3.0;
      double f2 = 0.0;
      for (int r = 0; r < 3; ++r) {
        const double fm =
            problem.f(midpoint(mesh.nodes[tr.v[r]], mesh.nodes[tr.v[(r + 1) % 3]]));
        f2 += w * fm * fm;
      }
      eta += hT * hT * f2;
    }
    for (int r = 0; r < 3; ++r) {
      const int a = tr.v[r], b = tr.v[(r + 1) % 3];
      const auto& owners = edge_owner.at({std::min(a, b), std::max(a, b)});
      if (owners.size() != 2) continue;  // boundary edge, handled below
      const int other = owners[0] == t ? owners[1] : owners[0];
      const Point2 e = mesh.nodes[b] - mesh.nodes[a];
      const double elen = norm(e);
      const Point2 n{e.y / elen, -e.x / elen};
      const double jump = dot(flux[t] - flux[other], n);
      eta += hT * elen * jump * jump;
    }
    out.volume[t] = eta;
  }

  // Boundary residuals of the second coupling equation plus the flux
  // mismatch of the first one.
  std::map<std::pair<int, int>, int> bnd_owner;
  for (const auto& e : mesh.boundary_edges())
    bnd_owner[{std::min(e[0], e[1]), std::max(e[0], e[1])}] = e[2];

  Eigen::VectorXd w_nodal(blocks.nB);  // u_h|_Gamma - I_h u0 at boundary nodes
  for (int b = 0; b < blocks.nB; ++b) {
    const double u0v = problem.u0 ? problem.u0(bmesh.nodes[b]) : 0.0;
    w_nodal[b] = u[blocks.bnode_vol[b]] - u0v;
  }

  out.boundary = Eigen::VectorXd::Zero(M);
  const GaussRule& gr = gauss_legendre(cfg.gauss_order);
  for (int s = 0; s < M; ++s) {
    const SegmentGeom sg = segment_geom(bmesh, s);
    const double hS = sg.len;
    const double w_slope =
        (w_nodal[bmesh.segments[s].dst] - w_nodal[bmesh.segments[s].src]) / sg.len;
    const bool bmc = kind == CouplingKind::bielak_maccamy;
    const auto deriv = [&](Point2 x) {
      const double v = slp_potential_deriv_at(x, sg.dir, bmesh, phi, cfg);
      if (bmc) return v - w_slope;
      return v + 0.5 * w_slope - dlp_potential_deriv_at(x, sg.dir, bmesh, w_nodal, cfg);
    };
    double eta = hS * seg_l2sq(sg, deriv, cfg.gauss_order);

    const int va = bmesh.vol_node[bmesh.segments[s].src];
    const int vb = bmesh.vol_node[bmesh.segments[s].dst];
    const int owner = bnd_owner.at({std::min(va, vb), std::max(va, vb)});
    const double fn = dot(flux[owner], sg.normal);
    double mismatch = 0.0;
    for (size_t i = 0; i < gr.x.size(); ++i) {
      const Point2 x = sg.a + gr.x[i] * (sg.b - sg.a);
      const double p0 = problem.phi0 ? problem.phi0(x, sg.normal) : 0.0;
      const double r = fn - phi[s] - p0;
      mismatch += gr.w[i] * sg.len * r * r;
    }
    eta += hS * mismatch;
    out.boundary[s] = eta;
  }
  return out;
}

std::vector<int> mark_doerfler(const Eigen::VectorXd& eta_sq, double theta) {
  if (!(theta > 0.0) || theta > 1.0) throw ConfigError("mark_doerfler: theta out of (0, 1]");
  const int n = static_cast<int>(eta_sq.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (eta_sq[a] != eta_sq[b]) return eta_sq[a] > eta_sq[b];
    return a < b;
  });
  const double total = eta_sq.sum();
  std::vector<int> marked;
  double acc = 0.0;
  for (int i : idx) {
    if (acc >= theta * total * (1.0 - 1e-12)) break;
    if (eta_sq[i] <= 0.0) break;
    marked.push_back(i);
    acc += eta_sq[i];
  }
  std::sort(marked.begin(), marked.end());
  return marked;
}

std::pair<std::vector<int>, std::vector<int>> mark_doerfler_combined(const IndicatorField& ind,
                                                                     double theta) {
  const int nv = static_cast<int>(ind.volume.size());
  const int nb = static_cast<int>(ind.boundary.size());
  Eigen::VectorXd all(nv + nb);
  if (nv) all.head(nv) = ind.volume;
  if (nb) all.tail(nb) = ind.boundary;
  std::vector<int> vol, bnd;
  for (int i : mark_doerfler(all, theta)) {
    if (i < nv)
      vol.push_back(i);
    else
      bnd.push_back(i - nv);
  }
  return {vol, bnd};
}

std::pair<std::vector<int>, std::vector<int>> mark_corner(const VolumeMesh& mesh,
                                                          const BoundaryMesh& bmesh) {
  bool vertex = false;
  for (const Point2& p : mesh.nodes) vertex = vertex || (p.x == 0.0 && p.y == 0.0);
  if (!vertex) throw ConfigError("mark_corner: origin is not a mesh vertex");

  const auto contains_origin = [](Point2 a, Point2 b, Point2 c) {
    const double s1 = signed_area2(a, b, {0.0, 0.0});
    const double s2 = signed_area2(b, c, {0.0, 0.0});
    const double s3 = signed_area2(c, a, {0.0, 0.0});
    return s1 >= 0.0 && s2 >= 0.0 && s3 >= 0.0;  // CCW triangles
  };
  std::vector<int> vol;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    if (contains_origin(mesh.nodes[tr.v[0]], mesh.nodes[tr.v[1]], mesh.nodes[tr.v[2]]))
      vol.push_back(t);
  }
  std::vector<int> bnd;
  for (int s = 0; s < bmesh.num_segments(); ++s) {
    const Point2 a = bmesh.nodes[bmesh.segments[s].src];
    const Point2 b = bmesh.nodes[bmesh.segments[s].dst];
    if (point_segment_distance({0.0, 0.0}, a, b) == 0.0) bnd.push_back(s);
  }
  return {vol, bnd};
}

}  // namespace fembem
