// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <utility>

#include "fembem/common.hpp"

namespace fembem {

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 d = b - a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return dist(p, a);
  double t = dot(p - a, d) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return dist(p, a + t * d);
}

double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
  // Proper intersection test via orientations, else endpoint-to-segment.
  const double d1 = signed_area2(b0, b1, a0);
  const double d2 = signed_area2(b0, b1, a1);
  const double d3 = signed_area2(a0, a1, b0);
  const double d4 = signed_area2(a0, a1, b1);
  if (((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0))) return 0.0;
  double d = point_segment_distance(a0, b0, b1);
  d = std::min(d, point_segment_distance(a1, b0, b1));
  d = std::min(d, point_segment_distance(b0, a0, a1));
  d = std::min(d, point_segment_distance(b1, a0, a1));
  return d;
}

namespace {

using EdgeKey = std::pair<int, int>;

EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

EdgeKey local_edge(const Triangle& t, int r) {
  return edge_key(t.v[r], t.v[(r + 1) % 3]);
}

}  // namespace

double VolumeMesh::area(int t) const {
  const Triangle& tr = triangles[t];
  return 0.5 * signed_area2(nodes[tr.v[0]], nodes[tr.v[1]], nodes[tr.v[2]]);
}

double VolumeMesh::diameter(int t) const {
  const Triangle& tr = triangles[t];
  double d = 0.0;
  for (int r = 0; r < 3; ++r)
    d = std::max(d, dist(nodes[tr.v[r]], nodes[tr.v[(r + 1) % 3]]));
  return d;
}

Point2 VolumeMesh::centroid(int t) const {
  const Triangle& tr = triangles[t];
  return (1.0 / 3.0) * (nodes[tr.v[0]] + nodes[tr.v[1]] + nodes[tr.v[2]]);
}

std::vector<std::array<int, 3>> VolumeMesh::boundary_edges() const {
  std::map<EdgeKey, int> owners;
  for (const Triangle& t : triangles)
    for (int r = 0; r < 3; ++r) ++owners[local_edge(t, r)];
  std::vector<std::array<int, 3>> out;
  for (int t = 0; t < num_triangles(); ++t) {
    const Triangle& tr = triangles[t];
    for (int r = 0; r < 3; ++r) {
      if (owners.at(local_edge(tr, r)) == 1)
        out.push_back({tr.v[r], tr.v[(r + 1) % 3], t});
    }
  }
  return out;
}

void VolumeMesh::init_reference_edges() {
  for (Triangle& t : triangles) {
    int best = 0;
    double best_len = -1.0;
    int best_opp = -1;
    for (int r = 0; r < 3; ++r) {
      const double len = dist(nodes[t.v[r]], nodes[t.v[(r + 1) % 3]]);
      const int opp = t.v[(r + 2) % 3];
      if (len > best_len + 1e-14 * (best_len + len) ||
          (std::abs(len - best_len) <= 1e-14 * (best_len + len) && opp < best_opp)) {
        best = r;
        best_len = len;
        best_opp = opp;
      }
    }
    t.ref_edge = best;
  }
}

void VolumeMesh::validate() const {
  std::map<EdgeKey, int> owners;
  for (int t = 0; t < num_triangles(); ++t) {
    const Triangle& tr = triangles[t];
    for (int r = 0; r < 3; ++r) {
      if (tr.v[r] < 0 || tr.v[r] >= num_nodes())
        throw ConfigError("mesh: node id out of range");
      ++owners[local_edge(tr, r)];
    }
    if (tr.ref_edge < 0 || tr.ref_edge > 2)
      throw ConfigError("mesh: reference edge index out of range");
    if (area(t) <= 0.0) throw ConfigError("mesh: degenerate or misoriented triangle");
  }
  for (const auto& [e, n] : owners)
    if (n > 2) throw ConfigError("mesh: edge with more than two owners");
}

double shape_regularity(const VolumeMesh& mesh) {
  double sup = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const double a = mesh.area(t);
    if (a <= 0.0) throw ConfigError("shape_regularity: degenerate triangle");
    sup = std::max(sup, mesh.diameter(t) / std::sqrt(a));
  }
  return sup;
}

RefinementData refine_nvb_detailed(const VolumeMesh& mesh, const std::vector<int>& marked,
                                   NvbMarking mode) {
  for (int t : marked)
    if (t < 0 || t >= mesh.num_triangles())
      throw ConfigError("refine_nvb: invalid triangle id");

  RefinementData out;
  if (marked.empty()) {
    out.mesh = mesh;
    out.parent_triangle.resize(mesh.num_triangles());
    for (int t = 0; t < mesh.num_triangles(); ++t) out.parent_triangle[t] = t;
    return out;
  }

  std::set<EdgeKey> marked_edges;
  for (int t : marked) {
    const Triangle& tr = mesh.triangles[t];
    if (mode == NvbMarking::all_edges) {
      for (int r = 0; r < 3; ++r) marked_edges.insert(local_edge(tr, r));
    } else {
      marked_edges.insert(local_edge(tr, tr.ref_edge));
    }
  }

  // Closure: a triangle with any marked edge must have its reference edge
  // marked, so that the splits below stay conforming.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Triangle& t : mesh.triangles) {
      const EdgeKey ref = local_edge(t, t.ref_edge);
      if (marked_edges.count(ref)) continue;
      bool any = false;
      for (int r = 0; r < 3; ++r) any = any || marked_edges.count(local_edge(t, r)) > 0;
      if (any) {
        marked_edges.insert(ref);
        changed = true;
      }
    }
  }

  out.mesh.nodes = mesh.nodes;
  std::map<EdgeKey, int> midpoint_of;
  std::set<int> touched;
  // Midpoints in deterministic order: triangles by id, local edges by index.
  for (const Triangle& t : mesh.triangles) {
    for (int r = 0; r < 3; ++r) {
      const EdgeKey e = local_edge(t, r);
      if (!marked_edges.count(e) || midpoint_of.count(e)) continue;
      const int id = out.mesh.num_nodes();
      out.mesh.nodes.push_back(midpoint(mesh.nodes[e.first], mesh.nodes[e.second]));
      midpoint_of[e] = id;
      out.new_nodes.push_back(id);
      out.parent_edge.push_back({e.first, e.second});
      touched.insert(e.first);
      touched.insert(e.second);
    }
  }
  out.touched_nodes.assign(touched.begin(), touched.end());

  auto emit = [&out](int parent, int a, int b, int c) {
    out.mesh.triangles.push_back(Triangle{{a, b, c}, 0});
    out.parent_triangle.push_back(parent);
  };

  for (int tid = 0; tid < mesh.num_triangles(); ++tid) {
    const Triangle& t = mesh.triangles[tid];
    // Rotate so the reference edge is (a, b) with peak c.
    const int a = t.v[t.ref_edge];
    const int b = t.v[(t.ref_edge + 1) % 3];
    const int c = t.v[(t.ref_edge + 2) % 3];
    const bool m_ab = marked_edges.count(edge_key(a, b)) > 0;
    const bool m_ca = marked_edges.count(edge_key(c, a)) > 0;
    const bool m_bc = marked_edges.count(edge_key(b, c)) > 0;
    if (!m_ab) {
      out.mesh.triangles.push_back(t);
      out.parent_triangle.push_back(tid);
      continue;
    }
    const int m = midpoint_of.at(edge_key(a, b));
    // Son (c, a, m) has reference edge (c, a); son (b, c, m) has (b, c).
    if (m_ca) {
      const int m2 = midpoint_of.at(edge_key(c, a));
      emit(tid, m, c, m2);
      emit(tid, a, m, m2);
    } else {
      emit(tid, c, a, m);
    }
    if (m_bc) {
      const int m3 = midpoint_of.at(edge_key(b, c));
      emit(tid, m, b, m3);
      emit(tid, c, m, m3);
    } else {
      emit(tid, b, c, m);
    }
  }
  return out;
}

VolumeMesh refine_nvb(const VolumeMesh& mesh, const std::vector<int>& marked, NvbMarking mode) {
  return refine_nvb_detailed(mesh, marked, mode).mesh;
}

double BoundaryMesh::length(int s) const {
  return dist(nodes[segments[s].src], nodes[segments[s].dst]);
}

Point2 BoundaryMesh::tangent(int s) const {
  const Point2 d = nodes[segments[s].dst] - nodes[segments[s].src];
  return (1.0 / norm(d)) * d;
}

Point2 BoundaryMesh::normal(int s) const {
  const Point2 t = tangent(s);
  return {t.y, -t.x};
}

double BoundaryMesh::total_length() const {
  double sum = 0.0;
  for (int s = 0; s < num_segments(); ++s) sum += length(s);
  return sum;
}

double BoundaryMesh::h_min() const {
  double h = length(0);
  for (int s = 1; s < num_segments(); ++s) h = std::min(h, length(s));
  return h;
}

double BoundaryMesh::h_max() const {
  double h = length(0);
  for (int s = 1; s < num_segments(); ++s) h = std::max(h, length(s));
  return h;
}

int BoundaryMesh::seg_in(int z) const {
  for (int s = 0; s < num_segments(); ++s)
    if (segments[s].dst == z) return s;
  throw ConfigError("boundary mesh: node without incoming segment");
}

int BoundaryMesh::seg_out(int z) const {
  for (int s = 0; s < num_segments(); ++s)
    if (segments[s].src == z) return s;
  throw ConfigError("boundary mesh: node without outgoing segment");
}

double BoundaryMesh::gamma_ratio() const {
  double g = 1.0;
  for (int s = 0; s < num_segments(); ++s) {
    const double a = length(s);
    const double b = length(next(s));
    g = std::max(g, std::max(a / b, b / a));
  }
  return g;
}

void BoundaryMesh::validate() const {
  if (num_segments() < 3) throw ConfigError("boundary mesh: fewer than 3 segments");
  if (num_nodes() != num_segments())
    throw ConfigError("boundary mesh: node/segment count mismatch for a closed loop");
  for (int s = 0; s < num_segments(); ++s) {
    if (segments[s].dst != segments[next(s)].src)
      throw ConfigError("boundary mesh: segments are not in loop order");
    if (length(s) <= 0.0) throw ConfigError("boundary mesh: zero-length segment");
  }
}

BoundaryMesh induced_boundary_mesh(const VolumeMesh& mesh) {
  const auto edges = mesh.boundary_edges();
  if (edges.empty()) throw ConfigError("induced_boundary_mesh: mesh has no boundary");
  std::map<int, std::array<int, 2>> out_edge;  // src vol node -> (dst, count stub)
  for (const auto& e : edges) {
    if (out_edge.count(e[0]))
      throw ConfigError("induced_boundary_mesh: boundary is not a single loop");
    out_edge[e[0]] = {e[1], e[2]};
  }
  // Start at the smallest boundary volume-node id; walk the loop.
  const int start = out_edge.begin()->first;
  BoundaryMesh bm;
  std::map<int, int> vol2bnd;
  int cur = start;
  do {
    auto it = out_edge.find(cur);
    if (it == out_edge.end())
      throw ConfigError("induced_boundary_mesh: boundary is not a single loop");
    const int nxt = it->second[0];
    if (!vol2bnd.count(cur)) {
      vol2bnd[cur] = bm.num_nodes();
      bm.nodes.push_back(mesh.nodes[cur]);
      bm.vol_node.push_back(cur);
    }
    cur = nxt;
  } while (cur != start);
  if (vol2bnd.size() != out_edge.size())
    throw ConfigError("induced_boundary_mesh: boundary is not a single loop");
  for (int i = 0; i < bm.num_nodes(); ++i) {
    const int src = bm.vol_node[i];
    const int dst = out_edge.at(src)[0];
    bm.segments.push_back({i, vol2bnd.at(dst)});
  }
  bm.validate();
  return bm;
}

BoundaryRefinementData refine_boundary_detailed(const BoundaryMesh& bmesh,
                                                const std::vector<int>& marked) {
  const int M = bmesh.num_segments();
  for (int s : marked)
    if (s < 0 || s >= M) throw ConfigError("refine_boundary: invalid segment id");

  BoundaryRefinementData out;
  if (marked.empty()) {
    out.mesh = bmesh;
    out.parent_segment.resize(M);
    for (int s = 0; s < M; ++s) out.parent_segment[s] = s;
    return out;
  }

  std::vector<char> split(M, 0);
  for (int s : marked) split[s] = 1;
  // Ratio closure: refine a neighbour whenever bisection would push the
  // adjacent length ratio above 2.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < M; ++s) {
      const int t = bmesh.next(s);
      const double ls = bmesh.length(s) * (split[s] ? 0.5 : 1.0);
      const double lt = bmesh.length(t) * (split[t] ? 0.5 : 1.0);
      if (ls / lt > 2.0 && !split[s]) {
        split[s] = 1;
        changed = true;
      }
      if (lt / ls > 2.0 && !split[t]) {
        split[t] = 1;
        changed = true;
      }
    }
  }

  BoundaryMesh& fine = out.mesh;
  fine.nodes = bmesh.nodes;
  fine.vol_node = bmesh.vol_node;
  std::set<int> touched;
  for (int s = 0; s < M; ++s) {
    const auto seg = bmesh.segments[s];
    if (!split[s]) {
      fine.segments.push_back(seg);
      out.parent_segment.push_back(s);
      continue;
    }
    const int mid = fine.num_nodes();
    fine.nodes.push_back(midpoint(bmesh.nodes[seg.src], bmesh.nodes[seg.dst]));
    fine.vol_node.push_back(-1);
    fine.segments.push_back({seg.src, mid});
    fine.segments.push_back({mid, seg.dst});
    out.parent_segment.push_back(s);
    out.parent_segment.push_back(s);
    out.new_nodes.push_back(mid);
    touched.insert(seg.src);
    touched.insert(seg.dst);
  }
  out.touched_nodes.assign(touched.begin(), touched.end());
  fine.validate();
  return out;
}

BoundaryMesh refine_boundary(const BoundaryMesh& bmesh, const std::vector<int>& marked) {
  return refine_boundary_detailed(bmesh, marked).mesh;
}

BoundaryRefinementData refine_induced_boundary(const BoundaryMesh& coarse,
                                               const VolumeMesh& fine,
                                               const RefinementData& data) {
  // Fine boundary loop in volume-node ids.
  const auto edges = fine.boundary_edges();
  std::map<int, int> next_of;
  for (const auto& e : edges) {
    if (next_of.count(e[0]))
      throw ConfigError("refine_induced_boundary: boundary is not a single loop");
    next_of[e[0]] = e[1];
  }

  std::map<int, int> vol2bnd;  // coarse boundary nodes keep their ids
  for (int i = 0; i < coarse.num_nodes(); ++i) vol2bnd[coarse.vol_node[i]] = i;

  std::map<EdgeKey, int> coarse_seg_of;  // unordered vol-node pair -> coarse segment
  for (int s = 0; s < coarse.num_segments(); ++s)
    coarse_seg_of[edge_key(coarse.vol_node[coarse.segments[s].src],
                           coarse.vol_node[coarse.segments[s].dst])] = s;

  std::map<int, std::array<int, 2>> parent_of_new;  // new vol node -> parent edge
  for (size_t i = 0; i < data.new_nodes.size(); ++i)
    parent_of_new[data.new_nodes[i]] = data.parent_edge[i];

  BoundaryRefinementData out;
  BoundaryMesh& bm = out.mesh;
  bm.nodes = coarse.nodes;
  bm.vol_node = coarse.vol_node;

  const int start = coarse.vol_node[0];
  std::vector<std::array<int, 2>> loop;  // (src, dst) vol ids
  int cur = start;
  do {
    auto it = next_of.find(cur);
    if (it == next_of.end())
      throw ConfigError("refine_induced_boundary: boundary is not a single loop");
    loop.push_back({cur, it->second});
    cur = it->second;
  } while (cur != start);
  if (loop.size() != next_of.size())
    throw ConfigError("refine_induced_boundary: boundary is not a single loop");

  auto bnd_id = [&](int vol) {
    auto it = vol2bnd.find(vol);
    if (it != vol2bnd.end()) return it->second;
    const int id = bm.num_nodes();
    bm.nodes.push_back(fine.nodes[vol]);
    bm.vol_node.push_back(vol);
    vol2bnd[vol] = id;
    out.new_nodes.push_back(id);
    return id;
  };

  std::set<int> touched;
  for (const auto& [p, q] : loop) {
    // Parent segment: either the surviving coarse segment (p, q), or the
    // coarse segment bisected by whichever endpoint is a new node.
    int parent = -1;
    auto direct = coarse_seg_of.find(edge_key(p, q));
    if (direct != coarse_seg_of.end()) {
      parent = direct->second;
    } else {
      for (int v : {p, q}) {
        auto pe = parent_of_new.find(v);
        if (pe != parent_of_new.end()) {
          auto cs = coarse_seg_of.find(edge_key(pe->second[0], pe->second[1]));
          if (cs != coarse_seg_of.end()) parent = cs->second;
        }
      }
      if (parent < 0)
        throw ConfigError("refine_induced_boundary: cannot match segment to parent");
      touched.insert(coarse.segments[parent].src);
      touched.insert(coarse.segments[parent].dst);
    }
    const int bs = bnd_id(p);
    const int bd = bnd_id(q);
    bm.segments.push_back({bs, bd});
    out.parent_segment.push_back(parent);
  }
  out.touched_nodes.assign(touched.begin(), touched.end());
  bm.validate();
  return out;
}

double lshape_half_width() { return std::sqrt(2.0) / 6.0; }

VolumeMesh lshape_initial_mesh() {
  const double a = lshape_half_width();
  VolumeMesh m;
  m.nodes = {
      {0, 0},        // 0: reentrant corner
      {a, 0},        // 1
      {a, a},        // 2
      {0, a},        // 3
      {-a, a},       // 4
      {-a, 0},       // 5
      {0, -a},       // 6
      {a, -a},       // 7
      {a / 2, a / 2},    // 8:  centre of [0,a]^2
      {-a / 2, a / 2},   // 9:  centre of [-a,0]x[0,a]
      {a / 2, -a / 2},   // 10: centre of [0,a]x[-a,0]
  };
  auto tri = [](int p, int q, int c) { return Triangle{{p, q, c}, 0}; };
  m.triangles = {
      tri(0, 1, 8), tri(1, 2, 8), tri(2, 3, 8), tri(3, 0, 8),     // first quadrant
      tri(0, 3, 9), tri(3, 4, 9), tri(4, 5, 9), tri(5, 0, 9),     // second quadrant
      tri(0, 6, 10), tri(6, 7, 10), tri(7, 1, 10), tri(1, 0, 10),  // fourth quadrant
  };
  m.init_reference_edges();
  m.validate();
  return m;
}

}  // namespace fembem
