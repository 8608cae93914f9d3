// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "fembem/geometry.hpp"

namespace fembem {

/// Triangle with a designated reference edge. The local edge r is
/// (v[r], v[(r+1)%3]); newest vertex bisection always bisects the reference
/// edge first, and son reference edges end up opposite the newest vertex.
struct Triangle {
  std::array<int, 3> v{};
  int ref_edge = 0;
};

struct VolumeMesh {
  std::vector<Point2> nodes;
  std::vector<Triangle> triangles;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_triangles() const { return static_cast<int>(triangles.size()); }

  double area(int t) const;
  double diameter(int t) const;
  Point2 centroid(int t) const;

  /// Oriented boundary edges (src, dst) as they appear in the CCW order of
  /// their unique owning triangle, together with that owner's id.
  std::vector<std::array<int, 3>> boundary_edges() const;

  /// Assign reference edges: longest edge, ties broken by the lowest
  /// opposite-vertex id.
  void init_reference_edges();

  /// Throws if a triangle id is out of range, an area is non-positive, or an
  /// edge has more than two owners.
  void validate() const;
};

/// sup over triangles of diam(T) / |T|^{1/2}.
double shape_regularity(const VolumeMesh& mesh);

struct RefinementData {
  VolumeMesh mesh;
  /// Ids of nodes created by this call (they are appended, so all are
  /// >= the coarse node count).
  std::vector<int> new_nodes;
  /// For each new node, the coarse edge it bisects.
  std::vector<std::array<int, 2>> parent_edge;
  /// Coarse nodes that are endpoints of a bisected edge, i.e. the old nodes
  /// whose patch region strictly shrank.
  std::vector<int> touched_nodes;
  /// For each fine triangle, the id of its coarse parent.
  std::vector<int> parent_triangle;
};

/// Which edges a marked triangle contributes to the bisection marking:
/// all_edges splits marked triangles into 4 sons (the variant behind the
/// experiment mesh sequences), ref_edge bisects them once and yields the
/// minimal closure.
enum class NvbMarking { all_edges, ref_edge };

/// Newest vertex bisection: marked edges plus the closure (the reference edge
/// of any triangle with a marked edge is marked until a fixed point), then
/// each triangle splits into 2, 3, or 4 sons by iterated bisection. An empty
/// marked set returns the mesh unchanged.
RefinementData refine_nvb_detailed(const VolumeMesh& mesh, const std::vector<int>& marked,
                                   NvbMarking mode = NvbMarking::all_edges);
VolumeMesh refine_nvb(const VolumeMesh& mesh, const std::vector<int>& marked,
                      NvbMarking mode = NvbMarking::all_edges);

struct BoundarySegment {
  int src = -1;
  int dst = -1;
};

/// Closed polygonal boundary mesh. Segments are stored in loop order and CCW
/// (interior on the left), so the outward normal of a segment with direction
/// u is (u.y, -u.x).
struct BoundaryMesh {
  std::vector<Point2> nodes;
  /// Volume node id per boundary node (-1 for standalone meshes).
  std::vector<int> vol_node;
  std::vector<BoundarySegment> segments;

  int num_nodes() const { return static_cast<int>(nodes.size()); }
  int num_segments() const { return static_cast<int>(segments.size()); }

  double length(int s) const;
  Point2 tangent(int s) const;
  /// Outward unit normal.
  Point2 normal(int s) const;
  double total_length() const;
  double h_min() const;
  double h_max() const;

  int next(int s) const { return (s + 1) % num_segments(); }
  int prev(int s) const { return (s + num_segments() - 1) % num_segments(); }

  /// Segment arriving at node z (dst == z) resp. leaving it (src == z).
  int seg_in(int z) const;
  int seg_out(int z) const;

  /// Maximal length ratio of adjacent segments.
  double gamma_ratio() const;

  void validate() const;
};

/// Trace of the volume mesh on its boundary, ordered into a single CCW loop.
/// Throws if the boundary edges do not form one closed loop.
BoundaryMesh induced_boundary_mesh(const VolumeMesh& mesh);

struct BoundaryRefinementData {
  BoundaryMesh mesh;
  std::vector<int> new_nodes;
  std::vector<int> touched_nodes;
  /// For each fine segment, its coarse parent id.
  std::vector<int> parent_segment;
};

/// 1D bisection with local-ratio closure: a neighbour is refined whenever
/// bisection would push the adjacent length ratio above 2.
BoundaryRefinementData refine_boundary_detailed(const BoundaryMesh& bmesh,
                                                const std::vector<int>& marked);
BoundaryMesh refine_boundary(const BoundaryMesh& bmesh, const std::vector<int>& marked);

/// Induced boundary mesh of the fine volume mesh, keeping the coarse boundary
/// node ids (new nodes are appended in loop order). `data` is the volume
/// refinement that produced `fine`.
BoundaryRefinementData refine_induced_boundary(const BoundaryMesh& coarse,
                                               const VolumeMesh& fine,
                                               const RefinementData& data);

/// L-shaped domain (-a,a)^2 \ [-a,0]^2 with a = sqrt(2)/6, so that
/// diam(Omega) = 2/3 and the reentrant corner sits at the origin. 12
/// triangles, 8 induced boundary segments.
VolumeMesh lshape_initial_mesh();

/// Half the side length of the L-shape bounding box (sqrt(2)/6).
double lshape_half_width();

// Plain-text mesh format:
//   nodes <n> triangles <m> segments <k>
//   <id> <x> <y>            (one node per line, shortest round-trip decimals)
//   <id> <v0> <v1> <v2> <ref_edge>
//   <id> <v0> <v1>
void write_mesh(std::ostream& os, const VolumeMesh& mesh, const BoundaryMesh& bmesh);
void read_mesh(std::istream& is, VolumeMesh& mesh, BoundaryMesh& bmesh);
void write_mesh_file(const std::string& path, const VolumeMesh& mesh, const BoundaryMesh& bmesh);
void read_mesh_file(const std::string& path, VolumeMesh& mesh, BoundaryMesh& bmesh);

}  // namespace fembem
