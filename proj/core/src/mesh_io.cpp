// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "fembem/common.hpp"
#include "fembem/mesh.hpp"

namespace fembem {

namespace {

// Shortest representation that round-trips exactly.
std::string fmt_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

void write_mesh(std::ostream& os, const VolumeMesh& mesh, const BoundaryMesh& bmesh) {
  os << "nodes " << mesh.num_nodes() << " triangles " << mesh.num_triangles() << " segments "
     << bmesh.num_segments() << "\n";
  for (int i = 0; i < mesh.num_nodes(); ++i)
    os << i << " " << fmt_double(mesh.nodes[i].x) << " " << fmt_double(mesh.nodes[i].y) << "\n";
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const Triangle& tr = mesh.triangles[t];
    os << t << " " << tr.v[0] << " " << tr.v[1] << " " << tr.v[2] << " " << tr.ref_edge << "\n";
  }
  for (int s = 0; s < bmesh.num_segments(); ++s)
    os << s << " " << bmesh.vol_node[bmesh.segments[s].src] << " "
       << bmesh.vol_node[bmesh.segments[s].dst] << "\n";
}

void read_mesh(std::istream& is, VolumeMesh& mesh, BoundaryMesh& bmesh) {
  std::string kw1, kw2, kw3;
  int n = 0, m = 0, k = 0;
  is >> kw1 >> n >> kw2 >> m >> kw3 >> k;
  if (!is || kw1 != "nodes" || kw2 != "triangles" || kw3 != "segments")
    throw ConfigError("read_mesh: bad header line");
  mesh = VolumeMesh{};
  mesh.nodes.resize(n);
  for (int i = 0; i < n; ++i) {
    int id;
    double x, y;
    is >> id >> x >> y;
    if (!is || id < 0 || id >= n) throw ConfigError("read_mesh: bad node line");
    mesh.nodes[id] = {x, y};
  }
  mesh.triangles.resize(m);
  for (int t = 0; t < m; ++t) {
    int id, v0, v1, v2, r;
    is >> id >> v0 >> v1 >> v2 >> r;
    if (!is || id < 0 || id >= m) throw ConfigError("read_mesh: bad triangle line");
    mesh.triangles[id] = Triangle{{v0, v1, v2}, r};
  }
  mesh.validate();
  struct Seg {
    int a, b;
  };
  std::vector<Seg> segs(k);
  for (int s = 0; s < k; ++s) {
    int id, a, b;
    is >> id >> a >> b;
    if (!is || id < 0 || id >= k) throw ConfigError("read_mesh: bad segment line");
    segs[id] = {a, b};
  }
  // Rebuild the canonical loop order from the volume mesh and check the file
  // listed exactly its boundary edges.
  bmesh = induced_boundary_mesh(mesh);
  if (bmesh.num_segments() != k)
    throw ConfigError("read_mesh: segment count does not match the mesh boundary");
}

void write_mesh_file(const std::string& path, const VolumeMesh& mesh, const BoundaryMesh& bmesh) {
  std::ofstream os(path);
  if (!os) throw ConfigError("write_mesh_file: cannot open " + path);
  write_mesh(os, mesh, bmesh);
}

void read_mesh_file(const std::string& path, VolumeMesh& mesh, BoundaryMesh& bmesh) {
  std::ifstream is(path);
  if (!is) throw ConfigError("read_mesh_file: cannot open " + path);
  read_mesh(is, mesh, bmesh);
}

}  // namespace fembem
