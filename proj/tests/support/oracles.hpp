// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

// Test-only oracles, independent of the library's computational paths.

#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "fembem/geometry.hpp"
#include "fembem/mesh.hpp"

namespace fembem::test {

// Brute-force hanging-node detector: counts nodes lying strictly inside some
// triangle edge, plus edges owned by more than two triangles.
inline int conformity_violations(const VolumeMesh& m) {
  int bad = 0;
  std::map<std::pair<int, int>, int> owners;
  for (const Triangle& t : m.triangles)
    for (int r = 0; r < 3; ++r) {
      const int a = t.v[r], b = t.v[(r + 1) % 3];
      ++owners[{std::min(a, b), std::max(a, b)}];
    }
  for (const auto& [e, n] : owners)
    if (n > 2) ++bad;
  for (int z = 0; z < m.num_nodes(); ++z) {
    for (const auto& [e, n] : owners) {
      if (e.first == z || e.second == z) continue;
      const Point2 a = m.nodes[e.first], b = m.nodes[e.second], p = m.nodes[z];
      const double len = dist(a, b);
      if (point_segment_distance(p, a, b) < 1e-12 * len &&
          dist(p, a) > 1e-12 * len && dist(p, b) > 1e-12 * len)
        ++bad;
    }
  }
  return bad;
}

// Patch area of a node: sum of areas of triangles containing it.
inline double patch_area(const VolumeMesh& m, int node) {
  double area = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const Triangle& tr = m.triangles[t];
    if (tr.v[0] == node || tr.v[1] == node || tr.v[2] == node) area += m.area(t);
  }
  return area;
}

// Adaptive Simpson quadrature, tolerance-driven.
namespace detail {
inline double simpson(const std::function<double(double)>& f, double a, double b, double fa,
                      double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adapt_rec(const std::function<double(double)>& f, double a, double b, double fa,
                        double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(f, a, m, fa, flm, fm);
  const double right = simpson(f, m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adapt_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adapt_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_quad(const std::function<double(double)>& f, double a, double b,
                            double tol = 1e-13, int depth = 48) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = detail::simpson(f, a, b, fa, fm, fb);
  return detail::adapt_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Double integral of G(x,y) = -(1/2pi) log|x-y| over a pair of segments by
// nested adaptive quadrature (disjoint segments only).
inline double slp_pair_oracle(Point2 sa, Point2 sb, Point2 ta, Point2 tb, double tol = 1e-14) {
  const double Ls = dist(sa, sb), Lt = dist(ta, tb);
  const auto outer = [&](double u) {
    const Point2 x = sa + u * (sb - sa);
    const auto inner = [&](double v) {
      const Point2 y = ta + v * (tb - ta);
      return std::log(dist(x, y));
    };
    return Lt * adaptive_quad(inner, 0.0, 1.0, tol);
  };
  return -0.5 * M_1_PI * Ls * adaptive_quad(outer, 0.0, 1.0, tol);
}

// Central-difference Laplacian.
inline double fd_laplacian(const std::function<double(Point2)>& f, Point2 p, double h = 1e-4) {
  return (f({p.x + h, p.y}) + f({p.x - h, p.y}) + f({p.x, p.y + h}) + f({p.x, p.y - h}) -
          4.0 * f(p)) /
         (h * h);
}

inline std::mt19937& rng() {
  static std::mt19937 gen(20240817u);
  return gen;
}

}  // namespace fembem::test
