// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "fembem/geometry.hpp"
#include "fembem/mesh.hpp"
#include "fembem/quadrature.hpp"

namespace fembem {

// Fundamental solution of the 2D Laplacian: G(x,y) = -(1/2pi) log|x-y|, with
// normal-derivative kernel dG/dn(y) = (x-y).n(y) / (2pi |x-y|^2).

/// Segment with orientation and outward unit normal.
struct SegmentGeom {
  Point2 a, b;
  Point2 dir;     ///< unit direction (b - a)/|b - a|
  Point2 normal;  ///< unit normal (dir.y, -dir.x); outward for CCW loops
  double len = 0.0;
};

SegmentGeom make_segment(Point2 a, Point2 b);
SegmentGeom segment_geom(const BoundaryMesh& bm, int s);

/// integral over the segment of log|x-y| dy (analytic antiderivative;
/// integrable singularity when x lies on the segment).
double log_kernel_inner(Point2 x, const SegmentGeom& s);

/// Single-layer potential of the characteristic density of s at x.
double slp_potential(Point2 x, const SegmentGeom& s);

/// integral over the segment of dG/dn(y) g(y) dy with g affine along the
/// segment (values ga at a, gb at b). Exactly zero when x is collinear.
double dlp_inner_affine(Point2 x, const SegmentGeom& s, double ga, double gb);

/// Tangential derivative (direction t, |t| = 1) of the single-layer
/// potential of the characteristic density of s, at x. Principal value on
/// the segment itself.
double slp_potential_deriv(Point2 x, Point2 t, const SegmentGeom& s);

/// Tangential derivative of the double-layer potential contribution of
/// segment s with affine density, at x.
double dlp_inner_affine_deriv(Point2 x, Point2 t, const SegmentGeom& s, double ga, double gb);

/// Galerkin pair integral of the single-layer kernel,
///   integral over s x t of G(x,y) dy dx.
/// Identical pairs are evaluated in closed form; pairs sharing an endpoint
/// and near pairs use the analytic inner antiderivative with a graded outer
/// rule; far pairs use tensor Gauss. Symmetric under exchanging s and t.
double slp_pair_integral(const SegmentGeom& s, const SegmentGeom& t,
                         const QuadratureConfig& cfg);

/// Two-segment support of a boundary hat function with affine values.
struct HatSupport {
  SegmentGeom seg_in;   ///< hat rises 0 -> 1
  SegmentGeom seg_out;  ///< hat falls 1 -> 0
};

HatSupport hat_support(const BoundaryMesh& bm, int node);

/// integral over t of (K hat)(x) dx for a boundary hat function.
double dlp_pair_integral(const SegmentGeom& t, const HatSupport& hat,
                         const QuadratureConfig& cfg);

/// Principal-value evaluation of (K g)(x) for piecewise-affine g given by its
/// nodal values on bm. Throws if x coincides with a mesh node.
double dlp_potential_at(Point2 x, const BoundaryMesh& bm, const Eigen::VectorXd& g_nodal,
                        const QuadratureConfig& cfg);

/// (V phi)(x) for piecewise-constant phi on bm.
double slp_potential_at(Point2 x, const BoundaryMesh& bm, const Eigen::VectorXd& phi,
                        const QuadratureConfig& cfg);

/// Tangential derivative of (V phi)(x) in direction t.
double slp_potential_deriv_at(Point2 x, Point2 t, const BoundaryMesh& bm,
                              const Eigen::VectorXd& phi, const QuadratureConfig& cfg);

/// Tangential derivative of (K g)(x), g piecewise affine, in direction t.
double dlp_potential_deriv_at(Point2 x, Point2 t, const BoundaryMesh& bm,
                              const Eigen::VectorXd& g_nodal, const QuadratureConfig& cfg);

}  // namespace fembem
