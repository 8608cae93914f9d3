// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "fembem/common.hpp"

namespace fembem {

namespace {

constexpr double kTwoPiInv = 0.5 * M_1_PI;

// Local coordinates of x relative to a segment: p along the direction,
// qn signed distance to the line. qn below the collinearity threshold is
// snapped to zero so that on-segment quadrature points see the exact
// principal value instead of a jump of the double-layer kernel.
struct LocalCoords {
  double p, qn;
};

LocalCoords local_coords(Point2 x, const SegmentGeom& s) {
  const Point2 w = x - s.a;
  double qn = dot(w, s.normal);
  const double scale = s.len + norm(w);
  if (std::abs(qn) <= 1e-13 * scale) qn = 0.0;
  return {dot(w, s.dir), qn};
}

// Antiderivative of log sqrt(t^2 + q^2).
double log_antideriv(double t, double q) {
  if (t == 0.0 && q == 0.0) return 0.0;
  double v = 0.5 * t * std::log(t * t + q * q) - t;
  if (q != 0.0) v += q * std::atan(t / q);
  return v;
}

// atan((L-p)/qn) - atan(-p/qn); zero in the collinear limit.
double atan_span(double L, double p, double qn) {
  if (qn == 0.0) return 0.0;
  return std::atan((L - p) / qn) - std::atan(-p / qn);
}

// log((L-p)^2+qn^2) - log(p^2+qn^2).
double log_span(double L, double p, double qn) {
  const double r1 = (L - p) * (L - p) + qn * qn;
  const double r0 = p * p + qn * qn;
  if (r1 == 0.0 || r0 == 0.0) throw NumericalError("log_span: evaluation at a segment endpoint");
  return std::log(r1) - std::log(r0);
}

bool same_point(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

bool same_segment(const SegmentGeom& s, const SegmentGeom& t) {
  return (same_point(s.a, t.a) && same_point(s.b, t.b)) ||
         (same_point(s.a, t.b) && same_point(s.b, t.a));
}

bool shares_endpoint(const SegmentGeom& s, const SegmentGeom& t) {
  return same_point(s.a, t.a) || same_point(s.a, t.b) || same_point(s.b, t.a) ||
         same_point(s.b, t.b);
}

std::tuple<double, double, double, double> seg_key(const SegmentGeom& s) {
  const bool ab = (s.a.x < s.b.x) || (s.a.x == s.b.x && s.a.y < s.b.y);
  const Point2 lo = ab ? s.a : s.b;
  const Point2 hi = ab ? s.b : s.a;
  return {lo.x, lo.y, hi.x, hi.y};
}

}  // namespace

SegmentGeom make_segment(Point2 a, Point2 b) {
  SegmentGeom s;
  s.a = a;
  s.b = b;
  s.len = dist(a, b);
  if (s.len <= 0.0) throw ConfigError("make_segment: zero-length segment");
  s.dir = (1.0 / s.len) * (b - a);
  s.normal = {s.dir.y, -s.dir.x};
  return s;
}

SegmentGeom segment_geom(const BoundaryMesh& bm, int s) {
  return make_segment(bm.nodes[bm.segments[s].src], bm.nodes[bm.segments[s].dst]);
}

double log_kernel_inner(Point2 x, const SegmentGeom& s) {
  const auto [p, qn] = local_coords(x, s);
  return log_antideriv(s.len - p, qn) - log_antideriv(-p, qn);
}

double slp_potential(Point2 x, const SegmentGeom& s) {
  return -kTwoPiInv * log_kernel_inner(x, s);
}

double dlp_inner_affine(Point2 x, const SegmentGeom& s, double ga, double gb) {
  const auto [p, qn] = local_coords(x, s);
  if (qn == 0.0) return 0.0;
  const double slope = (gb - ga) / s.len;
  return kTwoPiInv * ((ga + slope * p) * atan_span(s.len, p, qn) +
                      0.5 * slope * qn * log_span(s.len, p, qn));
}

double slp_potential_deriv(Point2 x, Point2 t, const SegmentGeom& s) {
  const auto [p, qn] = local_coords(x, s);
  // d/dp of the inner log integral and d/dqn; gradients of p and qn are the
  // segment direction resp. normal.
  const double dI_dp = -0.5 * log_span(s.len, p, qn);
  const double dI_dq = atan_span(s.len, p, qn);
  return -kTwoPiInv * (dI_dp * dot(t, s.dir) + dI_dq * dot(t, s.normal));
}

double dlp_inner_affine_deriv(Point2 x, Point2 t, const SegmentGeom& s, double ga, double gb) {
  const auto [p, qn] = local_coords(x, s);
  if (qn == 0.0) return 0.0;
  const double L = s.len;
  const double slope = (gb - ga) / L;
  const double r1 = (L - p) * (L - p) + qn * qn;
  const double r0 = p * p + qn * qn;
  const double A = atan_span(L, p, qn);
  const double Lg = log_span(L, p, qn);
  const double dA_dp = -qn / r1 + qn / r0;
  const double dA_dq = -(L - p) / r1 - p / r0;
  const double dLg_dp = -2.0 * (L - p) / r1 - 2.0 * p / r0;
  const double dLg_dq = 2.0 * qn / r1 - 2.0 * qn / r0;
  const double dJ_dp =
      kTwoPiInv * (slope * A + (ga + slope * p) * dA_dp + 0.5 * slope * qn * dLg_dp);
  const double dJ_dq = kTwoPiInv * ((ga + slope * p) * dA_dq + 0.5 * slope * Lg +
                                    0.5 * slope * qn * dLg_dq);
  return dJ_dp * dot(t, s.dir) + dJ_dq * dot(t, s.normal);
}

double slp_pair_integral(const SegmentGeom& s, const SegmentGeom& t,
                         const QuadratureConfig& cfg) {
  if (s.len <= 0.0 || t.len <= 0.0)
    throw ConfigError("slp_pair_integral: zero-length segment");
  if (same_segment(s, t)) {
    const double h = s.len;
    return kTwoPiInv * h * h * (1.5 - std::log(h));
  }
  // Canonical operand order makes the value exactly symmetric in (s, t).
  const SegmentGeom* outer = &s;
  const SegmentGeom* inner = &t;
  if (seg_key(t) < seg_key(s)) std::swap(outer, inner);

  const auto point_on = [&](double u) { return outer->a + u * (outer->b - outer->a); };
  if (shares_endpoint(*outer, *inner)) {
    const bool at_a = same_point(outer->a, inner->a) || same_point(outer->a, inner->b);
    const auto panels = graded_panels(1.0, at_a, !at_a);
    const auto f = [&](double u) { return log_kernel_inner(point_on(u), *inner); };
    return -kTwoPiInv * outer->len * integrate_panels(f, panels, cfg.gauss_order);
  }
  const double d = segment_segment_distance(s.a, s.b, t.a, t.b);
  if (d <= 0.5 * std::max(s.len, t.len)) {
    const auto panels = graded_panels(1.0, true, true);
    const auto f = [&](double u) { return log_kernel_inner(point_on(u), *inner); };
    return -kTwoPiInv * outer->len * integrate_panels(f, panels, cfg.gauss_order);
  }
  // Disjoint, well-separated: tensor Gauss on the smooth kernel.
  const GaussRule& gr = gauss_legendre(cfg.gauss_order);
  double sum = 0.0;
  for (size_t i = 0; i < gr.x.size(); ++i) {
    const Point2 x = point_on(gr.x[i]);
    double row = 0.0;
    for (size_t j = 0; j < gr.x.size(); ++j) {
      const Point2 y = inner->a + gr.x[j] * (inner->b - inner->a);
      row += gr.w[j] * std::log(dist(x, y));
    }
    sum += gr.w[i] * row;
  }
  return -kTwoPiInv * outer->len * inner->len * sum;
}

HatSupport hat_support(const BoundaryMesh& bm, int node) {
  return {segment_geom(bm, bm.seg_in(node)), segment_geom(bm, bm.seg_out(node))};
}

double dlp_pair_integral(const SegmentGeom& t, const HatSupport& hat,
                         const QuadratureConfig& cfg) {
  if (t.len <= 0.0) throw ConfigError("dlp_pair_integral: zero-length segment");
  const auto touches = [&](Point2 e) {
    return same_point(e, hat.seg_in.a) || same_point(e, hat.seg_in.b) ||
           same_point(e, hat.seg_out.a) || same_point(e, hat.seg_out.b);
  };
  const auto panels = graded_panels(1.0, touches(t.a), touches(t.b));
  const auto f = [&](double u) {
    const Point2 x = t.a + u * (t.b - t.a);
    return dlp_inner_affine(x, hat.seg_in, 0.0, 1.0) +
           dlp_inner_affine(x, hat.seg_out, 1.0, 0.0);
  };
  return t.len * integrate_panels(f, panels, cfg.gauss_order);
}

double dlp_potential_at(Point2 x, const BoundaryMesh& bm, const Eigen::VectorXd& g_nodal,
                        const QuadratureConfig&) {
  for (const Point2& n : bm.nodes)
    if (same_point(x, n)) throw ConfigError("dlp_potential_at: x coincides with a mesh node");
  double sum = 0.0;
  for (int s = 0; s < bm.num_segments(); ++s)
    sum += dlp_inner_affine(x, segment_geom(bm, s), g_nodal[bm.segments[s].src],
                            g_nodal[bm.segments[s].dst]);
  return sum;
}

double slp_potential_at(Point2 x, const BoundaryMesh& bm, const Eigen::VectorXd& phi,
                        const QuadratureConfig&) {
  double sum = 0.0;
  for (int s = 0; s < bm.num_segments(); ++s) sum += phi[s] * slp_potential(x, segment_geom(bm, s));
  return sum;
}

double slp_potential_deriv_at(Point2 x, Point2 t, const BoundaryMesh& bm,
                              const Eigen::VectorXd& phi, const QuadratureConfig&) {
  double sum = 0.0;
  for (int s = 0; s < bm.num_segments(); ++s)
    sum += phi[s] * slp_potential_deriv(x, t, segment_geom(bm, s));
  return sum;
}

double dlp_potential_deriv_at(Point2 x, Point2 t, const BoundaryMesh& bm,
                              const Eigen::VectorXd& g_nodal, const QuadratureConfig&) {
  double sum = 0.0;
  for (int s = 0; s < bm.num_segments(); ++s)
    sum += dlp_inner_affine_deriv(x, t, segment_geom(bm, s), g_nodal[bm.segments[s].src],
                                  g_nodal[bm.segments[s].dst]);
  return sum;
}

}  // namespace fembem
