// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>

namespace fembem {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
  friend Point2 operator*(Point2 a, double s) { return s * a; }
  friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 midpoint(Point2 a, Point2 b) { return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}; }

/// Rotate by +90 degrees.
inline Point2 perp(Point2 a) { return {-a.y, a.x}; }

/// Twice the signed area of the triangle (a, b, c); positive for CCW order.
inline double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

/// Distance from point p to the closed segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// Minimal distance between two closed segments.
double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1);

}  // namespace fembem
