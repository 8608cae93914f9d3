// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/problems.hpp"

#include <cmath>

#include "fembem/common.hpp"
#include "fembem/mesh.hpp"

namespace fembem {

namespace {

double singular_u(Point2 p) {
  const double r = std::hypot(p.x, p.y);
  if (r == 0.0) return 0.0;
  const double phi = std::atan2(p.y, p.x);
  return std::pow(r, 2.0 / 3.0) * std::cos(2.0 * phi / 3.0);
}

Point2 singular_grad(Point2 p) {
  const double r = std::hypot(p.x, p.y);
  const double phi = std::atan2(p.y, p.x);
  const double c = (2.0 / 3.0) * std::pow(r, -1.0 / 3.0);
  const double ur = c * std::cos(2.0 * phi / 3.0);
  const double up = -c * std::sin(2.0 * phi / 3.0);  // (1/r) du/dphi
  return {ur * std::cos(phi) - up * std::sin(phi), ur * std::sin(phi) + up * std::cos(phi)};
}

constexpr double kPoleX = 0.125;

double exterior_u(Point2 p) {
  const double X = p.x - kPoleX;
  const double d2 = X * X + p.y * p.y;
  return 0.1 * (X + p.y) / d2;
}

Point2 exterior_grad(Point2 p) {
  const double X = p.x - kPoleX;
  const double y = p.y;
  const double d2 = X * X + y * y;
  const double s = X + y;
  return {0.1 * (d2 - 2.0 * X * s) / (d2 * d2), 0.1 * (d2 - 2.0 * y * s) / (d2 * d2)};
}

bool inside_lshape(Point2 p) {
  const double a = lshape_half_width();
  if (std::abs(p.x) >= a || std::abs(p.y) >= a) return false;
  return !(p.x <= 0.0 && p.y <= 0.0);
}

}  // namespace

ProblemData problem_weaksing() {
  ProblemData d;
  d.name = "weaksing";
  d.f = [](Point2) { return 0.0; };
  d.u_int = singular_u;
  d.grad_u_int = singular_grad;
  d.u0 = singular_u;  // Dirichlet trace g
  d.phi0 = [](Point2 x, Point2 n) { return dot(singular_grad(x), n); };
  return d;
}

ProblemData problem_transmission() {
  if (!inside_lshape({kPoleX, 0.0}))
    throw ConfigError("problem_transmission: exterior pole (0.125, 0) outside Omega");
  ProblemData d;
  d.name = "transmission";
  d.f = [](Point2) { return 0.0; };  // interior solution is harmonic
  d.u_int = singular_u;
  d.grad_u_int = singular_grad;
  d.u_ext = exterior_u;
  d.grad_u_ext = exterior_grad;
  d.u0 = [](Point2 p) { return singular_u(p) - exterior_u(p); };
  d.phi0 = [](Point2 x, Point2 n) {
    return dot(singular_grad(x) - exterior_grad(x), n);
  };
  return d;
}

}  // namespace fembem
