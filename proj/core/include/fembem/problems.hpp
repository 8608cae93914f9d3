// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <string>

#include "fembem/geometry.hpp"
#include "fembem/operators.hpp"

namespace fembem {

/// Transmission-problem data. When exact solutions are prescribed, u0 and
/// phi0 are derived from them and consistent by construction.
struct ProblemData {
  std::string name;
  MaterialTensor A = MaterialTensor::identity();
  std::function<double(Point2)> f;                  ///< volume source
  std::function<double(Point2)> u0;                 ///< jump of traces on Gamma
  std::function<double(Point2, Point2)> phi0;       ///< flux jump; (x, outward normal)
  std::function<double(Point2)> u_int;              ///< exact interior solution
  std::function<Point2(Point2)> grad_u_int;
  std::function<double(Point2)> u_ext;              ///< exact exterior solution
  std::function<Point2(Point2)> grad_u_ext;
};

/// Harmonic function r^{2/3} cos(2 phi / 3) with the generic gradient
/// singularity at the reentrant corner; g := u|_Gamma drives the
/// weakly-singular equation V phi = (1/2 + K) g.
ProblemData problem_weaksing();

/// Exact interior solution r^{2/3} cos(2 phi / 3) and exterior solution
/// (x + y - 0.125) / (10 ((x - 0.125)^2 + y^2)); f = 0, A = I. Throws if the
/// exterior pole (0.125, 0) is not inside the configured L-shape.
ProblemData problem_transmission();

}  // namespace fembem
