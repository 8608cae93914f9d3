// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <string>

#include "fembem/precond.hpp"

namespace fembem {

struct SpectralReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double cond = 0.0;
  std::string method;
  int dim = 0;
};

/// Extremal generalized eigenvalues of P^{-1} B for an SPD-inducing handle P
/// and SPD matrix B, via a dense congruence L^T P^{-1} L with B = L L^T.
/// Since P^{-1} B is self-adjoint in both the B- and the P-inner product,
/// lambda_max/lambda_min equals cond_B(P^{-1}B) = cond_P(P^{-1}B). Throws on
/// symmetry or positivity violations.
SpectralReport cond_precond_sym(const PreconditionerHandle& P, const Eigen::MatrixXd& B);

/// sqrt(cond_1(A) cond_1(A^T)) with the 1-norm condition numbers computed
/// exactly from the dense inverse; upper bound for the 2-norm condition.
double cond2_estimate(const Eigen::MatrixXd& A);

struct GrowthBounds {
  double alpha = 0.0;  ///< bound for cond_2 of the unpreconditioned matrix
  double beta = 0.0;   ///< bound for the diagonally scaled matrix
};

/// alpha_L = M (h_max/h_min)^2 (1 + |log(M h_max)|),
/// beta_L  = M (1 + |log(M h_min)|)(1 + |log h_min|)/(1 + |log h_max|).
GrowthBounds unpreconditioned_growth_bounds(int M, double h_max, double h_min);

}  // namespace fembem
