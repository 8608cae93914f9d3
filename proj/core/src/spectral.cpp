// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/spectral.hpp"

#include <cmath>

#include "fembem/common.hpp"

namespace fembem {

SpectralReport cond_precond_sym(const PreconditionerHandle& P, const Eigen::MatrixXd& B) {
  const int n = static_cast<int>(B.rows());
  if (B.cols() != n || P.dim() != n)
    throw ConfigError("cond_precond_sym: dimension mismatch");
  Eigen::MatrixXd Pinv = densify_inverse(P);
  const double scale = Pinv.cwiseAbs().maxCoeff();
  if ((Pinv - Pinv.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw NumericalError("cond_precond_sym: densified P^{-1} is not symmetric");
  Pinv = 0.5 * (Pinv + Pinv.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(B);
  if (llt.info() != Eigen::Success)
    throw NumericalError("cond_precond_sym: B is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd C = L.transpose() * Pinv * L;  // similar to P^{-1} B
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (C + C.transpose()));
  if (eig.info() != Eigen::Success)
    throw NumericalError("cond_precond_sym: eigensolver failed");

  SpectralReport rep;
  rep.dim = n;
  rep.method = "dense congruence eigensolve";
  rep.lambda_min = eig.eigenvalues().minCoeff();
  rep.lambda_max = eig.eigenvalues().maxCoeff();
  if (!(rep.lambda_min > 0.0))
    throw NumericalError("cond_precond_sym: non-positive eigenvalue, P or B not SPD");
  rep.cond = rep.lambda_max / rep.lambda_min;
  return rep;
}

double cond2_estimate(const Eigen::MatrixXd& A) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) throw NumericalError("cond2_estimate: singular matrix");
  const Eigen::MatrixXd Ainv = lu.inverse();
  const double n1 = A.cwiseAbs().colwise().sum().maxCoeff();
  const double ninf = A.cwiseAbs().rowwise().sum().maxCoeff();
  const double i1 = Ainv.cwiseAbs().colwise().sum().maxCoeff();
  const double iinf = Ainv.cwiseAbs().rowwise().sum().maxCoeff();
  return std::sqrt(n1 * i1 * ninf * iinf);
}

GrowthBounds unpreconditioned_growth_bounds(int M, double h_max, double h_min) {
  GrowthBounds g;
  const double m = static_cast<double>(M);
  g.alpha = m * (h_max / h_min) * (h_max / h_min) * (1.0 + std::abs(std::log(m * h_max)));
  g.beta = m * (1.0 + std::abs(std::log(m * h_min))) * (1.0 + std::abs(std::log(h_min))) /
           (1.0 + std::abs(std::log(h_max)));
  return g;
}

}  // namespace fembem
