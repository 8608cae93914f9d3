// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace fembem {

using LinOp = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct GmresConfig {
  double tol = 1e-6;   ///< relative tolerance on ||R||_P / ||R0||_P
  int max_iters = 0;   ///< 0 means the problem dimension
};

enum class GmresStop { converged, max_iters, failure };

struct GmresReport {
  Eigen::VectorXd solution;
  int iterations = 0;
  /// Relative residuals in the P-norm, starting with 1 for the initial
  /// residual, one entry appended per iteration.
  std::vector<double> relres_history;
  GmresStop reason = GmresStop::converged;

  double final_relres() const {
    return relres_history.empty() ? 1.0 : relres_history.back();
  }
};

/// Full GMRES in the inner product <.,.>_P, realized without ever applying P:
/// only apply_Pinv is used (auxiliary vectors Vtilde = P V turn every P-inner
/// product into a Euclidean one). Arnoldi by modified Gram-Schmidt, the small
/// least-squares problem by Givens rotations, and the stopping test uses the
/// recomputed true preconditioned residual. A vanishing Hessenberg
/// subdiagonal is a lucky breakdown and reported as converged.
GmresReport gmres_pfree(const LinOp& apply_A, const LinOp& apply_Pinv,
                        const Eigen::VectorXd& F, const Eigen::VectorXd& U0,
                        const GmresConfig& cfg);

/// Literal reference transcription with an explicit symmetric positive
/// definite P for all P-inner products; oracle twin of gmres_pfree for
/// desk-scale problems.
GmresReport gmres_reference(const Eigen::MatrixXd& A, const Eigen::MatrixXd& P,
                            const Eigen::VectorXd& F, const Eigen::VectorXd& U0,
                            const GmresConfig& cfg);

}  // namespace fembem
