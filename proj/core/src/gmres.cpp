// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/gmres.hpp"

#include <cmath>

#include "fembem/common.hpp"

namespace fembem {

namespace {

constexpr double kBreakdownFactor = 1e-14;

struct GivensLsq {
  // QR of the growing Hessenberg matrix by Givens rotations; columns of the
  // rotated upper-triangular factor are stored per iteration.
  std::vector<Eigen::VectorXd> cols;
  std::vector<double> cs, sn;
  std::vector<double> g;  // rotated right-hand side beta*e1

  explicit GivensLsq(double beta) { g.push_back(beta); }

  // h holds the new Hessenberg column with k+1 entries (k = cols.size()+1).
  void push_column(Eigen::VectorXd h) {
    const int k = static_cast<int>(cols.size());
    for (int i = 0; i < k; ++i) {
      const double t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const double r = std::hypot(h[k], h[k + 1]);
    const double c = r == 0.0 ? 1.0 : h[k] / r;
    const double s = r == 0.0 ? 0.0 : h[k + 1] / r;
    cs.push_back(c);
    sn.push_back(s);
    h[k] = r;
    h[k + 1] = 0.0;
    g.push_back(-s * g[k]);
    g[k] = c * g[k];
    cols.push_back(std::move(h));
  }

  Eigen::VectorXd solve() const {
    const int k = static_cast<int>(cols.size());
    Eigen::VectorXd y(k);
    for (int i = k - 1; i >= 0; --i) {
      double v = g[i];
      for (int j = i + 1; j < k; ++j) v -= cols[j][i] * y[j];
      y[i] = cols[i][i] == 0.0 ? 0.0 : v / cols[i][i];
    }
    return y;
  }
};

Eigen::VectorXd combine(const Eigen::VectorXd& U0, const std::vector<Eigen::VectorXd>& V,
                        const Eigen::VectorXd& y) {
  Eigen::VectorXd u = U0;
  for (int i = 0; i < y.size(); ++i) u += y[i] * V[i];
  return u;
}

}  // namespace

GmresReport gmres_pfree(const LinOp& apply_A, const LinOp& apply_Pinv,
                        const Eigen::VectorXd& F, const Eigen::VectorXd& U0,
                        const GmresConfig& cfg) {
  if (cfg.tol <= 0.0) throw ConfigError("gmres: tolerance must be positive");
  const int n = static_cast<int>(F.size());
  const int K = cfg.max_iters > 0 ? std::min(cfg.max_iters, n) : n;

  GmresReport rep;
  rep.solution = U0;

  // Initial residual: R0 = P^{-1}(F - A U0), ||R0||_P^2 = <R0, F - A U0>_2.
  Eigen::VectorXd r0_hat = F - apply_A(U0);
  Eigen::VectorXd r0 = apply_Pinv(r0_hat);
  const double beta = std::sqrt(std::max(r0.dot(r0_hat), 0.0));
  if (!std::isfinite(beta)) {
    rep.reason = GmresStop::failure;
    return rep;
  }
  if (beta == 0.0) {
    rep.relres_history.push_back(0.0);
    return rep;
  }
  rep.relres_history.push_back(1.0);

  std::vector<Eigen::VectorXd> Vt{r0_hat / beta};  // P V^i
  std::vector<Eigen::VectorXd> V{r0 / beta};
  GivensLsq lsq(beta);

  for (int k = 1; k <= K; ++k) {
    Eigen::VectorXd wt = apply_A(V[k - 1]);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(k + 1);
    for (int i = 0; i < k; ++i) {
      h[i] = wt.dot(V[i]);
      wt -= h[i] * Vt[i];
    }
    const Eigen::VectorXd w = apply_Pinv(wt);
    h[k] = std::sqrt(std::max(w.dot(wt), 0.0));
    const double subdiag = h[k];
    lsq.push_column(h);

    const Eigen::VectorXd y = lsq.solve();
    rep.solution = combine(U0, V, y);
    const Eigen::VectorXd res_hat = F - apply_A(rep.solution);
    const Eigen::VectorXd res = apply_Pinv(res_hat);
    const double relres = std::sqrt(std::max(res.dot(res_hat), 0.0)) / beta;
    rep.relres_history.push_back(relres);
    rep.iterations = k;
    if (!std::isfinite(relres)) {
      rep.reason = GmresStop::failure;
      return rep;
    }
    if (relres <= cfg.tol) {
      rep.reason = GmresStop::converged;
      return rep;
    }
    if (subdiag <= kBreakdownFactor * beta) {
      // Lucky breakdown: the Krylov space is invariant, solution exact.
      rep.reason = GmresStop::converged;
      return rep;
    }
    if (k == K) break;
    Vt.push_back(wt / subdiag);
    V.push_back(w / subdiag);
  }
  rep.reason = GmresStop::max_iters;
  return rep;
}

GmresReport gmres_reference(const Eigen::MatrixXd& A, const Eigen::MatrixXd& P,
                            const Eigen::VectorXd& F, const Eigen::VectorXd& U0,
                            const GmresConfig& cfg) {
  if (cfg.tol <= 0.0) throw ConfigError("gmres: tolerance must be positive");
  const int n = static_cast<int>(F.size());
  const int K = cfg.max_iters > 0 ? std::min(cfg.max_iters, n) : n;
  const Eigen::LLT<Eigen::MatrixXd> pfac(P);
  if (pfac.info() != Eigen::Success)
    throw ConfigError("gmres_reference: P is not symmetric positive definite");
  const auto p_norm = [&](const Eigen::VectorXd& v) {
    return std::sqrt(std::max(v.dot(P * v), 0.0));
  };

  GmresReport rep;
  rep.solution = U0;
  const Eigen::VectorXd r0 = pfac.solve(F - A * U0);
  const double beta = p_norm(r0);
  if (!std::isfinite(beta)) {
    rep.reason = GmresStop::failure;
    return rep;
  }
  if (beta == 0.0) {
    rep.relres_history.push_back(0.0);
    return rep;
  }
  rep.relres_history.push_back(1.0);

  std::vector<Eigen::VectorXd> V{r0 / beta};
  GivensLsq lsq(beta);

  for (int k = 1; k <= K; ++k) {
    Eigen::VectorXd w = pfac.solve(A * V[k - 1]);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(k + 1);
    for (int i = 0; i < k; ++i) {
      h[i] = (P * w).dot(V[i]);
      w -= h[i] * V[i];
    }
    h[k] = p_norm(w);
    const double subdiag = h[k];
    lsq.push_column(h);

    const Eigen::VectorXd y = lsq.solve();
    rep.solution = combine(U0, V, y);
    const double relres = p_norm(pfac.solve(F - A * rep.solution)) / beta;
    rep.relres_history.push_back(relres);
    rep.iterations = k;
    if (!std::isfinite(relres)) {
      rep.reason = GmresStop::failure;
      return rep;
    }
    if (relres <= cfg.tol) {
      rep.reason = GmresStop::converged;
      return rep;
    }
    if (subdiag <= kBreakdownFactor * beta) {
      rep.reason = GmresStop::converged;
      return rep;
    }
    if (k == K) break;
    V.push_back(w / subdiag);
  }
  rep.reason = GmresStop::max_iters;
  return rep;
}

}  // namespace fembem
