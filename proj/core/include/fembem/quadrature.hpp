// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

namespace fembem {

struct QuadratureConfig {
  int gauss_order = 16;     ///< outer Gauss order for segment integrals
  double rel_tol = 1e-12;   ///< accuracy target for disjoint pairs
};

struct GaussRule {
  std::vector<double> x;  ///< nodes on (0, 1)
  std::vector<double> w;  ///< weights summing to 1
};

/// Gauss-Legendre rule with n points, mapped to [0, 1]. Cached per order.
const GaussRule& gauss_legendre(int n);

struct Panel {
  double a, b;
};

/// Dyadic decomposition of [0, len] graded towards the flagged endpoints;
/// panel sizes halve towards a singular end. Used to integrate endpoint
/// log-singularities to near machine precision with a fixed Gauss order.
std::vector<Panel> graded_panels(double len, bool cluster_left, bool cluster_right,
                                 int levels = 40);

/// Integrate f over [0, len] with the given panels and Gauss order.
template <class F>
double integrate_panels(const F& f, const std::vector<Panel>& panels, int order) {
  const GaussRule& gr = gauss_legendre(order);
  double sum = 0.0;
  for (const Panel& p : panels) {
    const double h = p.b - p.a;
    for (size_t i = 0; i < gr.x.size(); ++i) sum += h * gr.w[i] * f(p.a + h * gr.x[i]);
  }
  return sum;
}

template <class F>
double integrate_gauss(const F& f, double len, int order) {
  return integrate_panels(f, {Panel{0.0, len}}, order);
}

}  // namespace fembem
