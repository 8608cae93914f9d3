// Copyright (c) the fembem contributors.
// SPDX-License-Identifier: Apache-2.0

#include "fembem/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "fembem/common.hpp"

namespace fembem {

namespace {

// Newton iteration on Legendre polynomials; nodes on (-1, 1).
GaussRule compute_gauss(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double p0 = 0.0, p1 = 0.0;
    for (int it = 0; it < 100; ++it) {
      p0 = 1.0;
      p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    p0 = 1.0;
    p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    const double dp = n * (x * p1 - p0) / (x * x - 1.0);
    r.x[i] = 0.5 * (x + 1.0);
    r.w[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: order must be positive");
  static std::map<int, GaussRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
  return it->second;
}

std::vector<Panel> graded_panels(double len, bool cluster_left, bool cluster_right,
                                 int levels) {
  std::vector<Panel> out;
  if (!cluster_left && !cluster_right) {
    out.push_back({0.0, len});
    return out;
  }
  const double split = (cluster_left && cluster_right) ? 0.5 * len
                       : cluster_left                  ? len
                                                       : 0.0;
  if (cluster_left) {
    double hi = split;
    for (int k = 0; k < levels && hi > 0.0; ++k) {
      const double lo = (k + 1 == levels) ? 0.0 : hi * 0.5;
      out.push_back({lo, hi});
      hi = lo;
    }
  }
  if (cluster_right) {
    double lo = split;
    for (int k = 0; k < levels && lo < len; ++k) {
      const double hi = (k + 1 == levels) ? len : len - (len - lo) * 0.5;
      out.push_back({lo, hi});
      lo = hi;
    }
  }
  return out;
}

}  // namespace fembem
