// Copyright 2026 The lpmind Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Query lower bounds from counting answer sequences against lattice points
// in an l_p ball. Each bound is the exact counting inequality with its
// explicit constants (the 200 slack, the +1 in the answer alphabet), not an
// asymptotic form. Logs are natural; the bounds are ratios of logs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "lpmind/codemaker.hpp"

namespace lpmind {

struct BoundsReport {
  std::size_t n = 0;
  int k = 0;
  double p = 0;  // +inf for l_inf
  double radius = 0;
  double log_volume = 0;
  double volume = 0;
  double s_min = 0;
  std::string formula;
  // Set for non-integer p, where the answer-count argument does not apply.
  bool heuristic = false;
};

// log of R^n 2^n Gamma(1+1/p)^n / Gamma(1+n/p).
inline double lp_ball_log_volume(std::size_t n, double p, double radius) {
  if (n < 1) throw std::invalid_argument("lp_ball_volume: n must be >= 1");
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("lp_ball_volume: p must be finite and >= 1");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("lp_ball_volume: R must be positive");
  const double nn = static_cast<double>(n);
  return nn * (std::log(radius) + std::log(2.0) + std::lgamma(1.0 + 1.0 / p)) - std::lgamma(1.0 + nn / p);
}

inline double lp_ball_volume(std::size_t n, double p, double radius) {
  return std::exp(lp_ball_log_volume(n, p, radius));
}

// s >= log((2k+1)^n / (200 V)) / log((2k)^p n + 1).
inline BoundsReport lower_bound_lp(std::size_t n, int k, double p, double radius) {
  if (k < 1) throw std::invalid_argument("lower_bound_lp: k must be >= 1");
  const double nn = static_cast<double>(n);
  const double r_max = static_cast<double>(k) * std::pow(nn, 1.0 / p);
  if (!(radius > 0.0) || radius > r_max * (1.0 + 1e-12)) {
    throw std::invalid_argument("lower_bound_lp: R must lie in (0, k n^{1/p}]");
  }
  BoundsReport rep;
  rep.n = n;
  rep.k = k;
  rep.p = p;
  rep.radius = radius;
  rep.log_volume = lp_ball_log_volume(n, p, radius);
  rep.volume = std::exp(rep.log_volume);
  const double numer = nn * std::log(2.0 * k + 1.0) - std::log(200.0) - rep.log_volume;
  // log((2k)^p n + 1) without overflowing for large p.
  const double log_top = p * std::log(2.0 * k) + std::log(nn);
  const double denom = log_top + std::log1p(std::exp(-log_top));
  rep.s_min = std::max(0.0, numer / denom);
  rep.formula = "lp-counting";
  rep.heuristic = p != std::floor(p);
  return rep;
}

// s >= log((2k+1)^n / (200 (2R)^n)) / log(2k+1).
inline BoundsReport lower_bound_linf(std::size_t n, int k, double radius) {
  if (k < 1) throw std::invalid_argument("lower_bound_linf: k must be >= 1");
  if (n < 1) throw std::invalid_argument("lower_bound_linf: n must be >= 1");
  if (!(radius > 0.0) || radius > static_cast<double>(k)) {
    throw std::invalid_argument("lower_bound_linf: R must lie in (0, k]");
  }
  const double nn = static_cast<double>(n);
  BoundsReport rep;
  rep.n = n;
  rep.k = k;
  rep.p = std::numeric_limits<double>::infinity();
  rep.radius = radius;
  rep.log_volume = nn * std::log(2.0 * radius);
  rep.volume = std::exp(rep.log_volume);
  const double numer = nn * std::log((2.0 * k + 1.0) / (2.0 * radius)) - std::log(200.0);
  rep.s_min = std::max(0.0, numer / std::log(2.0 * k + 1.0));
  rep.formula = "linf-counting";
  return rep;
}

struct NoisyBound {
  // Smallest per-coordinate mean E_z |x - z|^p over x in {-k..k}.
  double coordinate_mean_min = 0;
  // eps^2 * n * coordinate_mean_min; linear in n.
  double chernoff_exponent = 0;
  // chernoff_exponent - log 200: log of the query count below which the
  // blurring adversary wins. An order-of-magnitude indicator only.
  double log_query_bound = 0;
};

inline NoisyBound noisy_bound_exponent(std::size_t n, int k, double p, double eps) {
  if (n < 1 || k < 1) throw std::invalid_argument("noisy_bound_exponent: n and k must be >= 1");
  if (!(eps >= 0.0 && eps < 1.0)) throw std::invalid_argument("noisy_bound_exponent: eps must lie in [0, 1)");
  const auto means = coordinate_means(k, p);
  NoisyBound b;
  b.coordinate_mean_min = *std::min_element(means.begin(), means.end());
  b.chernoff_exponent = (eps * eps * b.coordinate_mean_min) * static_cast<double>(n);
  b.log_query_bound = b.chernoff_exponent - std::log(200.0);
  return b;
}

}  // namespace lpmind
