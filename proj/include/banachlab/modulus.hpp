#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/sampling.hpp"
#include "banachlab/space.hpp"

// Quantitative rotundity / monotonicity data.
//
// modulus_monotonicity(X, eps) = inf { || |x|+|y| || - 1 : ||x|| = 1, ||y|| >= eps },
// taken coordinatewise on the flat basis.  modulus_convexity is the usual
// modulus of uniform convexity.  Both have closed forms on ell_p leaves;
// sums are estimated by seeded sampling plus local refinement.

namespace banachlab {

// Piecewise-linear tabulated curve.  Treated as anchored at the origin:
// below the first grid point values interpolate toward (0, 0), beyond the
// last grid point they clamp to the last value.  Both conventions matter
// for the inverse, see modulus_inverse.
struct modulus_curve {
  std::vector<double> grid;    // strictly increasing, positive
  std::vector<double> values;  // same length

  double value_at(double t) const {
    if (grid.empty()) throw empty_curve("value_at on an empty curve");
    if (grid.size() != values.size()) throw dimension_mismatch("curve grid/values length mismatch");
    if (t <= 0.0) return 0.0;
    if (t >= grid.back()) return values.back();
    // origin anchor: virtual point (0, 0) before the grid
    double g0 = 0.0, v0 = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (t <= grid[i]) {
        const double w = (t - g0) / (grid[i] - g0);
        return v0 + w * (values[i] - v0);
      }
      g0 = grid[i];
      v0 = values[i];
    }
    return values.back();
  }

  void validate() const {
    if (grid.empty()) throw empty_curve("curve has no grid points");
    if (grid.size() != values.size()) throw dimension_mismatch("curve grid/values length mismatch");
    double prev = 0.0;
    for (double g : grid) {
      if (!(g > prev)) throw invalid_spec("curve grid must be strictly increasing and positive");
      prev = g;
    }
  }
};

// sup { eps >= 0 : curve(eps) <= t } for a non-decreasing tabulated curve,
// located by bisection; clamps to the right end of the grid when t exceeds
// every tabulated value.
inline double modulus_inverse(const modulus_curve& m, double t) {
  m.validate();
  if (t < 0.0) throw invalid_spec("modulus_inverse: negative argument");
  if (t >= m.values.back()) return m.grid.back();
  double lo = 0.0;              // value_at(0) = 0 <= t
  double hi = m.grid.back();    // value_at(hi) > t
  for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (m.value_at(mid) <= t)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

struct estimate_params {
  int samples_per_dim = 64;
  int refine_iters = 20;
  std::uint64_t seed = 1;
};

namespace detail {

// || |x| + |y| || - 1 minimized over ||x|| = 1, ||y|| = eps.  Nonnegative
// coordinates suffice since the norms are absolute.  Sampled minimum plus
// shrinking random refinement; an upper estimate of the true infimum.
inline double sampled_monotonicity(const space_spec& s, double eps, const estimate_params& prm) {
  const int n = s.total_dim();
  rng r(prm.seed);
  std::vector<double> best_x, best_y, sum(static_cast<std::size_t>(n));
  double best = std::numeric_limits<double>::infinity();
  const int count = std::max(16, prm.samples_per_dim * n);
  auto eval = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t i = 0; i < sum.size(); ++i) sum[i] = x[i] + y[i];
    return norm_on(s, sum) - 1.0;
  };
  for (int k = 0; k < count; ++k) {
    auto x = random_nonneg_with_norm(s, 1.0, r);
    auto y = random_nonneg_with_norm(s, eps, r);
    const double v = eval(x, y);
    if (v < best) {
      best = v;
      best_x = x;
      best_y = y;
    }
  }
  double radius = 0.5;
  for (int it = 0; it < prm.refine_iters; ++it) {
    for (int prop = 0; prop < 16; ++prop) {
      auto x = best_x;
      auto y = best_y;
      for (auto& v : x) v = std::abs(v + radius * r.normal());
      for (auto& v : y) v = std::abs(v + radius * eps * r.normal());
      const double nx = norm_on(s, x);
      const double ny = norm_on(s, y);
      if (nx == 0.0 || ny == 0.0) continue;
      for (auto& v : x) v /= nx;
      for (auto& v : y) v *= eps / ny;
      const double val = eval(x, y);
      if (val < best) {
        best = val;
        best_x = x;
        best_y = y;
      }
    }
    radius *= 0.6;
  }
  return std::max(best, 0.0);
}

// Implicit equation for the ell_p convexity modulus when 1 < p < 2:
//   (1 - d + e/2)^p + |1 - d - e/2|^p = 2,   d = delta_p(e).
// The left side is strictly decreasing in d on [0, 1].
inline double hanner_convexity(double p, double eps) {
  auto F = [&](double d) {
    return std::pow(1.0 - d + eps / 2.0, p) + std::pow(std::abs(1.0 - d - eps / 2.0), p) - 2.0;
  };
  double lo = 0.0, hi = 1.0;
  if (F(lo) < 0.0) return 0.0;  // cannot happen for eps in (0,2); convexity of t^p
  for (int it = 0; it < 200 && (hi - lo) > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (F(mid) >= 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Lower modulus of monotonicity of the space's own norm.  Closed forms on
// leaves; sums fall back to the sampled estimate.
inline double modulus_monotonicity(const space_spec& s, double eps, const estimate_params& prm = {}) {
  if (!(eps > 0.0)) throw invalid_spec("modulus_monotonicity: eps must be positive");
  switch (s.kind) {
    case space_kind::lp:
      if (s.dim == 1) return eps;
      if (s.p == 1.0) return eps;
      return std::pow(1.0 + std::pow(eps, s.p), 1.0 / s.p) - 1.0;
    case space_kind::sup:
      // two disjoint coordinates absorb the second vector: the modulus is 0
      return s.dim == 1 ? eps : 0.0;
    case space_kind::l1_sum:
    case space_kind::c0_sum:
      if (s.components.size() == 1) return modulus_monotonicity(s.components[0], eps, prm);
      return detail::sampled_monotonicity(s, eps, prm);
  }
  throw unsupported_space("modulus_monotonicity: space has no coordinate lattice");
}

inline bool uniformly_monotone(const space_spec& s) {
  switch (s.kind) {
    case space_kind::lp:
      return true;  // p < infinity by construction
    case space_kind::sup:
      return s.dim == 1;
    case space_kind::l1_sum: {
      for (const auto& c : s.components)
        if (!uniformly_monotone(c)) return false;
      return true;
    }
    case space_kind::c0_sum:
      return s.components.size() == 1 && uniformly_monotone(s.components[0]);
  }
  return false;
}

// Inverse modulus for an ell_r leaf, in closed form:
//   M(eps) = (1 + eps^r)^{1/r} - 1  =>  M^{-1}(t) = ((1+t)^r - 1)^{1/r}.
inline double monotonicity_inverse_leaf(const space_spec& leaf, double t) {
  if (t < 0.0) throw invalid_spec("monotonicity_inverse_leaf: negative argument");
  if (leaf.kind == space_kind::lp) {
    if (leaf.dim == 1 || leaf.p == 1.0) return t;
    return std::pow(std::pow(1.0 + t, leaf.p) - 1.0, 1.0 / leaf.p);
  }
  if (leaf.kind == space_kind::sup && leaf.dim == 1) return t;
  throw not_uniformly_monotone("monotonicity_inverse_leaf: leaf is not uniformly monotone");
}

// Modulus of uniform convexity.  eps in (0, 2).
inline double modulus_convexity(const space_spec& s, double eps) {
  if (!(eps > 0.0 && eps < 2.0)) throw invalid_spec("modulus_convexity: eps must lie in (0, 2)");
  switch (s.kind) {
    case space_kind::lp:
      if (s.dim == 1) return 1.0;  // sphere is {-1, +1}; any admissible pair has midpoint 0
      if (s.p == 1.0) throw not_uniformly_convex("ell_1 is not uniformly convex");
      if (s.p >= 2.0) return 1.0 - std::pow(1.0 - std::pow(eps / 2.0, s.p), 1.0 / s.p);
      return detail::hanner_convexity(s.p, eps);
    case space_kind::sup:
      if (s.dim == 1) return 1.0;
      throw not_uniformly_convex("sup-norm leaves are not uniformly convex");
    case space_kind::l1_sum:
    case space_kind::c0_sum:
      if (s.components.size() == 1) return modulus_convexity(s.components[0], eps);
      // disjointly supported unit pairs keep the midpoint on the sphere
      throw not_uniformly_convex("multi-component sums are not uniformly convex");
  }
  throw unsupported_space("modulus_convexity: unknown space kind");
}

inline std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  return g;
}

// Tabulate the monotonicity modulus on a grid.  Sampled estimates can
// wobble, so values are forced non-decreasing by a running max.
inline modulus_curve monotonicity_curve(const space_spec& s, std::vector<double> grid, const estimate_params& prm = {}) {
  modulus_curve m;
  m.grid = std::move(grid);
  m.values.reserve(m.grid.size());
  double running = 0.0;
  for (double e : m.grid) {
    running = std::max(running, modulus_monotonicity(s, e, prm));
    m.values.push_back(running);
  }
  m.validate();
  return m;
}

}  // namespace banachlab
