#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banachlab/chain.hpp"
#include "banachlab/errors.hpp"
#include "banachlab/modulus.hpp"
#include "banachlab/sampling.hpp"
#include "banachlab/space.hpp"

// Retractions of dual unit balls.  A handle bundles the map with two
// claimed certificates: an upper bound for its modulus of continuity and a
// bound for its nearest-point defect (how far the output can exceed the
// true distance to the ball).

namespace banachlab {

enum class retraction_kind { radial, truncation, l1_sum, c0_chain, transferred };

// f / max(1, ||f||).  An exact nearest point map in any norm.
inline dual_element radial_retract(const space_spec& space, const dual_element& f) {
  if (!(f.space == space)) throw dimension_mismatch("radial_retract: functional lives over a different space");
  const double nf = dual_norm(f);
  if (nf <= 1.0) return f;
  dual_element out = f;
  for (auto& v : out.coords) v /= nf;
  return out;
}

// Truncation retraction on the dual of a space with uniformly monotone
// dual norm.  Outside the ball: scan partial supports left to right for
// the first n with ||f restricted to the first n coordinates|| >= 1, then
// scale the n-th coordinate by the unique t in (0, 1] placing the
// truncated functional on the sphere.
inline dual_element truncation_retract(const space_spec& space, const dual_element& f) {
  if (!(f.space == space)) throw dimension_mismatch("truncation_retract: functional lives over a different space");
  const space_spec D = dual(space);
  if (!uniformly_monotone(D))
    throw not_uniformly_monotone("truncation_retract: the dual norm is not uniformly monotone");
  const double nf = norm_on(D, f.coords);
  if (nf <= 1.0) return f;

  const int d = static_cast<int>(f.coords.size());
  std::vector<double> head(f.coords.size(), 0.0);
  int n = -1;
  for (int i = 0; i < d; ++i) {
    head[static_cast<std::size_t>(i)] = f.coords[static_cast<std::size_t>(i)];
    if (norm_on(D, head) >= 1.0) {
      n = i;
      break;
    }
  }
  if (n < 0) throw bisection_failure("truncation_retract: no crossing index although the norm exceeds 1");

  auto partial_norm = [&](double t) {
    head[static_cast<std::size_t>(n)] = t * f.coords[static_cast<std::size_t>(n)];
    return norm_on(D, head);
  };
  if (partial_norm(0.0) >= 1.0 || partial_norm(1.0) < 1.0)
    throw bisection_failure("truncation_retract: crossing bracket is degenerate");
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (partial_norm(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<double> out(f.coords.size(), 0.0);
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = f.coords[static_cast<std::size_t>(i)];
  out[static_cast<std::size_t>(n)] = hi * f.coords[static_cast<std::size_t>(n)];
  return dual_element{space, std::move(out)};
}

struct retraction_handle {
  space_spec space;  // primal space; the handle retracts the dual ball
  retraction_kind kind = retraction_kind::radial;
  std::vector<retraction_handle> children;            // l1_sum
  subspace_chain chain;                               // c0_chain
  std::shared_ptr<const retraction_handle> inner;     // transferred
  modulus_curve modulus_bound;                        // claimed bound for the modulus of continuity
  modulus_curve nearest_point_bound;                  // claimed bound for the nearest-point defect

  static retraction_handle radial(space_spec s);
  static retraction_handle truncation(space_spec s, const estimate_params& prm = {});
  static retraction_handle l1_sum(space_spec s, std::vector<retraction_handle> kids);
  static retraction_handle c0_chain(space_spec s);
  static retraction_handle transferred(retraction_handle inner_handle);
};

inline dual_element apply(const retraction_handle& h, const dual_element& f);

// Componentwise retraction of the dual ball of an l1-sum: the dual norm is
// the max over component duals, so retracting each block independently
// lands in the product of balls, i.e. the dual ball.
inline dual_element l1_sum_retract(const std::vector<retraction_handle>& children, const dual_element& f) {
  if (f.space.kind != space_kind::l1_sum) throw unsupported_space("l1_sum_retract: space is not an l1-sum");
  if (children.size() != f.space.components.size())
    throw component_mismatch("l1_sum_retract: child handle count does not match component count");
  dual_element out = f;
  std::size_t off = 0;
  for (std::size_t c = 0; c < children.size(); ++c) {
    if (!(children[c].space == f.space.components[c]))
      throw component_mismatch("l1_sum_retract: child handle space mismatch at component " + std::to_string(c));
    const std::size_t n = static_cast<std::size_t>(f.space.components[c].total_dim());
    dual_element block{f.space.components[c],
                       std::vector<double>(f.coords.begin() + static_cast<std::ptrdiff_t>(off),
                                           f.coords.begin() + static_cast<std::ptrdiff_t>(off + n))};
    dual_element rblock = apply(children[c], block);
    std::copy(rblock.coords.begin(), rblock.coords.end(), out.coords.begin() + static_cast<std::ptrdiff_t>(off));
    off += n;
  }
  return out;
}

inline dual_element apply(const retraction_handle& h, const dual_element& f) {
  switch (h.kind) {
    case retraction_kind::radial:
      return radial_retract(h.space, f);
    case retraction_kind::truncation:
      return truncation_retract(h.space, f);
    case retraction_kind::l1_sum:
      return l1_sum_retract(h.children, f);
    case retraction_kind::c0_chain:
      return c0_sum_retract(h.space, h.chain, f);
    case retraction_kind::transferred: {
      // extend by a zero coordinate at the extra point, retract there, restrict
      if (!(f.space == h.space)) throw dimension_mismatch("apply: functional lives over a different space");
      std::vector<double> ext(f.coords);
      ext.push_back(0.0);
      dual_element r = apply(*h.inner, dual_element{h.inner->space, std::move(ext)});
      r.coords.pop_back();
      return dual_element{h.space, std::move(r.coords)};
    }
  }
  throw unsupported_space("apply: unknown retraction kind");
}

// || f - handle(f) || minus the true distance to the ball, which for any
// norm is max(||f|| - 1, 0).
inline double nearest_point_defect(const space_spec& space, const dual_element& f, const retraction_handle& h) {
  if (!(f.space == space)) throw dimension_mismatch("nearest_point_defect: functional lives over a different space");
  dual_element r = apply(h, f);
  std::vector<double> diff(f.coords.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = f.coords[i] - r.coords[i];
  const double dist = norm_on(dual(space), diff);
  return dist - std::max(dual_norm(f) - 1.0, 0.0);
}

namespace detail {

inline std::vector<double> default_bound_grid() { return linspace(0.02, 2.0, 100); }

}  // namespace detail

inline retraction_handle retraction_handle::radial(space_spec s) {
  retraction_handle h;
  h.space = std::move(s);
  h.kind = retraction_kind::radial;
  h.modulus_bound.grid = detail::default_bound_grid();
  for (double t : h.modulus_bound.grid) h.modulus_bound.values.push_back(2.0 * t);  // radial maps are 2-Lipschitz
  h.nearest_point_bound.grid = h.modulus_bound.grid;
  h.nearest_point_bound.values.assign(h.modulus_bound.grid.size(), 0.0);  // exact nearest point map
  return h;
}

inline retraction_handle retraction_handle::truncation(space_spec s, const estimate_params& prm) {
  retraction_handle h;
  h.kind = retraction_kind::truncation;
  const space_spec D = dual(s);
  if (!uniformly_monotone(D))
    throw not_uniformly_monotone("truncation handle: the dual norm is not uniformly monotone");
  h.space = std::move(s);
  h.modulus_bound.grid = detail::default_bound_grid();
  h.nearest_point_bound.grid = h.modulus_bound.grid;
  if (D.is_leaf()) {
    for (double t : h.modulus_bound.grid) {
      const double minv = monotonicity_inverse_leaf(D, t);
      h.modulus_bound.values.push_back(2.0 * minv);
      h.nearest_point_bound.values.push_back(minv - t);
    }
  } else {
    const modulus_curve M = monotonicity_curve(D, linspace(0.01, 2.0, 120), prm);
    for (double t : h.modulus_bound.grid) {
      const double minv = modulus_inverse(M, t);
      h.modulus_bound.values.push_back(2.0 * minv);
      h.nearest_point_bound.values.push_back(std::max(minv - t, 0.0));
    }
  }
  return h;
}

inline retraction_handle retraction_handle::l1_sum(space_spec s, std::vector<retraction_handle> kids) {
  if (s.kind != space_kind::l1_sum) throw unsupported_space("l1_sum handle: space is not an l1-sum");
  if (kids.size() != s.components.size()) throw component_mismatch("l1_sum handle: child count mismatch");
  for (std::size_t c = 0; c < kids.size(); ++c)
    if (!(kids[c].space == s.components[c]))
      throw component_mismatch("l1_sum handle: child space mismatch at component " + std::to_string(c));
  retraction_handle h;
  h.space = std::move(s);
  h.kind = retraction_kind::l1_sum;
  h.modulus_bound.grid = detail::default_bound_grid();
  h.nearest_point_bound.grid = h.modulus_bound.grid;
  for (double t : h.modulus_bound.grid) {
    double m = 0.0, npb = 0.0;
    for (const auto& k : kids) {
      m = std::max(m, k.modulus_bound.value_at(t));
      npb = std::max(npb, k.nearest_point_bound.value_at(t));
    }
    h.modulus_bound.values.push_back(m);
    h.nearest_point_bound.values.push_back(npb);
  }
  // the componentwise modulus is the sup over children; the construction
  // only makes sense when that sup still vanishes at 0
  if (h.modulus_bound.values.front() > 0.5)
    throw uniformity_violation("l1_sum handle: the sup of the child moduli does not tend to 0");
  h.children = std::move(kids);
  return h;
}

inline retraction_handle retraction_handle::c0_chain(space_spec s) {
  if (s.kind != space_kind::c0_sum) throw unsupported_space("c0_chain handle: space is not a c0-sum");
  retraction_handle h;
  h.kind = retraction_kind::c0_chain;
  std::vector<int> dims;
  for (const auto& c : s.components) {
    if (!c.is_leaf() || c.kind != space_kind::lp || c.p <= 1.0)
      throw precondition_modulus("c0_chain handle: component duals must be uniformly convex (ell_p leaves, 1 < p)");
    dims.push_back(c.dim);
  }
  h.chain = subspace_chain::over_components(dims);
  // continuity certificate: points closer than delta(eps)^2 map within
  // eps + 9 delta(eps)^2 + 2 delta(eps), where delta is the common lower
  // convexity modulus of the dual leaves
  for (double eps : linspace(0.02, 1.9, 120)) {
    double delta = std::numeric_limits<double>::infinity();
    for (const auto& c : s.components) delta = std::min(delta, modulus_convexity(dual(c), eps));
    const double t = delta * delta;
    if (!h.modulus_bound.grid.empty() && t <= h.modulus_bound.grid.back()) continue;
    h.modulus_bound.grid.push_back(t);
    h.modulus_bound.values.push_back(eps + 9.0 * delta * delta + 2.0 * delta);
  }
  h.nearest_point_bound = h.modulus_bound;  // a retraction's defect is bounded by its modulus
  h.space = std::move(s);
  return h;
}

inline retraction_handle retraction_handle::transferred(retraction_handle inner_handle) {
  if (inner_handle.space.kind != space_kind::sup || inner_handle.space.dim < 2)
    throw unsupported_space("transferred handle: inner handle must act on a sup leaf with at least 2 points");
  retraction_handle h;
  h.space = space_spec::sup(inner_handle.space.dim - 1);
  h.kind = retraction_kind::transferred;
  h.modulus_bound = inner_handle.modulus_bound;
  h.nearest_point_bound = inner_handle.nearest_point_bound;
  h.inner = std::make_shared<const retraction_handle>(std::move(inner_handle));
  return h;
}

// Empirical modulus of continuity: for each t, the max of ||phi(x) - phi(y)||
// over seeded sample pairs with ||x - y|| <= t.  Pairs mix plain nearby
// points, pairs pushed outside the ball, and pairs straddling the sphere.
inline modulus_curve omega_estimate(const retraction_handle& h, std::span<const double> t_grid, std::uint64_t seed,
                                    int samples) {
  if (samples < 1) throw invalid_spec("omega_estimate: samples must be >= 1");
  const space_spec D = dual(h.space);
  modulus_curve out;
  out.grid.assign(t_grid.begin(), t_grid.end());
  out.values.reserve(out.grid.size());
  std::vector<double> diff(static_cast<std::size_t>(D.total_dim()));
  for (std::size_t ti = 0; ti < out.grid.size(); ++ti) {
    const double t = out.grid[ti];
    double worst = 0.0;
    for (int k = 0; k < samples; ++k) {
      rng r = rng::substream(seed, ti, static_cast<std::uint64_t>(k));
      double radius = 0.0;
      switch (k % 3) {
        case 0: radius = r.uniform(0.0, 1.5); break;               // anywhere
        case 1: radius = r.uniform(0.9, 1.5); break;               // near or outside
        default: radius = std::max(1.0 - t / 2.0, 0.0); break;     // straddling the sphere
      }
      auto x = random_with_norm(D, radius, r);
      auto dir = random_unit(D, r);
      const double step = (k % 3 == 0) ? t * r.uniform() : t;
      auto y = x;
      for (std::size_t i = 0; i < y.size(); ++i) y[i] += step * dir[i];
      dual_element fx = apply(h, dual_element{h.space, x});
      dual_element fy = apply(h, dual_element{h.space, y});
      for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = fx.coords[i] - fy.coords[i];
      worst = std::max(worst, norm_on(D, diff));
    }
    out.values.push_back(worst);
  }
  return out;
}

}  // namespace banachlab
