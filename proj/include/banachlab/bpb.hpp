#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/operators.hpp"
#include "banachlab/retraction.hpp"
#include "banachlab/space.hpp"

// Norm-attainment machinery: given a functional that almost attains at a
// point, produce a nearby functional that exactly attains at a nearby
// point, and use that to nudge an operator into C(K) into one that attains
// its norm.

namespace banachlab {

struct bpb_result {
  primal_vector y;   // unit vector, pairing(g, y) = 1
  dual_element g;    // unit functional
  double s = 0.0;    // where on the search path the pair was found
};

namespace detail {

// candidate at parameter s on the segment from x to the norming point of f
inline bool bpb_candidate(const space_spec& space, const primal_vector& x, const dual_element& f,
                          const primal_vector& yf, double eps, double s, bpb_result& out) {
  std::vector<double> c(x.coords.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (1.0 - s) * x.coords[i] + s * yf.coords[i];
  const double nc = norm_on(space, c);
  if (nc == 0.0) return false;
  for (auto& v : c) v /= nc;
  primal_vector y{space, std::move(c)};
  dual_element g;
  try {
    g = support_functional(y);
  } catch (const non_smooth_point&) {
    return false;  // the path crossed a kink; treat as infeasible and move on
  }
  std::vector<double> d(x.coords.size());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = x.coords[i] - y.coords[i];
  if (!(norm_on(space, d) < eps)) return false;
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = f.coords[i] - g.coords[i];
  if (!(norm_on(dual(space), d) < eps)) return false;
  if (std::abs(pairing(g, y) - 1.0) > 1e-9) return false;
  out = bpb_result{std::move(y), std::move(g), s};
  return true;
}

}  // namespace banachlab::detail

// Given unit x and unit f with pairing(f, x) > 1 - eps^2/4, produce a unit
// pair (y, g) with g attaining at y, ||x - y|| < eps and ||f - g|| < eps.
//
// First candidate: keep f and move to its norming point.  Otherwise walk
// the normalized segment y(s) from x to norming_point(f), taking g(s) as
// the supporting functional at y(s), and return the first s (smallest,
// located by a grid scan plus bisection refinement) where both distance
// bounds hold.  All four output bounds are re-verified before returning.
inline bpb_result bpb_point(const space_spec& space, const primal_vector& x, const dual_element& f, double eps) {
  if (!(eps > 0.0 && eps < 2.0)) throw invalid_spec("bpb_point: eps must lie in (0, 2)");
  if (!(x.space == space) || !(f.space == space)) throw dimension_mismatch("bpb_point: mismatched spaces");
  if (std::abs(norm(x) - 1.0) > 1e-9) throw premise_violation("bpb_point: x is not a unit vector");
  if (std::abs(dual_norm(f) - 1.0) > 1e-9) throw premise_violation("bpb_point: f is not a unit functional");
  if (!(pairing(f, x) > 1.0 - eps * eps / 4.0))
    throw premise_violation("bpb_point: pairing(f, x) = " + std::to_string(pairing(f, x)) +
                            " does not exceed 1 - eps^2/4");

  const primal_vector yf = norming_point(space, f);
  {
    // s = 1: f itself attains at its norming point
    std::vector<double> d(x.coords.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = x.coords[i] - yf.coords[i];
    if (norm_on(space, d) < eps) return bpb_result{yf, f, 1.0};
  }

  bpb_result out;
  if (detail::bpb_candidate(space, x, f, yf, eps, 0.0, out)) return out;
  const int steps = 4096;
  for (int k = 1; k <= steps; ++k) {
    const double s = static_cast<double>(k) / static_cast<double>(steps);
    if (detail::bpb_candidate(space, x, f, yf, eps, s, out)) {
      // sharpen toward the entry point of the feasible region
      double lo = static_cast<double>(k - 1) / static_cast<double>(steps), hi = s;
      for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        bpb_result probe;
        if (detail::bpb_candidate(space, x, f, yf, eps, mid, probe)) {
          hi = mid;
          out = std::move(probe);
        } else {
          lo = mid;
        }
      }
      return out;
    }
  }
  throw search_exhausted("bpb_point: no parameter on the search path meets both bounds");
}

// Membership certificate for the convex-series estimate: if sum alpha_i c_i
// exceeds 1 - eta with |c_i| <= 1, the indices with c_i > r carry weight at
// least 1 - eta / (1 - r).
struct convex_series_result {
  std::vector<int> indices;  // A = { i : c_i > r }
  double weight = 0.0;       // sum of alpha_i over A
  double threshold = 0.0;    // 1 - eta / (1 - r)
  bool ok = false;
};

inline convex_series_result convex_series_bound(std::span<const double> c, std::span<const double> alpha, double eta,
                                                double r) {
  if (c.size() != alpha.size()) throw dimension_mismatch("convex_series_bound: c and alpha differ in length");
  if (!(eta > 0.0)) throw premise_violation("convex_series_bound: eta must be positive");
  if (!(r > 0.0 && r < 1.0)) throw premise_violation("convex_series_bound: r must lie in (0, 1)");
  double asum = 0.0, dot = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (alpha[i] < -1e-15) throw premise_violation("convex_series_bound: alpha must be nonnegative");
    if (std::abs(c[i]) > 1.0 + 1e-12) throw premise_violation("convex_series_bound: |c_i| must be at most 1");
    asum += alpha[i];
    dot += alpha[i] * c[i];
  }
  if (std::abs(asum - 1.0) > 1e-9) throw premise_violation("convex_series_bound: alpha must sum to 1");
  if (!(dot > 1.0 - eta)) throw premise_violation("convex_series_bound: sum alpha_i c_i does not exceed 1 - eta");
  convex_series_result out;
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] > r) {
      out.indices.push_back(static_cast<int>(i));
      out.weight += alpha[i];
    }
  out.threshold = 1.0 - eta / (1.0 - r);
  out.ok = out.weight >= out.threshold - 1e-12;
  return out;
}

struct perturbation_certificate {
  double epsilon = 0.0;
  double eta_used = 0.0;
  double scale = 1.0;  // pre-normalization factor; the certificate is for T / scale
  c0_operator new_operator;
  primal_vector attaining_point;       // x1
  dual_element attaining_functional;   // x1*, the row of the new operator at t0
  std::string witness_label;           // t0
  double distance = 0.0;               // ||S - T/scale||
  double bound = 0.0;                  // 4 eps, plus the handle defect term in the general case
  double search_s = 0.0;               // bpb path parameter
  double sign = 1.0;                   // sign flip applied to the almost-norming row
};

namespace detail {

struct normalized_premise {
  c0_operator T;       // rows divided by ||T||
  double scale = 1.0;
  std::size_t t0 = 0;
  double sign = 1.0;
  dual_element row0;   // row at t0, of the normalized operator
  dual_element f;      // sign * row0 / ||row0||, the unit almost-attaining functional
};

inline normalized_premise normalize_and_locate(const c0_operator& T_in, const primal_vector& x0, double eta) {
  if (T_in.points.empty()) throw empty_point_set("perturbation: the operator has no points");
  const double nT = operator_norm(T_in);
  if (!(nT > 0.0)) throw premise_violation("perturbation: the zero operator cannot almost attain its norm");
  if (std::abs(norm(x0) - 1.0) > 1e-9) throw premise_violation("perturbation: x0 is not a unit vector");
  normalized_premise np;
  np.T = T_in;
  np.scale = nT;
  for (auto& row : np.T.rows)
    for (auto& v : row) v /= nT;
  const std::vector<double> vals = apply(np.T, x0);
  // max |[Tx0](t)|, ties resolved toward the smallest label
  std::size_t best = 0;
  for (std::size_t t = 1; t < vals.size(); ++t) {
    const double a = std::abs(vals[t]), b = std::abs(vals[best]);
    if (a > b || (a == b && np.T.points[t] < np.T.points[best])) best = t;
  }
  if (!(std::abs(vals[best]) > 1.0 - eta))
    throw premise_violation("perturbation: ||T x0|| = " + std::to_string(std::abs(vals[best])) +
                            " does not exceed 1 - eta = " + std::to_string(1.0 - eta));
  np.t0 = best;
  np.sign = vals[best] >= 0.0 ? 1.0 : -1.0;
  np.row0 = dual_element{np.T.domain, np.T.rows[best]};
  const double rn = dual_norm(np.row0);
  std::vector<double> fc(np.row0.coords.size());
  for (std::size_t i = 0; i < fc.size(); ++i) fc[i] = np.sign * np.row0.coords[i] / rn;
  np.f = dual_element{np.T.domain, std::move(fc)};
  return np;
}

}  // namespace banachlab::detail

// Compact-perturbation form: eta = eps^2/64.  The almost-norming row is
// replaced through a norm-attaining pair found at scale eps/4, every other
// row is shifted by the same difference and radially retracted, so the new
// operator S has ||S|| = ||S x1|| = 1 and ||S - T|| <= 4 eps (the actual
// distance comes out <= eps; the certificate keeps the documented bound).
inline perturbation_certificate perturb_compact(const c0_operator& T_in, const primal_vector& x0, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw invalid_spec("perturb_compact: eps must lie in (0, 1)");
  const double eta = eps * eps / 64.0;
  detail::normalized_premise np = detail::normalize_and_locate(T_in, x0, eta);
  const bpb_result b = bpb_point(np.T.domain, x0, np.f, eps / 4.0);
  std::vector<double> x1star(b.g.coords.size());
  for (std::size_t i = 0; i < x1star.size(); ++i) x1star[i] = np.sign * b.g.coords[i];

  const space_spec D = dual(np.T.domain);
  c0_operator S = np.T;
  double distance = 0.0;
  std::vector<double> shifted(x1star.size()), diff(x1star.size());
  for (std::size_t t = 0; t < S.rows.size(); ++t) {
    for (std::size_t i = 0; i < shifted.size(); ++i)
      shifted[i] = np.T.rows[t][i] + x1star[i] - np.row0.coords[i];
    dual_element psi = radial_retract(np.T.domain, dual_element{np.T.domain, shifted});
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = psi.coords[i] - np.T.rows[t][i];
    distance = std::max(distance, norm_on(D, diff));
    S.rows[t] = std::move(psi.coords);
  }

  perturbation_certificate cert;
  cert.epsilon = eps;
  cert.eta_used = eta;
  cert.scale = np.scale;
  cert.new_operator = std::move(S);
  cert.attaining_point = b.y;
  cert.attaining_functional = dual_element{np.T.domain, std::move(x1star)};
  cert.witness_label = np.T.points[np.t0];
  cert.distance = distance;
  cert.bound = 4.0 * eps;
  cert.search_s = b.s;
  cert.sign = np.sign;
  return cert;
}

// General form: eta = eps^2/4, the shift is localized by a bump function
// with bump(t0) = 1 and values in [0, 1], and rows are brought back to the
// ball by an arbitrary retraction handle instead of the radial map.  The
// price is the handle's nearest-point defect: ||S - T|| <= 4 eps + f(2 eps).
inline perturbation_certificate perturb_general(const c0_operator& T_in, const primal_vector& x0, double eps,
                                                const retraction_handle& h, const std::vector<double>& bump) {
  if (!(eps > 0.0 && eps < 1.0)) throw invalid_spec("perturb_general: eps must lie in (0, 1)");
  if (!(h.space == T_in.domain)) throw component_mismatch("perturb_general: handle retracts a different dual ball");
  const double eta = eps * eps / 4.0;
  detail::normalized_premise np = detail::normalize_and_locate(T_in, x0, eta);
  if (bump.size() != np.T.points.size()) throw bump_invalid("perturb_general: bump length does not match the point set");
  for (double v : bump)
    if (!(v >= 0.0 && v <= 1.0)) throw bump_invalid("perturb_general: bump values must lie in [0, 1]");
  if (std::abs(bump[np.t0] - 1.0) > 1e-12) throw bump_invalid("perturb_general: bump must equal 1 at the witness point");

  const bpb_result b = bpb_point(np.T.domain, x0, np.f, eps);
  std::vector<double> x1star(b.g.coords.size());
  for (std::size_t i = 0; i < x1star.size(); ++i) x1star[i] = np.sign * b.g.coords[i];

  const space_spec D = dual(np.T.domain);
  c0_operator S = np.T;
  double distance = 0.0;
  std::vector<double> shifted(x1star.size()), diff(x1star.size());
  for (std::size_t t = 0; t < S.rows.size(); ++t) {
    for (std::size_t i = 0; i < shifted.size(); ++i)
      shifted[i] = np.T.rows[t][i] + bump[t] * (x1star[i] - np.row0.coords[i]);
    dual_element psi = apply(h, dual_element{np.T.domain, shifted});
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = psi.coords[i] - np.T.rows[t][i];
    distance = std::max(distance, norm_on(D, diff));
    S.rows[t] = std::move(psi.coords);
  }

  perturbation_certificate cert;
  cert.epsilon = eps;
  cert.eta_used = eta;
  cert.scale = np.scale;
  cert.new_operator = std::move(S);
  cert.attaining_point = b.y;
  cert.attaining_functional = dual_element{np.T.domain, std::move(x1star)};
  cert.witness_label = np.T.points[np.t0];
  cert.distance = distance;
  cert.bound = 4.0 * eps + h.nearest_point_bound.value_at(2.0 * eps);
  cert.search_s = b.s;
  cert.sign = np.sign;
  return cert;
}

// default bump: the indicator of the witness point (tightest localization)
inline perturbation_certificate perturb_general(const c0_operator& T_in, const primal_vector& x0, double eps,
                                                const retraction_handle& h) {
  if (!(eps > 0.0 && eps < 1.0)) throw invalid_spec("perturb_general: eps must lie in (0, 1)");
  if (!(h.space == T_in.domain)) throw component_mismatch("perturb_general: handle retracts a different dual ball");
  detail::normalized_premise np = detail::normalize_and_locate(T_in, x0, eps * eps / 4.0);
  std::vector<double> bump(np.T.points.size(), 0.0);
  bump[np.t0] = 1.0;
  return perturb_general(T_in, x0, eps, h, bump);
}

}  // namespace banachlab
