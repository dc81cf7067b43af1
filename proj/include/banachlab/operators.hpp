#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/sampling.hpp"
#include "banachlab/space.hpp"

// Operators T : X -> C(K) for a finite point set K, stored row-wise:
// row(t) = T* delta_t, so [Tx](t) = <row(t), x> and the operator norm is
// the largest row norm.

namespace banachlab {

struct c0_operator {
  space_spec domain;
  std::vector<std::string> points;
  std::vector<std::vector<double>> rows;  // one functional per point, flat coords

  void validate() const {
    if (points.size() != rows.size()) throw dimension_mismatch("c0_operator: point/row count mismatch");
    const int n = domain.total_dim();
    for (const auto& r : rows)
      if (static_cast<int>(r.size()) != n) throw dimension_mismatch("c0_operator: row length does not match the domain");
  }
};

inline double operator_norm(const c0_operator& T) {
  T.validate();
  if (T.points.empty()) throw empty_point_set("operator_norm: the operator has no points");
  const space_spec D = dual(T.domain);
  double m = 0.0;
  for (const auto& r : T.rows) m = std::max(m, norm_on(D, r));
  return m;
}

// [Tx](t) for every t, in row order.
inline std::vector<double> apply(const c0_operator& T, const primal_vector& x) {
  T.validate();
  if (!(x.space == T.domain)) throw dimension_mismatch("apply: vector lives over a different space");
  std::vector<double> out;
  out.reserve(T.rows.size());
  for (const auto& r : T.rows) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r[i] * x.coords[i];
    out.push_back(acc);
  }
  return out;
}

// ||Tx|| in C(K).
inline double sup_value(const c0_operator& T, const primal_vector& x) {
  double m = 0.0;
  for (double v : apply(T, x)) m = std::max(m, std::abs(v));
  return m;
}

struct attainment {
  bool attains = false;
  primal_vector witness;
};

// Does ||Tx|| reach ||T|| on the unit sphere?  Finite dimensions make the
// answer yes whenever the check below succeeds; the converse direction is
// heuristic (norming points of the maximal rows, then a seeded local
// search), so a false result means "not found", reported with the best
// witness seen.
inline attainment is_norm_attaining(const c0_operator& T, double tol = 1e-9, std::uint64_t seed = 7) {
  const double nT = operator_norm(T);
  const space_spec D = dual(T.domain);
  if (nT == 0.0) {
    // the zero operator attains everywhere; hand back a basis direction
    std::vector<double> e(static_cast<std::size_t>(T.domain.total_dim()), 0.0);
    e[0] = 1.0;
    const double ne = norm_on(T.domain, e);
    for (auto& v : e) v /= ne;
    return {true, primal_vector{T.domain, std::move(e)}};
  }
  attainment best;
  double best_val = -1.0;
  auto consider = [&](primal_vector x) {
    const double v = sup_value(T, x);
    if (v > best_val) {
      best_val = v;
      best.witness = std::move(x);
    }
  };
  for (std::size_t t = 0; t < T.rows.size(); ++t) {
    if (norm_on(D, T.rows[t]) < nT - tol) continue;
    try {
      consider(norming_point(T.domain, dual_element{T.domain, T.rows[t]}));
    } catch (const non_smooth_point&) {
      // fall through to the local search
    }
    if (best_val >= nT - tol) {
      best.attains = true;
      return best;
    }
  }
  // local search: hill-climb ||Tx|| over the sphere from a few seeded starts
  rng r(seed);
  for (int start = 0; start < 8; ++start) {
    primal_vector x{T.domain, random_unit(T.domain, r)};
    double fx = sup_value(T, x);
    double step = 0.5;
    for (int it = 0; it < 300; ++it) {
      primal_vector y = x;
      for (auto& v : y.coords) v += step * r.normal();
      const double ny = norm(y);
      if (ny == 0.0) continue;
      for (auto& v : y.coords) v /= ny;
      const double fy = sup_value(T, y);
      if (fy > fx) {
        x = std::move(y);
        fx = fy;
      } else {
        step *= 0.97;
      }
    }
    consider(x);
    if (best_val >= nT - tol) {
      best.attains = true;
      return best;
    }
  }
  best.attains = false;
  return best;
}

}  // namespace banachlab
