#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/retraction.hpp"
#include "banachlab/space.hpp"

// Measures on a finite discrete point set L, and the transfer of a dual
// ball retraction from the one-point extension K = L + {inf} back to L.
// For finite discrete L the measure space is just ell_1(L), and C(K) is a
// sup leaf with one extra coordinate.

namespace banachlab {

inline const char* infinity_label() { return "inf"; }

struct finite_measure {
  std::vector<std::string> points;
  std::vector<double> masses;

  finite_measure() = default;
  finite_measure(std::vector<std::string> pts, std::vector<double> m) : points(std::move(pts)), masses(std::move(m)) {
    if (points.size() != masses.size()) throw dimension_mismatch("finite_measure: point/mass count mismatch");
  }
};

inline double total_variation(const finite_measure& mu) {
  double acc = 0.0;
  for (double m : mu.masses) acc += std::abs(m);
  return acc;
}

// The same measure on L + {inf}, with zero mass at the new point.
inline finite_measure extend_measure(const finite_measure& mu) {
  for (const auto& p : mu.points)
    if (p == infinity_label()) throw label_collision("extend_measure: a point is already labelled '" + p + "'");
  finite_measure out = mu;
  out.points.emplace_back(infinity_label());
  out.masses.push_back(0.0);
  return out;
}

// Retract a measure on L through a retraction of the dual ball of C(K),
// K = L + {inf}: extend by zero mass, retract there, restrict back.  No
// renormalization happens on the way back, so this is again a retraction
// and its modulus is dominated by the inner one.
inline finite_measure transfer_retract(const retraction_handle& on_extended, const finite_measure& mu) {
  if (on_extended.space.kind != space_kind::sup)
    throw unsupported_space("transfer_retract: the handle must retract the dual of a sup leaf (C(K), K finite)");
  const finite_measure ext = extend_measure(mu);
  if (on_extended.space.dim != static_cast<int>(ext.points.size()))
    throw dimension_mismatch("transfer_retract: handle acts on C(K) with |K| = " + std::to_string(on_extended.space.dim) +
                             ", measure extends to " + std::to_string(ext.points.size()) + " points");
  dual_element r = apply(on_extended, dual_element{on_extended.space, ext.masses});
  finite_measure out;
  out.points = mu.points;
  out.masses.assign(r.coords.begin(), r.coords.end() - 1);
  return out;
}

}  // namespace banachlab
