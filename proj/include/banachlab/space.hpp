#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "banachlab/errors.hpp"

// Finite-dimensional sequence-space descriptions and the basic norm /
// duality operations on them.
//
// A space is a tree: ell_p leaves (1 <= p < infinity), sup-norm leaves
// (the desk-scale stand-in for c_0), and two ways of summing components:
// an l1-sum (norm = sum of component norms) and a c0-sum (norm = max of
// component norms).  Vectors and functionals are stored flat, components
// concatenated in order, so the coordinate basis of any spec is
// 1-unconditional by construction.

namespace banachlab {

enum class space_kind { lp, sup, l1_sum, c0_sum };

struct space_spec {
  space_kind kind = space_kind::lp;
  double p = 2.0;                      // lp leaves only
  int dim = 0;                         // leaves only
  std::vector<space_spec> components;  // sums only

  static space_spec lp(double p, int dim) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw invalid_spec("lp leaf needs finite p >= 1, got p=" + std::to_string(p));
    if (dim < 1) throw invalid_spec("lp leaf needs dim >= 1");
    space_spec s;
    s.kind = space_kind::lp;
    s.p = p;
    s.dim = dim;
    return s;
  }

  // sup-norm leaf; a distinct kind rather than lp with p = infinity
  static space_spec sup(int dim) {
    if (dim < 1) throw invalid_spec("sup leaf needs dim >= 1");
    space_spec s;
    s.kind = space_kind::sup;
    s.p = 0.0;
    s.dim = dim;
    return s;
  }

  static space_spec l1_sum(std::vector<space_spec> comps) {
    if (comps.empty()) throw invalid_spec("l1_sum needs at least one component");
    space_spec s;
    s.kind = space_kind::l1_sum;
    s.components = std::move(comps);
    return s;
  }

  static space_spec c0_sum(std::vector<space_spec> comps) {
    if (comps.empty()) throw invalid_spec("c0_sum needs at least one component");
    space_spec s;
    s.kind = space_kind::c0_sum;
    s.components = std::move(comps);
    return s;
  }

  bool is_leaf() const { return kind == space_kind::lp || kind == space_kind::sup; }

  int total_dim() const {
    if (is_leaf()) return dim;
    int n = 0;
    for (const auto& c : components) n += c.total_dim();
    return n;
  }

  friend bool operator==(const space_spec& a, const space_spec& b) {
    if (a.kind != b.kind) return false;
    if (a.is_leaf()) return a.dim == b.dim && (a.kind == space_kind::sup || a.p == b.p);
    if (a.components.size() != b.components.size()) return false;
    for (std::size_t i = 0; i < a.components.size(); ++i)
      if (!(a.components[i] == b.components[i])) return false;
    return true;
  }
};

// Dual space, computed structurally: dual(ell_p) = ell_q with 1/p+1/q = 1
// (q = infinity becomes a sup leaf), dual(sup) = ell_1, and the two sum
// kinds swap.
inline space_spec dual(const space_spec& s) {
  switch (s.kind) {
    case space_kind::lp:
      if (s.p == 1.0) return space_spec::sup(s.dim);
      return space_spec::lp(s.p / (s.p - 1.0), s.dim);
    case space_kind::sup:
      return space_spec::lp(1.0, s.dim);
    case space_kind::l1_sum: {
      std::vector<space_spec> duals;
      duals.reserve(s.components.size());
      for (const auto& c : s.components) duals.push_back(dual(c));
      return space_spec::c0_sum(std::move(duals));
    }
    case space_kind::c0_sum: {
      std::vector<space_spec> duals;
      duals.reserve(s.components.size());
      for (const auto& c : s.components) duals.push_back(dual(c));
      return space_spec::l1_sum(std::move(duals));
    }
  }
  throw invalid_spec("unknown space kind");
}

// Norm of a flat coordinate block under the given spec.
inline double norm_on(const space_spec& s, std::span<const double> x) {
  if (static_cast<int>(x.size()) != s.total_dim())
    throw dimension_mismatch("norm_on: got " + std::to_string(x.size()) + " coords for a space of dimension " +
                             std::to_string(s.total_dim()));
  switch (s.kind) {
    case space_kind::lp: {
      if (s.p == 1.0) {
        double acc = 0.0;
        for (double v : x) acc += std::abs(v);
        return acc;
      }
      if (s.p == 2.0) {
        double acc = 0.0;
        for (double v : x) acc += v * v;
        return std::sqrt(acc);
      }
      double acc = 0.0;
      for (double v : x) acc += std::pow(std::abs(v), s.p);
      return std::pow(acc, 1.0 / s.p);
    }
    case space_kind::sup: {
      double m = 0.0;
      for (double v : x) m = std::max(m, std::abs(v));
      return m;
    }
    case space_kind::l1_sum: {
      double acc = 0.0;
      std::size_t off = 0;
      for (const auto& c : s.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        acc += norm_on(c, x.subspan(off, n));
        off += n;
      }
      return acc;
    }
    case space_kind::c0_sum: {
      double m = 0.0;
      std::size_t off = 0;
      for (const auto& c : s.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        m = std::max(m, norm_on(c, x.subspan(off, n)));
        off += n;
      }
      return m;
    }
  }
  throw invalid_spec("unknown space kind");
}

// A vector in the space itself.
struct primal_vector {
  space_spec space;
  std::vector<double> coords;

  primal_vector() = default;
  primal_vector(space_spec s, std::vector<double> c) : space(std::move(s)), coords(std::move(c)) {
    if (static_cast<int>(coords.size()) != space.total_dim())
      throw dimension_mismatch("primal_vector: coordinate count does not match the space dimension");
  }
};

// A functional, stored against the same flat coordinates; its norm is the
// dual norm of `space`.
struct dual_element {
  space_spec space;  // the primal space this functional acts on
  std::vector<double> coords;

  dual_element() = default;
  dual_element(space_spec s, std::vector<double> c) : space(std::move(s)), coords(std::move(c)) {
    if (static_cast<int>(coords.size()) != space.total_dim())
      throw dimension_mismatch("dual_element: coordinate count does not match the space dimension");
  }
};

inline double norm(const primal_vector& v) { return norm_on(v.space, v.coords); }

inline double dual_norm(const dual_element& f) { return norm_on(dual(f.space), f.coords); }

// <f, v> in biorthogonal coordinates.
inline double pairing(const dual_element& f, const primal_vector& v) {
  if (!(f.space == v.space)) throw dimension_mismatch("pairing: functional and vector live over different spaces");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.coords.size(); ++i) acc += f.coords[i] * v.coords[i];
  return acc;
}

// Keep the first n coordinates, zero the rest.
inline dual_element truncate(const dual_element& f, int n) {
  const int d = static_cast<int>(f.coords.size());
  if (n < 0 || n > d) throw index_out_of_range("truncate: index " + std::to_string(n) + " outside [0, " + std::to_string(d) + "]");
  dual_element out = f;
  for (int i = n; i < d; ++i) out.coords[static_cast<std::size_t>(i)] = 0.0;
  return out;
}

namespace detail {

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Unit functional on `s` attaining its norm at the block x (norm_on(s,x) > 0).
// Writes the functional's coordinates into out.  This is the one duality
// engine: norming points are the same computation run against the dual spec.
inline void support_coords_into(const space_spec& s, std::span<const double> x, std::span<double> out) {
  switch (s.kind) {
    case space_kind::lp: {
      if (s.p == 1.0) {
        // dual sup norm: sign vector, zeros kept at zero (the canonical choice)
        for (std::size_t i = 0; i < x.size(); ++i) out[i] = static_cast<double>(sign_of(x[i]));
        return;
      }
      const double nx = norm_on(s, x);
      const double scale = std::pow(nx, s.p - 1.0);
      for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = static_cast<double>(sign_of(x[i])) * std::pow(std::abs(x[i]), s.p - 1.0) / scale;
      return;
    }
    case space_kind::sup: {
      // dual ell_1: all mass on the (necessarily unique) argmax coordinate
      std::size_t best = 0;
      double m = -1.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > m) {
          m = std::abs(x[i]);
          best = i;
        }
      for (std::size_t i = 0; i < x.size(); ++i)
        if (i != best && std::abs(x[i]) >= m * (1.0 - 1e-12))
          throw non_smooth_point("support functional on a sup leaf: tied max coordinates, no canonical choice");
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = 0.0;
      out[best] = static_cast<double>(sign_of(x[best]));
      return;
    }
    case space_kind::l1_sum: {
      // every nonzero component attains with a unit functional of its own
      std::size_t off = 0;
      for (const auto& c : s.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        auto xc = x.subspan(off, n);
        auto oc = out.subspan(off, n);
        if (norm_on(c, xc) > 0.0) {
          support_coords_into(c, xc, oc);
        } else {
          for (auto& v : oc) v = 0.0;
        }
        off += n;
      }
      return;
    }
    case space_kind::c0_sum: {
      // all mass on the unique component of maximal norm
      std::size_t off = 0, best_off = 0, best_n = 0;
      const space_spec* best_comp = nullptr;
      double m = -1.0;
      for (const auto& c : s.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        const double nc = norm_on(c, x.subspan(off, n));
        if (nc > m) {
          m = nc;
          best_comp = &c;
          best_off = off;
          best_n = n;
        }
        off += n;
      }
      off = 0;
      for (const auto& c : s.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        if (off != best_off && norm_on(c, x.subspan(off, n)) >= m * (1.0 - 1e-12))
          throw non_smooth_point("support functional on a c0-sum: tied component norms, no canonical choice");
        off += n;
      }
      for (auto& v : out) v = 0.0;
      support_coords_into(*best_comp, x.subspan(best_off, best_n), out.subspan(best_off, best_n));
      return;
    }
  }
  throw invalid_spec("unknown space kind");
}

}  // namespace detail

// Unit functional g in the dual of v.space with pairing(g, v) = norm(v).
inline dual_element support_functional(const primal_vector& v) {
  if (norm(v) == 0.0) throw zero_functional("support_functional: zero vector has no supporting functional");
  std::vector<double> out(v.coords.size());
  detail::support_coords_into(v.space, v.coords, out);
  return dual_element{v.space, std::move(out)};
}

// Unit vector x in `space` with pairing(f, x) = dual_norm(f).  Dually the
// same computation as support_functional, run against the dual spec.
inline primal_vector norming_point(const space_spec& space, const dual_element& f) {
  if (!(f.space == space)) throw dimension_mismatch("norming_point: functional lives over a different space");
  const space_spec d = dual(space);
  if (norm_on(d, f.coords) == 0.0) throw zero_functional("norming_point: zero functional attains nowhere");
  std::vector<double> out(f.coords.size());
  detail::support_coords_into(d, f.coords, out);
  return primal_vector{space, std::move(out)};
}

}  // namespace banachlab
