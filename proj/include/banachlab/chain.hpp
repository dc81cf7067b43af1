#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "banachlab/errors.hpp"
#include "banachlab/modulus.hpp"
#include "banachlab/space.hpp"

// Retraction machinery for c0-sums: a nested chain of coordinate
// subspaces that walks the components diagonally, minimum-norm
// Hahn-Banach extensions along it, and the blend/crossing construction
// that turns both into a retraction of the dual ball.

namespace banachlab {

// Diagonal enumeration of (component i, basis level j), both 1-based:
// (1,1) -> 1, (2,1) -> 2, (1,2) -> 3, (3,1) -> 4, ...
inline long long chain_index(long long i, long long j) {
  if (i < 1 || j < 1) throw index_out_of_range("chain_index: indices are 1-based");
  return (i + j - 1) * (i + j - 2) / 2 + j;
}

// E_0 subset E_1 subset ... of coordinate subspaces.  E_k contains basis
// vector l of component c exactly when chain_index(c, l) <= k; steps whose
// (c, l) falls outside the finite component list repeat the previous set.
struct subspace_chain {
  std::vector<int> component_dims;
  std::vector<std::vector<int>> sets;  // sets[k] = flat indices of E_k, sorted

  static subspace_chain over_components(std::vector<int> dims) {
    if (dims.empty()) throw invalid_spec("subspace_chain: no components");
    subspace_chain ch;
    ch.component_dims = std::move(dims);
    std::vector<int> offsets(ch.component_dims.size(), 0);
    for (std::size_t c = 1; c < ch.component_dims.size(); ++c)
      offsets[c] = offsets[c - 1] + ch.component_dims[c - 1];
    long long last = 0;
    for (std::size_t c = 0; c < ch.component_dims.size(); ++c)
      for (int l = 1; l <= ch.component_dims[c]; ++l)
        last = std::max(last, chain_index(static_cast<long long>(c) + 1, l));
    ch.sets.assign(static_cast<std::size_t>(last) + 1, {});
    for (long long k = 1; k <= last; ++k) {
      ch.sets[static_cast<std::size_t>(k)] = ch.sets[static_cast<std::size_t>(k - 1)];
      // invert k -> (i, j) on the diagonal grid
      long long d = 2;
      while ((d - 1) * (d - 2) / 2 + (d - 1) < k) ++d;  // d = i + j of step k
      const long long j = k - (d - 1) * (d - 2) / 2;
      const long long i = d - j;
      if (i >= 1 && i <= static_cast<long long>(ch.component_dims.size()) && j >= 1 &&
          j <= ch.component_dims[static_cast<std::size_t>(i - 1)]) {
        auto& set = ch.sets[static_cast<std::size_t>(k)];
        set.push_back(offsets[static_cast<std::size_t>(i - 1)] + static_cast<int>(j) - 1);
        std::sort(set.begin(), set.end());
      }
    }
    return ch;
  }

  int steps() const { return static_cast<int>(sets.size()) - 1; }
};

namespace detail {

// Uniqueness of the zero-filled minimum-norm extension, checked against the
// dual spec D the extension lives in.  Free coordinates can hide inside a
// sup-norm leaf (or a sup-norm sum level) without changing the norm, which
// is exactly the non-unique case.
inline bool zero_fill_unique(const space_spec& D, std::span<const char> fixed, std::span<const double> h) {
  switch (D.kind) {
    case space_kind::lp:
      return true;  // p < infinity: any nonzero free coordinate strictly grows the norm
    case space_kind::sup: {
      bool any_free = false;
      double fixed_max = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        if (fixed[i])
          fixed_max = std::max(fixed_max, std::abs(h[i]));
        else
          any_free = true;
      }
      return !any_free || fixed_max == 0.0;
    }
    case space_kind::l1_sum: {
      // the total norm is a sum, so each component minimizes independently
      std::size_t off = 0;
      for (const auto& c : D.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        if (!zero_fill_unique(c, fixed.subspan(off, n), h.subspan(off, n))) return false;
        off += n;
      }
      return true;
    }
    case space_kind::c0_sum: {
      // sup of component norms: a free coordinate inside a component that
      // sits strictly below the max can move without changing the norm
      std::size_t off = 0;
      double global = 0.0;
      for (const auto& c : D.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        global = std::max(global, norm_on(c, h.subspan(off, n)));
        off += n;
      }
      off = 0;
      for (const auto& c : D.components) {
        const std::size_t n = static_cast<std::size_t>(c.total_dim());
        bool any_free = false;
        for (std::size_t i = off; i < off + n; ++i)
          if (!fixed[i]) any_free = true;
        if (any_free) {
          if (norm_on(c, h.subspan(off, n)) < global) return false;
          if (!zero_fill_unique(c, fixed.subspan(off, n), h.subspan(off, n))) return false;
        }
        off += n;
      }
      return true;
    }
  }
  return false;
}

}  // namespace banachlab::detail

// Minimum-norm extension of a functional given on a coordinate subspace of
// `space` to the whole space.  For 1-unconditional norms filling the free
// coordinates with zero is exact (any nonzero entry can only grow the
// norm), and it preserves the functional's norm on the subspace, so this is
// the Hahn-Banach extension whenever it is unique.
//
// `subspace` holds flat basis indices; `g` the functional's coefficients on
// them, in the same order.
inline dual_element hahn_banach_min_extension(const space_spec& space, const std::vector<int>& subspace,
                                              std::span<const double> g) {
  const int n = space.total_dim();
  if (subspace.size() != g.size()) throw dimension_mismatch("hahn_banach_min_extension: index/value count mismatch");
  if (subspace.empty()) throw invalid_spec("hahn_banach_min_extension: empty subspace");
  std::vector<double> h(static_cast<std::size_t>(n), 0.0);
  std::vector<char> fixed(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < subspace.size(); ++k) {
    const int idx = subspace[k];
    if (idx < 0 || idx >= n) throw index_out_of_range("hahn_banach_min_extension: basis index out of range");
    if (fixed[static_cast<std::size_t>(idx)]) throw invalid_spec("hahn_banach_min_extension: repeated basis index");
    fixed[static_cast<std::size_t>(idx)] = 1;
    h[static_cast<std::size_t>(idx)] = g[k];
  }
  const space_spec D = dual(space);
  if (!detail::zero_fill_unique(D, std::span<const char>(fixed.data(), fixed.size()), h))
    throw non_unique_extension("hahn_banach_min_extension: minimum-norm extension is not unique over " +
                               std::string(D.kind == space_kind::sup ? "a sup-norm dual" : "a sup-norm sum level"));
  return dual_element{space, std::move(h)};
}

namespace detail {

inline double norm_masked(const space_spec& D, std::span<const double> f, const std::vector<int>& keep,
                          std::vector<double>& scratch) {
  std::fill(scratch.begin(), scratch.end(), 0.0);
  for (int idx : keep) scratch[static_cast<std::size_t>(idx)] = f[static_cast<std::size_t>(idx)];
  return norm_on(D, scratch);
}

}  // namespace banachlab::detail

// Retraction of the dual ball of a c0-sum along a subspace chain.  The
// components must be ell_p leaves with 1 < p < infinity so that every dual
// leaf is uniformly convex and the extensions along the chain are unique.
//
// Outside the ball: n = first chain step whose restriction has norm >= 1,
// then the unique lambda in (0, 1] with
//   || lambda R_n f + (1 - lambda) H_{n-1}(R_{n-1} f) || = 1
// (both terms agree on E_{n-1}, so lambda only scales the newest
// coordinate), extended by zero.
inline dual_element c0_sum_retract(const space_spec& space, const subspace_chain& chain, const dual_element& f) {
  if (space.kind != space_kind::c0_sum) throw unsupported_space("c0_sum_retract: space is not a c0-sum");
  if (!(f.space == space)) throw dimension_mismatch("c0_sum_retract: functional lives over a different space");
  if (chain.component_dims.size() != space.components.size())
    throw component_mismatch("c0_sum_retract: chain component count mismatch");
  for (std::size_t c = 0; c < space.components.size(); ++c) {
    const auto& comp = space.components[c];
    if (!comp.is_leaf() || comp.kind != space_kind::lp || comp.p <= 1.0)
      throw precondition_modulus("c0_sum_retract: component duals must be uniformly convex (ell_p leaves, 1 < p)");
    if (chain.component_dims[c] != comp.dim) throw component_mismatch("c0_sum_retract: chain dimensions mismatch");
  }

  const space_spec D = dual(space);
  const double nf = norm_on(D, f.coords);
  if (nf <= 1.0) return f;

  std::vector<double> scratch(f.coords.size());
  const int K = chain.steps();
  int n = -1;
  for (int k = 1; k <= K; ++k) {
    if (detail::norm_masked(D, f.coords, chain.sets[static_cast<std::size_t>(k)], scratch) >= 1.0) {
      n = k;
      break;
    }
  }
  if (n < 0) throw bisection_failure("c0_sum_retract: no crossing step although the norm exceeds 1");

  std::vector<double> out(f.coords.size(), 0.0);
  if (n == 1) {
    // normalize the first restriction and extend by zero
    const double rn = detail::norm_masked(D, f.coords, chain.sets[1], scratch);
    for (int idx : chain.sets[1]) out[static_cast<std::size_t>(idx)] = f.coords[static_cast<std::size_t>(idx)] / rn;
    return dual_element{space, std::move(out)};
  }

  // blend: equals f on E_{n-1}, lambda * f on the coordinate added at step n
  const auto& prev = chain.sets[static_cast<std::size_t>(n - 1)];
  const auto& cur = chain.sets[static_cast<std::size_t>(n)];
  std::vector<int> fresh;
  std::set_difference(cur.begin(), cur.end(), prev.begin(), prev.end(), std::back_inserter(fresh));
  auto blended_norm = [&](double lambda) {
    std::fill(scratch.begin(), scratch.end(), 0.0);
    for (int idx : prev) scratch[static_cast<std::size_t>(idx)] = f.coords[static_cast<std::size_t>(idx)];
    for (int idx : fresh) scratch[static_cast<std::size_t>(idx)] = lambda * f.coords[static_cast<std::size_t>(idx)];
    return norm_on(D, scratch);
  };
  double lo = 0.0, hi = 1.0;
  if (!(blended_norm(0.0) < 1.0 && blended_norm(1.0) >= 1.0))
    throw bisection_failure("c0_sum_retract: crossing bracket is degenerate");
  for (int it = 0; it < 100 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (blended_norm(mid) < 1.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = hi;
  for (int idx : prev) out[static_cast<std::size_t>(idx)] = f.coords[static_cast<std::size_t>(idx)];
  for (int idx : fresh) out[static_cast<std::size_t>(idx)] = lambda * f.coords[static_cast<std::size_t>(idx)];
  return dual_element{space, std::move(out)};
}

}  // namespace banachlab
