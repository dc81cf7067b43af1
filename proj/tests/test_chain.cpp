#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "banachlab/chain.hpp"
#include "banachlab/sampling.hpp"
#include "oracles.hpp"

using namespace banachlab;

TEST_CASE("diagonal enumeration of component/basis pairs", "[chain]") {
  CHECK(chain_index(1, 1) == 1);
  CHECK(chain_index(2, 1) == 2);
  CHECK(chain_index(1, 2) == 3);
  CHECK(chain_index(3, 1) == 4);
  CHECK(chain_index(2, 2) == 5);
  CHECK(chain_index(1, 3) == 6);
  CHECK_THROWS_AS(chain_index(0, 1), index_out_of_range);
  CHECK_THROWS_AS(chain_index(1, 0), index_out_of_range);
}

TEST_CASE("subspace chain over two 2-dim components", "[chain]") {
  const auto ch = subspace_chain::over_components({2, 2});
  // enumeration order: (1,1) (2,1) (1,2) (3,1)->skip (2,2) -> E_k grows
  // one flat coordinate at a time, repeating when the pair is out of range
  REQUIRE(ch.steps() == 5);
  CHECK(ch.sets[0].empty());
  CHECK(ch.sets[1] == std::vector<int>{0});
  CHECK(ch.sets[2] == std::vector<int>{0, 2});
  CHECK(ch.sets[3] == std::vector<int>{0, 1, 2});
  CHECK(ch.sets[4] == std::vector<int>{0, 1, 2});  // (3,1) skipped: no third component
  CHECK(ch.sets[5] == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("chain eventually exhausts every coordinate", "[chain][property]") {
  const auto ch = subspace_chain::over_components({3, 1, 2});
  CHECK(ch.sets.back().size() == 6);
  for (std::size_t k = 1; k < ch.sets.size(); ++k) {
    // nested and growing by at most one
    CHECK(ch.sets[k].size() >= ch.sets[k - 1].size());
    CHECK(ch.sets[k].size() - ch.sets[k - 1].size() <= 1);
    CHECK(std::includes(ch.sets[k].begin(), ch.sets[k].end(), ch.sets[k - 1].begin(), ch.sets[k - 1].end()));
  }
}

TEST_CASE("minimum-norm extension by zero fill", "[chain]") {
  const auto s = space_spec::lp(2.0, 2);
  const auto h = hahn_banach_min_extension(s, {0}, std::vector<double>{1.0});
  CHECK(h.coords[0] == 1.0);
  CHECK(h.coords[1] == 0.0);
  CHECK(dual_norm(h) == Catch::Approx(1.0));

  // on ell_1 the mass could also ride on the second coordinate: not unique
  CHECK_THROWS_AS(hahn_banach_min_extension(space_spec::lp(1.0, 2), {0}, std::vector<double>{1.0}),
                  non_unique_extension);
}

TEST_CASE("zero fill matches the Lagrange solve on ell_2 leaves", "[chain][oracle]") {
  rng r(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + r.uniform_int(5);  // 2..6
    const int m = 1 + r.uniform_int(dim);
    std::vector<int> sub;
    while (static_cast<int>(sub.size()) < m) {
      const int i = r.uniform_int(dim);
      if (std::find(sub.begin(), sub.end(), i) == sub.end()) sub.push_back(i);
    }
    std::vector<double> g(sub.size());
    for (auto& v : g) v = r.normal();
    const auto lib = hahn_banach_min_extension(space_spec::lp(2.0, dim), sub, g);
    const auto kkt = oracles::min_extension_l2(dim, sub, g);
    for (int i = 0; i < dim; ++i)
      CHECK(lib.coords[static_cast<std::size_t>(i)] == Catch::Approx(kkt[static_cast<std::size_t>(i)]).margin(1e-8));
  }
}

TEST_CASE("extension preserves the restricted norm", "[chain][property]") {
  // the zero fill is an extension with the same dual norm as the data on
  // the subspace, which is the minimum possible
  const space_spec specs[] = {
      space_spec::lp(2.0, 4),
      space_spec::lp(3.0, 3),
      space_spec::l1_sum({space_spec::lp(2.0, 2), space_spec::lp(3.0, 2)}),
  };
  rng r(32);
  for (const auto& s : specs) {
    for (int trial = 0; trial < 100; ++trial) {
      const int dim = s.total_dim();
      std::vector<int> sub;
      for (int i = 0; i < dim; ++i)
        if (r.uniform() < 0.5) sub.push_back(i);
      if (sub.empty()) continue;
      std::vector<double> g(sub.size());
      for (auto& v : g) v = r.normal();
      dual_element h(s, std::vector<double>(static_cast<std::size_t>(dim), 0.0));
      bool unique = true;
      try {
        h = hahn_banach_min_extension(s, sub, g);
      } catch (const non_unique_extension&) {
        unique = false;
      }
      if (!unique) continue;
      for (std::size_t k = 0; k < sub.size(); ++k)
        CHECK(h.coords[static_cast<std::size_t>(sub[k])] == g[k]);
      // restricting back loses nothing: same coordinates, zero elsewhere
      double masked = 0.0;
      std::vector<double> copy(h.coords);
      for (int i = 0; i < dim; ++i)
        if (std::find(sub.begin(), sub.end(), i) == sub.end()) copy[static_cast<std::size_t>(i)] = 0.0;
      masked = norm_on(dual(s), copy);
      CHECK(dual_norm(h) == Catch::Approx(masked).margin(1e-12));
    }
  }
}

TEST_CASE("non-unique extensions are detected, unique sup cases pass", "[chain]") {
  // free coordinate inside a sup-dual block with nonzero fixed part
  CHECK_THROWS_AS(hahn_banach_min_extension(space_spec::sup(1), {}, std::vector<double>{}), invalid_spec);

  // primal sup leaf: dual is ell_1, strictly monotone coordinatewise, so
  // zero fill is the unique minimum
  const auto h = hahn_banach_min_extension(space_spec::sup(3), {1}, std::vector<double>{0.7});
  CHECK(h.coords[0] == 0.0);
  CHECK(h.coords[1] == 0.7);
  CHECK(h.coords[2] == 0.0);

  // primal lp(1): dual is the sup norm; a free coordinate can hide below
  // the fixed one
  CHECK_THROWS_AS(hahn_banach_min_extension(space_spec::lp(1.0, 3), {0}, std::vector<double>{0.5}),
                  non_unique_extension);

  // c0-sum dual is an l1-sum of blocks: a fully free component must stay
  // zero (the l1-sum charges it), but a sup block hiding below the max
  // breaks uniqueness
  const auto cs = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(2.0, 2)});
  const auto hc = hahn_banach_min_extension(cs, {0, 1}, std::vector<double>{0.3, 0.4});
  CHECK(hc.coords[2] == 0.0);
  CHECK(hc.coords[3] == 0.0);

  const auto mixed = space_spec::l1_sum({space_spec::lp(1.0, 2), space_spec::lp(2.0, 2)});
  // dual blocks: sup(2) and l2(2); fixing one coordinate of the sup block
  // leaves the other free below it
  CHECK_THROWS_AS(hahn_banach_min_extension(mixed, {0}, std::vector<double>{0.9}), non_unique_extension);
}

TEST_CASE("extension argument validation", "[chain][errors]") {
  const auto s = space_spec::lp(2.0, 3);
  CHECK_THROWS_AS(hahn_banach_min_extension(s, {0, 0}, std::vector<double>{1.0, 1.0}), invalid_spec);
  CHECK_THROWS_AS(hahn_banach_min_extension(s, {3}, std::vector<double>{1.0}), index_out_of_range);
  CHECK_THROWS_AS(hahn_banach_min_extension(s, {0}, std::vector<double>{1.0, 2.0}), dimension_mismatch);
}

TEST_CASE("c0-sum chain retraction frozen example", "[chain]") {
  // two ell_2 pairs; functional supported on E_1 with norm 2: retracts to
  // the normalized restriction
  const auto s = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(2.0, 2)});
  const auto ch = subspace_chain::over_components({2, 2});
  const auto r = c0_sum_retract(s, ch, dual_element(s, {2.0, 0.0, 0.0, 0.0}));
  CHECK(r.coords[0] == Catch::Approx(1.0));
  CHECK(r.coords[1] == 0.0);
  CHECK(r.coords[2] == 0.0);
  CHECK(r.coords[3] == 0.0);

  // inside the ball nothing moves
  const auto id = c0_sum_retract(s, ch, dual_element(s, {0.3, 0.1, 0.2, 0.0}));
  CHECK(id.coords == std::vector<double>{0.3, 0.1, 0.2, 0.0});
}

TEST_CASE("c0-sum chain retraction lands on the sphere", "[chain][property]") {
  const auto s = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(2.0, 3)});
  const auto ch = subspace_chain::over_components({2, 3});
  rng r(33);
  const auto D = dual(s);
  for (int trial = 0; trial < 200; ++trial) {
    auto coords = random_with_norm(D, 1.0 + 2.0 * r.uniform(), r);
    const dual_element f(s, coords);
    const auto out = c0_sum_retract(s, ch, f);
    CHECK(dual_norm(out) == Catch::Approx(1.0).margin(1e-9));
    // retracting again barely moves: the output sits on the sphere up to
    // rounding, so the second pass renormalizes by a factor of 1 + O(ulp)
    const auto again = c0_sum_retract(s, ch, out);
    for (std::size_t i = 0; i < out.coords.size(); ++i)
      CHECK(std::abs(again.coords[i] - out.coords[i]) <= 1e-9);
  }
}

TEST_CASE("c0-sum chain retraction rejects unsupported components", "[chain][errors]") {
  const auto bad = space_spec::c0_sum({space_spec::lp(1.0, 2), space_spec::lp(2.0, 2)});
  const auto ch = subspace_chain::over_components({2, 2});
  CHECK_THROWS_AS(c0_sum_retract(bad, ch, dual_element(bad, {2.0, 0.0, 0.0, 0.0})), precondition_modulus);

  const auto s = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(2.0, 2)});
  const auto wrong = subspace_chain::over_components({2, 3});
  CHECK_THROWS_AS(c0_sum_retract(s, wrong, dual_element(s, {2.0, 0.0, 0.0, 0.0})), component_mismatch);
}
