#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "banachlab/sampling.hpp"
#include "banachlab/space.hpp"
#include "oracles.hpp"

using namespace banachlab;

TEST_CASE("leaf norms match hand values", "[space]") {
  CHECK(norm(primal_vector(space_spec::lp(2.0, 3), {3.0, 4.0, 0.0})) == Catch::Approx(5.0).margin(1e-12));
  CHECK(norm(primal_vector(space_spec::lp(1.0, 2), {0.5, -0.5})) == Catch::Approx(1.0).margin(1e-15));
  CHECK(norm(primal_vector(space_spec::sup(3), {0.2, -0.9, 0.1})) == Catch::Approx(0.9).margin(1e-15));
  CHECK(norm(primal_vector(space_spec::lp(3.0, 2), {1.0, 1.0})) == Catch::Approx(std::pow(2.0, 1.0 / 3.0)).margin(1e-12));
}

TEST_CASE("sum norms combine blocks", "[space]") {
  const auto s = space_spec::l1_sum({space_spec::lp(2.0, 2), space_spec::lp(1.0, 2)});
  CHECK(norm(primal_vector(s, {3.0, 4.0, 0.5, -0.5})) == Catch::Approx(6.0).margin(1e-12));

  const auto c = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::sup(2)});
  CHECK(norm(primal_vector(c, {0.6, 0.8, 0.0, 0.3})) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("dual norm lives on the structural dual", "[space]") {
  const auto s = space_spec::lp(1.0, 2);
  const dual_element f(s, {0.3, -0.9});
  CHECK(dual_norm(f) == Catch::Approx(0.9).margin(1e-15));  // sup norm of the coefficients

  // dual of a c0-sum is the l1-sum of the component duals
  const auto c = space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(2.0, 2)});
  const dual_element g(c, {0.6, 0.8, 0.0, 1.0});
  CHECK(dual_norm(g) == Catch::Approx(2.0).margin(1e-12));
}

TEST_CASE("structural dual round trips", "[space]") {
  const auto s = space_spec::c0_sum({space_spec::lp(3.0, 2), space_spec::sup(2)});
  const auto d = dual(s);
  REQUIRE(d.kind == space_kind::l1_sum);
  REQUIRE(d.components.size() == 2);
  CHECK(d.components[0].kind == space_kind::lp);
  CHECK(d.components[0].p == Catch::Approx(1.5));
  CHECK(d.components[1].kind == space_kind::lp);
  CHECK(d.components[1].p == Catch::Approx(1.0));

  // lp(1) pairs with the sup leaf, and the sup leaf pairs back with lp(1)
  CHECK(dual(space_spec::lp(1.0, 4)).kind == space_kind::sup);
  CHECK(dual(space_spec::sup(4)) == space_spec::lp(1.0, 4));
  CHECK(dual(dual(s)) == s);
}

TEST_CASE("pairing is the coordinate dot product", "[space]") {
  const auto s = space_spec::lp(2.0, 2);
  CHECK(pairing(dual_element(s, {1.0, 2.0}), primal_vector(s, {3.0, 4.0})) == Catch::Approx(11.0));
  CHECK_THROWS_AS(pairing(dual_element(space_spec::lp(2.0, 2), {1.0, 0.0}),
                          primal_vector(space_spec::lp(3.0, 2), {1.0, 0.0})),
                  dimension_mismatch);
}

TEST_CASE("pairing never beats the norm product", "[space][property]") {
  // Holder on every space kind, 10^4 random pairs
  const space_spec specs[] = {
      space_spec::lp(1.0, 3),
      space_spec::lp(1.7, 4),
      space_spec::lp(2.0, 5),
      space_spec::lp(3.0, 3),
      space_spec::sup(4),
      space_spec::l1_sum({space_spec::lp(2.0, 2), space_spec::sup(2)}),
      space_spec::c0_sum({space_spec::lp(2.0, 2), space_spec::lp(1.5, 3)}),
  };
  for (const auto& s : specs) {
    rng r = rng::substream(101, static_cast<std::uint64_t>(s.total_dim()), 0);
    for (int k = 0; k < 1500; ++k) {
      std::vector<double> xc(static_cast<std::size_t>(s.total_dim()));
      std::vector<double> fc(xc.size());
      for (auto& t : xc) t = r.normal();
      for (auto& t : fc) t = r.normal();
      const primal_vector x(s, xc);
      const dual_element f(s, fc);
      CHECK(std::abs(pairing(f, x)) <= dual_norm(f) * norm(x) + 1e-9);
    }
  }
}

TEST_CASE("support functional attains the norm", "[space][property]") {
  const space_spec specs[] = {
      space_spec::lp(2.0, 4),
      space_spec::lp(3.0, 3),
      space_spec::lp(1.5, 5),
      space_spec::l1_sum({space_spec::lp(2.0, 2), space_spec::lp(3.0, 2)}),
  };
  for (const auto& s : specs) {
    rng r = rng::substream(102, static_cast<std::uint64_t>(s.total_dim()), 1);
    for (int k = 0; k < 500; ++k) {
      const primal_vector x(s, random_unit(s, r));
      const auto f = support_functional(x);
      CHECK(dual_norm(f) == Catch::Approx(1.0).margin(1e-9));
      CHECK(pairing(f, x) == Catch::Approx(norm(x)).margin(1e-9));
    }
  }
}

TEST_CASE("support functional frozen examples", "[space]") {
  // l2: the functional is x itself (normalized); lp(1): the sign pattern
  const auto f = support_functional(primal_vector(space_spec::lp(2.0, 2), {3.0, 4.0}));
  CHECK(f.coords[0] == Catch::Approx(0.6).margin(1e-12));
  CHECK(f.coords[1] == Catch::Approx(0.8).margin(1e-12));

  const auto g = support_functional(primal_vector(space_spec::lp(1.0, 3), {0.5, -0.2, 0.0}));
  CHECK(g.coords[0] == Catch::Approx(1.0));
  CHECK(g.coords[1] == Catch::Approx(-1.0));
  CHECK(g.coords[2] == Catch::Approx(0.0));

  CHECK_THROWS_AS(support_functional(primal_vector(space_spec::lp(2.0, 2), {0.0, 0.0})), zero_functional);
  // sup leaf with a tied max has no unique support functional
  CHECK_THROWS_AS(support_functional(primal_vector(space_spec::sup(2), {0.7, 0.7})), non_smooth_point);
  // c0-sum with two components tied at the max norm: same story
  const auto c = space_spec::c0_sum({space_spec::lp(2.0, 1), space_spec::lp(2.0, 1)});
  CHECK_THROWS_AS(support_functional(primal_vector(c, {0.5, 0.5})), non_smooth_point);
}

TEST_CASE("norming point frozen examples", "[space]") {
  const auto s = space_spec::lp(2.0, 2);
  const auto y = norming_point(s, dual_element(s, {3.0, 4.0}));
  CHECK(y.coords[0] == Catch::Approx(0.6).margin(1e-12));
  CHECK(y.coords[1] == Catch::Approx(0.8).margin(1e-12));

  // lp(3): f = (1,1) norms at x_i = 2^(-1/3), pairing 2^(2/3)
  const auto s3 = space_spec::lp(3.0, 2);
  const auto y3 = norming_point(s3, dual_element(s3, {1.0, 1.0}));
  CHECK(y3.coords[0] == Catch::Approx(0.7937005259840998).margin(1e-12));
  CHECK(y3.coords[1] == Catch::Approx(0.7937005259840998).margin(1e-12));
  CHECK(pairing(dual_element(s3, {1.0, 1.0}), y3) == Catch::Approx(1.5874010519681994).margin(1e-12));
}

TEST_CASE("norming point agrees with gradient ascent", "[space][oracle]") {
  const auto s = space_spec::lp(3.0, 3);
  rng r(21);
  for (int k = 0; k < 10; ++k) {
    std::vector<double> fc(3);
    for (auto& t : fc) t = r.normal();
    const dual_element f(s, fc);
    if (dual_norm(f) < 0.1) continue;
    const auto y = norming_point(s, f);
    const double direct = pairing(f, y);
    const double ascended = oracles::norming_value_ascent(s, fc);
    CHECK(direct == Catch::Approx(dual_norm(f)).margin(1e-9));
    CHECK(direct == Catch::Approx(ascended).margin(1e-8));
  }
}

TEST_CASE("truncation of functionals zeroes the tail", "[space]") {
  const auto s = space_spec::lp(1.0, 3);
  const auto f = truncate(dual_element(s, {0.6, 0.8, 0.5}), 2);
  CHECK(f.coords[0] == 0.6);
  CHECK(f.coords[1] == 0.8);
  CHECK(f.coords[2] == 0.0);
  CHECK_THROWS_AS(truncate(dual_element(s, {1.0, 0.0, 0.0}), 4), index_out_of_range);
}

TEST_CASE("spec validation rejects bad input", "[space][errors]") {
  CHECK_THROWS_AS(space_spec::lp(0.5, 2), invalid_spec);
  CHECK_THROWS_AS(space_spec::lp(2.0, 0), invalid_spec);
  CHECK_THROWS_AS(space_spec::sup(0), invalid_spec);
  CHECK_THROWS_AS(space_spec::l1_sum({}), invalid_spec);
  CHECK_THROWS_AS(primal_vector(space_spec::lp(2.0, 2), {1.0}), dimension_mismatch);
  CHECK_THROWS_AS(dual_element(space_spec::lp(2.0, 2), {1.0, 2.0, 3.0}), dimension_mismatch);
}
