#include <catch2/catch_amalgamated.hpp>

#include <matroid3/errors.hpp>
#include <matroid3/perm.hpp>

#include "oracles.hpp"

using namespace matroid3;

TEST_CASE("identity maps every point to itself") {
  Perm e = Perm::identity(5);
  REQUIRE(e.degree() == 5);
  REQUIRE(e.is_identity());
  for (int i = 0; i < 5; ++i) REQUIRE(e(i) == i);
}

TEST_CASE("one-based image constructor round-trips") {
  Perm p = Perm::from_one_based_images({2, 3, 1, 4});
  REQUIRE(p(0) == 1);
  REQUIRE(p(1) == 2);
  REQUIRE(p(2) == 0);
  REQUIRE(p(3) == 3);
  REQUIRE_FALSE(p.is_identity());
}

TEST_CASE("malformed images are rejected") {
  REQUIRE_THROWS_AS(Perm::from_one_based_images({1, 1, 3}), error);
  REQUIRE_THROWS_AS(Perm::from_one_based_images({0, 2, 3}), error);
  REQUIRE_THROWS_AS(Perm::from_one_based_images({1, 2, 4}), error);
  try {
    Perm::from_one_based_images({2, 2, 3});
    FAIL("expected an exception");
  } catch (const error& e) {
    REQUIRE(e.code() == errc::malformed_permutation);
  }
}

TEST_CASE("cycle constructor") {
  Perm p = Perm::from_cycles(6, {{1, 2, 3}, {4, 5}});
  REQUIRE(p(0) == 1);
  REQUIRE(p(1) == 2);
  REQUIRE(p(2) == 0);
  REQUIRE(p(3) == 4);
  REQUIRE(p(4) == 3);
  REQUIRE(p(5) == 5);
  REQUIRE_THROWS_AS(Perm::from_cycles(4, {{1, 2}, {2, 3}}), error);  // not disjoint
  REQUIRE_THROWS_AS(Perm::from_cycles(3, {{1, 4}}), error);          // out of range
}

TEST_CASE("composition acts right-to-left") {
  Perm a = Perm::from_cycles(4, {{1, 2}});
  Perm b = Perm::from_cycles(4, {{2, 3}});
  Perm ab = a.compose(b);
  for (int x = 0; x < 4; ++x) REQUIRE(ab(x) == a(b(x)));
  REQUIRE(ab == Perm::from_cycles(4, {{1, 2, 3}}));
}

TEST_CASE("inverse composes to identity") {
  std::mt19937 rng(20260816u);
  for (int trial = 0; trial < 50; ++trial) {
    Perm p = testutil::random_perm(rng, 8);
    REQUIRE(p.compose(p.inverse()).is_identity());
    REQUIRE(p.inverse().compose(p).is_identity());
  }
}

TEST_CASE("transposition factory") {
  Perm t = Perm::transposition(5, 1, 3);
  REQUIRE(t(1) == 3);
  REQUIRE(t(3) == 1);
  REQUIRE(t(0) == 0);
  REQUIRE(t.compose(t).is_identity());
}

TEST_CASE("apply_mask relabels set bits") {
  Perm p = Perm::from_cycles(5, {{1, 2, 3}});
  // atoms {1,2} (0-based {0,1}) map to {2,3} (0-based {1,2})
  REQUIRE(p.apply_mask(0b00011u) == 0b00110u);
  REQUIRE(Perm::identity(5).apply_mask(0b10101u) == 0b10101u);
}

TEST_CASE("cycle printing is one-based") {
  REQUIRE(Perm::from_cycles(4, {{1, 2}}).to_string() == "(1 2)");
  REQUIRE(Perm::identity(3).to_string() == "()");
}

TEST_CASE("total order is consistent with equality") {
  std::mt19937 rng(7u);
  for (int trial = 0; trial < 30; ++trial) {
    Perm a = testutil::random_perm(rng, 6);
    Perm b = testutil::random_perm(rng, 6);
    if (a == b) {
      REQUIRE_FALSE(a < b);
      REQUIRE_FALSE(b < a);
    } else {
      REQUIRE((a < b) != (b < a));
    }
  }
}
