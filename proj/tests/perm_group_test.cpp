#include <catch2/catch_amalgamated.hpp>

#include <matroid3/errors.hpp>
#include <matroid3/perm_group.hpp>

#include "oracles.hpp"

using namespace matroid3;

TEST_CASE("trivial group") {
  PermGroup g = PermGroup::trivial(5);
  REQUIRE(g.order() == 1);
  REQUIRE(g.is_trivial());
  REQUIRE(g.contains(Perm::identity(5)));
  REQUIRE_FALSE(g.contains(Perm::transposition(5, 0, 1)));
}

TEST_CASE("empty generating set gives the trivial group") {
  PermGroup g = PermGroup::from_generators(5, {});
  REQUIRE(g.order() == 1);
}

TEST_CASE("symmetric group orders") {
  unsigned long long fact = 1;
  for (int n = 2; n <= 9; ++n) {
    fact = 1;
    for (int k = 2; k <= n; ++k) fact *= static_cast<unsigned long long>(k);
    REQUIRE(PermGroup::symmetric(n).order() == fact);
  }
}

TEST_CASE("classic small groups have the right order") {
  // Sym(4) from a transposition and a 4-cycle
  REQUIRE(PermGroup::from_generators(
              4, {Perm::from_cycles(4, {{1, 2}}), Perm::from_cycles(4, {{1, 2, 3, 4}})})
              .order() == 24);
  // cyclic of order 6
  REQUIRE(PermGroup::from_generators(6, {Perm::from_cycles(6, {{1, 2, 3, 4, 5, 6}})}).order() == 6);
  // Klein four-group
  REQUIRE(PermGroup::from_generators(
              4, {Perm::from_cycles(4, {{1, 2}, {3, 4}}), Perm::from_cycles(4, {{1, 3}, {2, 4}})})
              .order() == 4);
  // dihedral on the square
  REQUIRE(PermGroup::from_generators(4, {Perm::from_cycles(4, {{1, 2, 3, 4}}), Perm::from_cycles(4, {{1, 3}})})
              .order() == 8);
  // alternating on 4 points
  REQUIRE(PermGroup::from_generators(4, {Perm::from_cycles(4, {{1, 2, 3}}), Perm::from_cycles(4, {{2, 3, 4}})})
              .order() == 12);
}

TEST_CASE("order matches brute-force closure") {
  std::vector<std::vector<Perm>> gen_sets = {
      {Perm::from_cycles(6, {{1, 2, 3}, {4, 5, 6}}), Perm::from_cycles(6, {{1, 4}})},
      {Perm::from_cycles(7, {{1, 2, 3, 4, 5, 6, 7}}), Perm::from_cycles(7, {{2, 4}, {3, 7}})},
      {Perm::from_cycles(5, {{1, 2, 3, 4, 5}}), Perm::from_cycles(5, {{2, 3, 5, 4}})},
  };
  for (const auto& gens : gen_sets) {
    int n = gens.front().degree();
    auto elements = testutil::closure(n, gens);
    PermGroup g = PermGroup::from_generators(n, gens);
    REQUIRE(g.order() == elements.size());
  }
}

TEST_CASE("membership agrees with brute-force closure elementwise") {
  std::vector<Perm> gens = {Perm::from_cycles(6, {{1, 2, 3}, {4, 5, 6}}), Perm::from_cycles(6, {{1, 4}})};
  PermGroup g = PermGroup::from_generators(6, gens);
  auto members = testutil::closure(6, gens);
  std::set<Perm> member_set(members.begin(), members.end());
  for (const Perm& p : testutil::all_perms(6)) REQUIRE(g.contains(p) == (member_set.count(p) > 0));
}

TEST_CASE("degree mismatch in generators is rejected") {
  REQUIRE_THROWS_AS(PermGroup::from_generators(5, {Perm::identity(4)}), error);
}

TEST_CASE("stabilizer chain exposes per-level data") {
  PermGroup g = PermGroup::symmetric(4);
  REQUIRE(g.levels().size() == 3);
  unsigned long long prod = 1;
  for (const auto& lvl : g.levels()) {
    prod *= lvl.orbit.size();
    REQUIRE(lvl.orbit.size() == lvl.transversal.size());
    for (std::size_t i = 0; i < lvl.orbit.size(); ++i)
      REQUIRE(lvl.transversal[i](lvl.base) == lvl.orbit[i]);
    for (const Perm& gen : lvl.gens)
      for (int q = 0; q < lvl.base; ++q) REQUIRE(gen(q) == q);
  }
  REQUIRE(prod == 24);
  REQUIRE(g.level_by_point(0) == 0);
  REQUIRE(g.level_by_point(3) == -1);
}

TEST_CASE("tail levels generate pointwise stabilizers") {
  // gens of levels with base >= p must generate the full stabilizer of 0..p-1
  std::vector<Perm> gens = {Perm::from_cycles(6, {{1, 2, 3, 4, 5, 6}}), Perm::from_cycles(6, {{1, 2}})};
  PermGroup g = PermGroup::from_generators(6, gens);  // Sym(6)
  auto elements = testutil::all_perms(6);
  for (int p = 1; p <= 3; ++p) {
    std::vector<Perm> tail;
    for (const auto& lvl : g.levels())
      if (lvl.base >= p)
        for (const Perm& x : lvl.gens) tail.push_back(x);
    auto sub = testutil::closure(6, tail);
    unsigned long long expect = 0;
    for (const Perm& e : elements) {
      bool fixes = true;
      for (int q = 0; q < p; ++q)
        if (e(q) != q) fixes = false;
      if (fixes) ++expect;
    }
    REQUIRE(sub.size() == expect);
  }
}
