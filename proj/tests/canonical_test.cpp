#include <catch2/catch_amalgamated.hpp>

#include <matroid3/canonical.hpp>

#include "oracles.hpp"

using namespace matroid3;
using testutil::make_blocks;

TEST_CASE("minimal image under the full symmetric group matches brute force") {
  std::mt19937 rng(20260816u);
  for (int n = 4; n <= 7; ++n) {
    auto elements = testutil::all_perms(n);
    for (int trial = 0; trial < 120; ++trial) {
      BlockList l = testutil::random_blocklist(rng, n);
      BlockList expect = testutil::brute_min_image(elements, l);
      BlockList got = minimal_image(n, l);
      INFO("n=" << n << " input=" << blocklist_to_string(l));
      REQUIRE(got == expect);
    }
  }
}

TEST_CASE("minimal image under proper subgroups matches brute force") {
  std::mt19937 rng(99u);
  for (int trial = 0; trial < 150; ++trial) {
    int n = std::uniform_int_distribution<int>(4, 7)(rng);
    std::vector<Perm> gens = {testutil::random_perm(rng, n)};
    if (trial % 2) gens.push_back(testutil::random_perm(rng, n));
    auto elements = testutil::closure(n, gens);
    PermGroup g = PermGroup::from_generators(n, gens);
    BlockList l = testutil::random_blocklist(rng, n);
    BlockList expect = testutil::brute_min_image(elements, l);
    BlockList got = minimal_image(n, g, l);
    INFO("n=" << n << " |G|=" << elements.size() << " input=" << blocklist_to_string(l));
    REQUIRE(got == expect);
  }
}

TEST_CASE("minimal image is idempotent and orbit-invariant") {
  std::mt19937 rng(55u);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 7;
    BlockList l = testutil::random_blocklist(rng, n);
    BlockList m = minimal_image(n, l);
    REQUIRE(minimal_image(n, m) == m);
    Perm g = testutil::random_perm(rng, n);
    REQUIRE(minimal_image(n, relabel(g, l)) == m);
  }
}

TEST_CASE("distinct orbits give distinct canonical forms") {
  std::mt19937 rng(77u);
  int n = 5;
  auto elements = testutil::all_perms(n);
  for (int trial = 0; trial < 60; ++trial) {
    BlockList a = testutil::random_blocklist(rng, n);
    BlockList b = testutil::random_blocklist(rng, n);
    bool isomorphic = false;
    for (const Perm& g : elements)
      if (relabel(g, a) == b) isomorphic = true;
    REQUIRE((minimal_image(n, a) == minimal_image(n, b)) == isomorphic);
  }
}

TEST_CASE("is_minimal_in_orbit agrees with the brute-force minimum") {
  std::mt19937 rng(123u);
  for (int trial = 0; trial < 200; ++trial) {
    int n = std::uniform_int_distribution<int>(4, 7)(rng);
    BlockList l = testutil::random_blocklist(rng, n);
    bool expect = (l == testutil::brute_min_image(testutil::all_perms(n), l));
    REQUIRE(is_minimal_in_orbit(n, cached_symmetric_group(n), l) == expect);
  }
}

TEST_CASE("is_minimal_in_orbit under subgroups") {
  std::mt19937 rng(321u);
  for (int trial = 0; trial < 150; ++trial) {
    int n = std::uniform_int_distribution<int>(4, 7)(rng);
    std::vector<Perm> gens = {testutil::random_perm(rng, n), testutil::random_perm(rng, n)};
    auto elements = testutil::closure(n, gens);
    PermGroup g = PermGroup::from_generators(n, gens);
    BlockList l = testutil::random_blocklist(rng, n);
    bool expect = (l == testutil::brute_min_image(elements, l));
    REQUIRE(is_minimal_in_orbit(n, g, l) == expect);
  }
}

TEST_CASE("simple named cases") {
  REQUIRE(minimal_image(3, make_blocks({{2, 3}})) == make_blocks({{1, 2}}));
  REQUIRE_FALSE(is_minimal_in_orbit(3, cached_symmetric_group(3), make_blocks({{2, 3}})));
  // trivial group: everything is already minimal
  PermGroup triv = PermGroup::trivial(4);
  BlockList l = make_blocks({{3, 4}});
  REQUIRE(minimal_image(4, triv, l) == l);
  REQUIRE(is_minimal_in_orbit(4, triv, l));
}

TEST_CASE("stabilizer orders match brute force on random lists") {
  std::mt19937 rng(4242u);
  for (int n = 4; n <= 7; ++n) {
    auto elements = testutil::all_perms(n);
    for (int trial = 0; trial < 60; ++trial) {
      BlockList l = testutil::random_blocklist(rng, n);
      unsigned long long expect = testutil::brute_stab_order(elements, l);
      PermGroup stab = blocklist_stabilizer(n, l);
      INFO("n=" << n << " input=" << blocklist_to_string(l));
      REQUIRE(stab.order() == expect);
      for (const Perm& g : stab.generators()) REQUIRE(relabel(g, l) == l);
    }
  }
}

TEST_CASE("stabilizer inside a proper ambient subgroup") {
  std::mt19937 rng(888u);
  for (int trial = 0; trial < 100; ++trial) {
    int n = std::uniform_int_distribution<int>(4, 7)(rng);
    std::vector<Perm> gens = {testutil::random_perm(rng, n), testutil::random_perm(rng, n)};
    auto elements = testutil::closure(n, gens);
    PermGroup g = PermGroup::from_generators(n, gens);
    BlockList l = testutil::random_blocklist(rng, n);
    unsigned long long expect = testutil::brute_stab_order(elements, l);
    PermGroup stab = blocklist_stabilizer(n, g, l);
    REQUIRE(stab.order() == expect);
    for (const Perm& s : stab.generators()) {
      REQUIRE(relabel(s, l) == l);
      REQUIRE(g.contains(s));
    }
  }
}

TEST_CASE("stabilizer of the empty list is the ambient group") {
  REQUIRE(blocklist_stabilizer(5, BlockList{}).order() == 120);
  PermGroup cyc = PermGroup::from_generators(5, {Perm::from_cycles(5, {{1, 2, 3, 4, 5}})});
  REQUIRE(blocklist_stabilizer(5, cyc, BlockList{}).order() == 5);
}

TEST_CASE("stabilizer keeps the tail of truncated branches") {
  // A single pair-block on a larger ground set: the stabilizer must include
  // everything that permutes the untouched atoms.
  REQUIRE(blocklist_stabilizer(4, make_blocks({{1, 2}})).order() == 4);
  REQUIRE(blocklist_stabilizer(6, make_blocks({{1, 2}})).order() == 2 * 24);
  // one block of size 5 inside 14 atoms: Sym(5) x Sym(9)
  unsigned long long f5 = 120, f9 = 362880;
  REQUIRE(blocklist_stabilizer(14, make_blocks({{1, 2, 3, 4, 5}})).order() == f5 * f9);
}

TEST_CASE("known automorphism groups") {
  REQUIRE(blocklist_stabilizer(6, testutil::braid_a3().blocks).order() == 24);
  REQUIRE(blocklist_stabilizer(7, testutil::fano().blocks).order() == 168);
  REQUIRE(blocklist_stabilizer(3, testutil::boolean_m3().blocks).order() == 6);
  // near-pencil: Sym(n-1) fixing the apex
  REQUIRE(blocklist_stabilizer(5, testutil::near_pencil(5).blocks).order() == 24);
  REQUIRE(blocklist_stabilizer(8, testutil::near_pencil(8).blocks).order() == 5040);
}

TEST_CASE("canonical forms of famous matroids under relabeling") {
  std::mt19937 rng(606u);
  BlockList braid_canon = minimal_image(6, testutil::braid_a3().blocks);
  for (int trial = 0; trial < 30; ++trial) {
    Perm g = testutil::random_perm(rng, 6);
    REQUIRE(minimal_image(6, relabel(g, testutil::braid_a3().blocks)) == braid_canon);
  }
  BlockList fano_canon = minimal_image(7, testutil::fano().blocks);
  for (int trial = 0; trial < 50; ++trial) {
    Perm g = testutil::random_perm(rng, 7);
    REQUIRE(minimal_image(7, relabel(g, testutil::fano().blocks)) == fano_canon);
  }
}

TEST_CASE("seed automorphisms do not change results") {
  std::mt19937 rng(909u);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 6;
    BlockList l = testutil::random_blocklist(rng, n);
    // harvest genuine automorphisms to use as seeds
    PermGroup stab = blocklist_stabilizer(n, l);
    std::vector<Perm> seeds = stab.generators();
    seeds.push_back(testutil::random_perm(rng, n));  // non-fixing seeds must be ignored
    CanonicalSearch::Options opt;
    opt.seed_automorphisms = &seeds;
    REQUIRE(minimal_image(n, cached_symmetric_group(n), l, opt) == minimal_image(n, l));
    REQUIRE(blocklist_stabilizer(n, cached_symmetric_group(n), l, opt).order() == stab.order());
  }
}

TEST_CASE("colour context sharpens the search without changing the result") {
  // Contract: the ambient group must stabilize the context list. Here the
  // ambient group is the automorphism group of the braid blocks and we ask
  // for the subgroup also fixing one extra pair.
  BlockList context = testutil::braid_a3().blocks;
  PermGroup ambient = blocklist_stabilizer(6, context);
  BlockList extra = make_blocks({{1, 2}});

  unsigned long long expect = 0;
  for (const Perm& g : testutil::all_perms(6))
    if (relabel(g, context) == context && relabel(g, extra) == extra) ++expect;

  CanonicalSearch::Options opt;
  opt.colour_context = &context;
  REQUIRE(blocklist_stabilizer(6, ambient, extra, opt).order() == expect);
  REQUIRE(blocklist_stabilizer(6, ambient, extra).order() == expect);
}
