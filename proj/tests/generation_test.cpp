#include <catch2/catch_amalgamated.hpp>

#include <matroid3/generation.hpp>

#include <map>
#include <set>

#include "oracles.hpp"

using namespace matroid3;

namespace {

std::vector<int> mv_tuple(const MultiplicityVector& mv) {
  std::vector<int> t;
  for (int k = 2; k < mv.n; ++k) t.push_back(mv.count(k));
  return t;
}

MultiplicityVector mv_of(int n, const std::vector<int>& m2_up) {
  MultiplicityVector mv;
  mv.n = n;
  mv.m.assign(static_cast<std::size_t>(n), 0);
  for (std::size_t i = 0; i < m2_up.size(); ++i) mv.m[i + 2] = m2_up[i];
  return mv;
}

std::set<BlockList> canonical_set(const std::vector<TwoPartition>& v) {
  std::set<BlockList> out;
  for (const auto& M : v) out.insert(M.blocks);
  return out;
}

// Labeled 2-partition counts per multiplicity vector, straight from the
// exact-cover oracle.
std::map<std::vector<int>, long long> labeled_counts(int n) {
  std::map<std::vector<int>, long long> counts;
  testutil::all_two_partitions(n, [&](const BlockList& blocks) {
    std::vector<int> key(static_cast<std::size_t>(n), 0);
    for (Block b : blocks) ++key[static_cast<std::size_t>(block_size(b))];
    ++counts[key];
  });
  return counts;
}

long long factorial(int n) {
  long long f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

TEST_CASE("multiplicity vector enumeration at n=6 with the splitting filter") {
  auto vecs = enumerate_multiplicity_vectors(6, true);
  REQUIRE(vecs.size() == 3);
  CHECK(mv_tuple(vecs[0]) == std::vector<int>{5, 0, 0, 1});
  CHECK(mv_tuple(vecs[1]) == std::vector<int>{6, 1, 1, 0});
  CHECK(mv_tuple(vecs[2]) == std::vector<int>{3, 4, 0, 0});
}

TEST_CASE("multiplicity vector enumeration basics") {
  auto v3 = enumerate_multiplicity_vectors(3, false);
  REQUIRE(v3.size() == 1);
  CHECK(mv_tuple(v3[0]) == std::vector<int>{3});

  for (int n = 4; n <= 9; ++n) {
    auto all = enumerate_multiplicity_vectors(n, false);
    auto split = enumerate_multiplicity_vectors(n, true);
    CHECK(split.size() <= all.size());
    std::set<std::vector<int>> all_set;
    long long total = static_cast<long long>(n) * (n - 1) / 2;
    for (const auto& mv : all) {
      long long pairs = 0, cnt = 0;
      for (int k = 2; k < n; ++k) {
        pairs += static_cast<long long>(mv.count(k)) * k * (k - 1) / 2;
        cnt += mv.count(k);
      }
      CHECK(pairs == total);
      CHECK(cnt >= n);
      all_set.insert(mv_tuple(mv));
    }
    CHECK(all_set.size() == all.size());
    for (const auto& mv : split) {
      CHECK(all_set.count(mv_tuple(mv)) == 1);
      CHECK(characteristic_data(mv).splits);
    }
  }
}

TEST_CASE("multiplicity vector counts for the large degrees") {
  CHECK(enumerate_multiplicity_vectors(13, true).size() == 404);
  CHECK(enumerate_multiplicity_vectors(14, true).size() == 695);
}

TEST_CASE("generation matches the exact-cover oracle up to degree 6") {
  for (int n = 3; n <= 6; ++n) {
    std::map<std::vector<int>, std::set<BlockList>> oracle;
    testutil::all_two_partitions(n, [&](const BlockList& blocks) {
      std::vector<int> key(static_cast<std::size_t>(n), 0);
      for (Block b : blocks) ++key[static_cast<std::size_t>(block_size(b))];
      oracle[key].insert(minimal_image(n, blocks));
    });
    std::size_t classes = 0;
    for (const auto& mv : enumerate_multiplicity_vectors(n, false)) {
      auto got = generate_all_sequential(n, mv);
      for (const auto& M : got) REQUIRE(multiplicity_vector(M) == mv);
      auto it = oracle.find(mv.m);
      std::set<BlockList> expect = (it == oracle.end()) ? std::set<BlockList>{} : it->second;
      REQUIRE(canonical_set(got) == expect);
      REQUIRE(got.size() == expect.size());
      classes += got.size();
    }
    int totals[] = {0, 0, 0, 1, 2, 4, 9};
    REQUIRE(classes == static_cast<std::size_t>(totals[n]));
  }
}

TEST_CASE("generation matches labeled mass at degrees 7 and 8") {
  // Orbit-stabilizer: a class with automorphism group of order a accounts for
  // n!/a labeled copies; per-vector sums must match the raw oracle exactly.
  for (int n = 7; n <= 8; ++n) {
    auto oracle = labeled_counts(n);
    long long fact = factorial(n);
    std::size_t classes = 0;
    long long oracle_total = 0;
    for (const auto& [key, cnt] : oracle) oracle_total += cnt;
    long long engine_total = 0;
    for (const auto& mv : enumerate_multiplicity_vectors(n, false)) {
      auto got = generate_all_sequential(n, mv);
      classes += got.size();
      std::set<BlockList> seen;
      long long mass = 0;
      for (const auto& M : got) {
        REQUIRE(seen.insert(M.blocks).second);
        REQUIRE(multiplicity_vector(M) == mv);
        mass += fact / blocklist_stabilizer(n, M.blocks).order();
      }
      auto it = oracle.find(mv.m);
      long long expect = (it == oracle.end()) ? 0 : it->second;
      REQUIRE(mass == expect);
      engine_total += mass;
    }
    REQUIRE(engine_total == oracle_total);
    REQUIRE(classes == static_cast<std::size_t>(n == 7 ? 23 : 68));
  }
}

TEST_CASE("single-class vectors produce the expected matroid") {
  auto braid = generate_all_sequential(6, mv_of(6, {3, 4, 0, 0}));
  REQUIRE(braid.size() == 1);
  CHECK(braid[0].blocks == minimal_image(6, testutil::braid_a3().blocks));

  auto fano = generate_all_sequential(7, mv_of(7, {0, 7, 0, 0, 0}));
  REQUIRE(fano.size() == 1);
  CHECK(fano[0].blocks == minimal_image(7, testutil::fano().blocks));

  auto np = generate_all_sequential(6, mv_of(6, {5, 0, 0, 1}));
  REQUIRE(np.size() == 1);
  CHECK(np[0].blocks == minimal_image(6, testutil::near_pencil(6).blocks));
}

TEST_CASE("pruning and merging do not change the generated sets") {
  GenerateOptions bare;
  bare.prune_parity = false;
  bare.prune_degree_cap = false;
  bare.merge_transpositions = false;
  for (int n = 5; n <= 7; ++n) {
    for (const auto& mv : enumerate_multiplicity_vectors(n, false)) {
      auto fast = generate_all_sequential(n, mv);
      auto slow = generate_all_sequential(n, mv, bare);
      REQUIRE(canonical_set(fast) == canonical_set(slow));
    }
  }
}

TEST_CASE("deficiency parity prune on the hard degree-14 states") {
  auto mv = mv_of(14, {1, 23, 1, 0, 1});
  auto a1 = state_from_blocks(
      14, mv, {block_from_atoms({0, 1, 2, 3, 4, 5}), block_from_atoms({0, 6, 7, 8})});
  CHECK(a1.k0 == 3);
  CHECK(deficiency_parity_prune(a1));
  auto a2 = state_from_blocks(
      14, mv, {block_from_atoms({0, 1, 2, 3, 4, 5}), block_from_atoms({6, 7, 8, 9})});
  CHECK(deficiency_parity_prune(a2));

  // All size-3 remaining and an atom of odd deficiency.
  auto mv2 = mv_of(14, {0, 21, 3, 1});
  auto s = state_from_blocks(14, mv2,
                             {block_from_atoms({0, 1, 2, 3, 4}), block_from_atoms({0, 5, 6, 7}),
                              block_from_atoms({1, 5, 8, 9}), block_from_atoms({2, 5, 10, 11})});
  CHECK(s.k0 == 3);
  CHECK(deficiency_parity_prune(s));

  // A completable state is not pruned: the braid with its pairs still open.
  auto braid_partial = state_from_blocks(
      6, mv_of(6, {3, 4, 0, 0}),
      {block_from_atoms({0, 1, 3}), block_from_atoms({0, 2, 4}), block_from_atoms({1, 2, 5}),
       block_from_atoms({3, 4, 5})});
  CHECK(braid_partial.k0 == 2);
  CHECK_FALSE(deficiency_parity_prune(braid_partial));
}

TEST_CASE("the two runaway degree-14 vectors die instantly") {
  CHECK(generate_all_sequential(14, mv_of(14, {0, 21, 3, 1})).empty());
  CHECK(generate_all_sequential(14, mv_of(14, {1, 23, 1, 0, 1})).empty());
}

TEST_CASE("iterator exhaustion is sticky") {
  auto root = iterator_from_state(initial_state(4, mv_of(4, {3, 1})));
  std::vector<std::unique_ptr<RecursiveIterator>> spent;
  std::vector<RecursiveIterator*> stack{root.get()};
  int leaves = 0;
  while (!stack.empty()) {
    auto r = stack.back()->next();
    if (std::holds_alternative<RecursiveIterator::Exhausted>(r)) {
      stack.pop_back();
    } else if (auto* child = std::get_if<std::unique_ptr<RecursiveIterator>>(&r)) {
      stack.push_back(child->get());
      spent.push_back(std::move(*child));
    } else {
      ++leaves;
    }
  }
  REQUIRE(leaves == 1);
  spent.push_back(std::move(root));
  for (const auto& it : spent)
    for (int i = 0; i < 5; ++i)
      CHECK(std::holds_alternative<RecursiveIterator::Exhausted>(it->next()));
}

TEST_CASE("children sit one level deeper than their parents") {
  auto root = iterator_from_state(initial_state(6, mv_of(6, {3, 4, 0, 0})));
  CHECK(root->depth() == 0);
  CHECK(root->state().k0 == 3);
  auto r = root->next();
  auto* child = std::get_if<std::unique_ptr<RecursiveIterator>>(&r);
  REQUIRE(child != nullptr);
  CHECK((*child)->depth() == 1);
  CHECK((*child)->state().k0 == 2);
  CHECK((*child)->state().placed.size() == 4);
}

TEST_CASE("sequential generation is deterministic") {
  auto mv = mv_of(7, {3, 6, 0, 0, 0});
  auto a = generate_all_sequential(7, mv);
  auto b = generate_all_sequential(7, mv);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) REQUIRE(a[i].blocks == b[i].blocks);
}

TEST_CASE("degree 9 full generation hits the reference total") {
  std::size_t classes = 0;
  for (const auto& mv : enumerate_multiplicity_vectors(9, false))
    classes += generate_all_sequential(9, mv).size();
  REQUIRE(classes == 383);
}
