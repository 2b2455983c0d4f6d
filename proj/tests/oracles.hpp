#pragma once

// Brute-force oracles and reference objects shared by the test suite. These
// are deliberately independent of the library's search code: orbits are
// enumerated element by element and compared exhaustively.

#include <algorithm>
#include <array>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include <matroid3/block_list.hpp>
#include <matroid3/perm.hpp>
#include <matroid3/perm_group.hpp>
#include <matroid3/two_partition.hpp>

namespace testutil {

using namespace matroid3;

inline std::vector<Perm> all_perms(int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 1);
  std::vector<Perm> out;
  do {
    out.push_back(Perm::from_one_based_images(img));
  } while (std::next_permutation(img.begin(), img.end()));
  return out;
}

// Closure of a generating set under composition, by plain breadth-first
// multiplication. Independent of the stabilizer-chain machinery.
inline std::vector<Perm> closure(int n, const std::vector<Perm>& gens) {
  std::set<Perm> seen;
  std::vector<Perm> frontier{Perm::identity(n)};
  seen.insert(frontier.front());
  while (!frontier.empty()) {
    std::vector<Perm> next;
    for (const Perm& p : frontier)
      for (const Perm& g : gens) {
        Perm q = g.compose(p);
        if (seen.insert(q).second) next.push_back(q);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

inline BlockList brute_min_image(const std::vector<Perm>& elements, const BlockList& blocks) {
  BlockList best = normalized_blocks(blocks);
  for (const Perm& g : elements) {
    BlockList img = relabel(g, blocks);
    if (blocklist_less(img, best)) best = img;
  }
  return best;
}

inline unsigned long long brute_stab_order(const std::vector<Perm>& elements, const BlockList& blocks) {
  BlockList norm = normalized_blocks(blocks);
  unsigned long long count = 0;
  for (const Perm& g : elements)
    if (relabel(g, norm) == norm) ++count;
  return count;
}

inline BlockList make_blocks(std::initializer_list<std::initializer_list<int>> one_based) {
  BlockList out;
  for (const auto& atoms : one_based) {
    Block b = 0;
    for (int a : atoms) b |= Block{1} << (a - 1);
    out.push_back(b);
  }
  normalize_blocks(out);
  return out;
}

// Random list of distinct blocks; not necessarily a 2-partition (the
// canonical-form machinery must work on any block list).
inline BlockList random_blocklist(std::mt19937& rng, int n) {
  std::uniform_int_distribution<int> nblocks(1, 4);
  std::uniform_int_distribution<int> size_dist(2, std::min(n - 1, 5));
  std::set<Block> out;
  int want = nblocks(rng);
  for (int attempts = 0; static_cast<int>(out.size()) < want && attempts < 50; ++attempts) {
    int s = size_dist(rng);
    Block b = 0;
    while (block_size(b) < s) b |= Block{1} << std::uniform_int_distribution<int>(0, n - 1)(rng);
    out.insert(b);
  }
  BlockList lst(out.begin(), out.end());
  normalize_blocks(lst);
  return lst;
}

inline Perm random_perm(std::mt19937& rng, int n) {
  std::vector<int> img(static_cast<std::size_t>(n));
  std::iota(img.begin(), img.end(), 1);
  std::shuffle(img.begin(), img.end(), rng);
  return Perm::from_one_based_images(img);
}

// Random admissible partial block list: blocks pairwise sharing at most one
// atom (grown greedily, so pair coverage never doubles).
inline BlockList random_partial_partition(std::mt19937& rng, int n) {
  std::vector<Block> covered(static_cast<std::size_t>(n), 0);
  BlockList out;
  int want = std::uniform_int_distribution<int>(0, 5)(rng);
  for (int attempts = 0; static_cast<int>(out.size()) < want && attempts < 80; ++attempts) {
    int s = std::uniform_int_distribution<int>(2, std::min(n - 1, 5))(rng);
    Block b = 0;
    while (block_size(b) < s) b |= Block{1} << std::uniform_int_distribution<int>(0, n - 1)(rng);
    bool ok = true;
    for (int a : block_atoms(b))
      if ((covered[static_cast<std::size_t>(a)] & (b & ~(Block{1} << a))) != 0) ok = false;
    if (!ok) continue;
    for (int a : block_atoms(b)) covered[static_cast<std::size_t>(a)] |= b & ~(Block{1} << a);
    out.push_back(b);
  }
  normalize_blocks(out);
  return out;
}

// The rank 3 braid matroid on 6 atoms (the triangle graph's lines).
inline TwoPartition braid_a3() {
  return make_matroid(6, {{1, 2, 4}, {1, 3, 5}, {2, 3, 6}, {4, 5, 6}, {3, 4}, {2, 5}, {1, 6}});
}

inline TwoPartition boolean_m3() { return make_matroid(3, {{1, 2}, {1, 3}, {2, 3}}); }

inline TwoPartition fano() {
  return make_matroid(7, {{1, 2, 4}, {2, 3, 5}, {3, 4, 6}, {4, 5, 7}, {1, 5, 6}, {2, 6, 7}, {1, 3, 7}});
}

// One block of size n-1 plus the pairs through the remaining atom.
inline TwoPartition near_pencil(int n) {
  std::vector<std::vector<int>> blocks;
  std::vector<int> big;
  for (int a = 1; a < n; ++a) big.push_back(a);
  blocks.push_back(big);
  for (int a = 1; a < n; ++a) blocks.push_back({a, n});
  return make_matroid(n, blocks);
}

// The 11-atom pair with equal Tutte polynomials but different freeness
// behaviour; first is inductively free, second not even divisionally free.
inline TwoPartition example_m1() {
  return make_matroid(11, {{1, 2, 3, 4},
                           {1, 5, 6, 7},
                           {1, 8, 9, 10},
                           {2, 5, 8, 11},
                           {3, 6, 9, 11},
                           {2, 6, 10},
                           {2, 7, 9},
                           {3, 5, 10},
                           {4, 5, 9},
                           {4, 7, 11},
                           {1, 11},
                           {3, 7},
                           {3, 8},
                           {4, 6},
                           {4, 8},
                           {4, 10},
                           {6, 8},
                           {7, 8},
                           {7, 10},
                           {10, 11}});
}

inline TwoPartition example_m2() {
  return make_matroid(11, {{1, 2, 3, 4},
                           {1, 5, 6, 7},
                           {2, 5, 8, 9},
                           {3, 6, 8, 10},
                           {4, 7, 9, 10},
                           {1, 8, 11},
                           {2, 7, 11},
                           {3, 9, 11},
                           {4, 6, 11},
                           {5, 10, 11},
                           {1, 9},
                           {1, 10},
                           {2, 6},
                           {2, 10},
                           {3, 5},
                           {3, 7},
                           {4, 5},
                           {4, 8},
                           {6, 9},
                           {7, 8}});
}

// The unique 14-atom representable matroid that is divisionally free but not
// inductively free. Its lines are the rank 2 column sets of the matrix in
// example_n14_matrix with parameter a = 3 over GF(13).
inline TwoPartition example_n14() {
  return make_matroid(14, {{1, 2, 3, 4, 5},  {1, 6, 7, 8, 9}, {1, 10, 11, 12}, {2, 6, 10, 13},
                           {2, 7, 11, 14},   {3, 6, 12, 14},  {3, 8, 11, 13},  {4, 9, 10, 14},
                           {4, 7, 13},       {5, 7, 12},      {5, 8, 10},      {5, 9, 11},
                           {5, 13, 14},      {9, 12, 13},     {1, 13},         {1, 14},
                           {2, 8},           {2, 9},          {2, 12},         {3, 7},
                           {3, 9},           {3, 10},         {4, 6},          {4, 8},
                           {4, 11},          {4, 12},         {5, 6},          {6, 11},
                           {7, 10},          {8, 12},         {8, 14}});
}

// Every 2-partition of {0..n-1}, by raw exact cover: the block covering the
// smallest uncovered pair is unique within any completion, so branching on
// that block visits each 2-partition exactly once.
template <class Fn>
inline void all_two_partitions(int n, Fn&& fn) {
  std::array<Block, 32> cov{};
  BlockList cur;
  auto rec = [&](auto&& self) -> void {
    int a = -1, b = -1;
    for (int x = 0; x < n && a < 0; ++x)
      for (int y = x + 1; y < n; ++y)
        if ((cov[static_cast<std::size_t>(x)] >> y & 1u) == 0) {
          a = x;
          b = y;
          break;
        }
    if (a < 0) {
      fn(cur);
      return;
    }
    // Any other atom of the covering block must exceed b: an atom below b
    // would pair with a or b in a lex-smaller pair, already covered.
    auto grow = [&](auto&& gself, Block blk, int from) -> void {
      if (block_size(blk) <= n - 1) {
        for (int x : block_atoms(blk)) cov[static_cast<std::size_t>(x)] |= blk & ~(Block{1} << x);
        cur.push_back(blk);
        self(self);
        cur.pop_back();
        for (int x : block_atoms(blk)) cov[static_cast<std::size_t>(x)] &= ~(blk & ~(Block{1} << x));
      }
      for (int c = from; c < n; ++c) {
        bool ok = true;
        for (int x : block_atoms(blk))
          if ((cov[static_cast<std::size_t>(x)] >> c & 1u) != 0) {
            ok = false;
            break;
          }
        if (ok) gself(gself, blk | (Block{1} << c), c + 1);
      }
    };
    grow(grow, (Block{1} << a) | (Block{1} << b), b + 1);
  };
  rec(rec);
}

}  // namespace testutil
