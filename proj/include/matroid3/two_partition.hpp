#pragma once

#include <bit>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "block_list.hpp"
#include "errors.hpp"

namespace matroid3 {

// A 2-partition of the atom set {1..n}: a list of blocks, each of size 2..n-1,
// such that every unordered pair of atoms lies in exactly one block. These are
// exactly the lattices of flats of simple rank 3 matroids (atoms = points,
// blocks = lines, with 2-point lines stored explicitly). Blocks are kept in
// normal form: grouped by size descending, lexicographic within a size group.
struct TwoPartition {
  int n = 0;
  BlockList blocks;

  bool operator==(const TwoPartition& o) const { return n == o.n && blocks == o.blocks; }
  bool operator!=(const TwoPartition& o) const { return !(*this == o); }

  std::vector<std::vector<int>> blocks_one_based() const {
    std::vector<std::vector<int>> out;
    out.reserve(blocks.size());
    for (Block b : blocks) {
      std::vector<int> atoms = block_atoms(b);
      for (int& a : atoms) ++a;
      out.push_back(std::move(atoms));
    }
    return out;
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "n=" << n << " " << blocklist_to_string(blocks);
    return os.str();
  }
};

// Validating constructor from 0-based bitmask blocks.
inline TwoPartition make_matroid_masks(int n, BlockList blocks) {
  if (n < 3 || n > kMaxDegree) throw std::invalid_argument("atom count must be in 3.." + std::to_string(kMaxDegree));
  normalize_blocks(blocks);
  blocks.erase(std::unique(blocks.begin(), blocks.end()), blocks.end());
  const Block full = (Block{1} << n) - 1;
  for (Block b : blocks) {
    if ((b & ~full) != 0) throw std::out_of_range("block mentions an atom outside 1..n");
    int s = block_size(b);
    if (s < 2 || s >= n)
      fail(errc::improper_block, "block " + block_to_string(b) + " has size " + std::to_string(s));
  }
  std::vector<Block> covered(static_cast<std::size_t>(n), 0);
  for (Block b : blocks) {
    for (int a : block_atoms(b)) {
      Block others = b & ~(Block{1} << a);
      Block clash = covered[static_cast<std::size_t>(a)] & others;
      if (clash != 0) {
        int c = std::countr_zero(clash);
        fail(errc::pair_covered_twice,
             "pair {" + std::to_string(std::min(a, c) + 1) + "," + std::to_string(std::max(a, c) + 1) +
                 "} lies in two blocks");
      }
      covered[static_cast<std::size_t>(a)] |= others;
    }
  }
  for (int a = 0; a < n; ++a) {
    Block want = full & ~(Block{1} << a);
    if (covered[static_cast<std::size_t>(a)] != want) {
      int c = std::countr_zero(want & ~covered[static_cast<std::size_t>(a)]);
      fail(errc::pair_uncovered,
           "pair {" + std::to_string(std::min(a, c) + 1) + "," + std::to_string(std::max(a, c) + 1) +
               "} lies in no block");
    }
  }
  return TwoPartition{n, std::move(blocks)};
}

// Validating constructor from 1-based atom lists.
inline TwoPartition make_matroid(int n, const std::vector<std::vector<int>>& raw_blocks) {
  BlockList blocks;
  blocks.reserve(raw_blocks.size());
  for (const auto& atoms : raw_blocks) {
    Block b = 0;
    for (int a : atoms) {
      if (a < 1 || a > n) throw std::out_of_range("atom " + std::to_string(a) + " outside 1.." + std::to_string(n));
      b |= Block{1} << (a - 1);
    }
    blocks.push_back(b);
  }
  return make_matroid_masks(n, std::move(blocks));
}

// m_k = number of blocks of size k, stored densely (index = block size).
struct MultiplicityVector {
  int n = 0;
  std::vector<int> m;  // m[k] for 0 <= k <= n-1; m[0] = m[1] = 0

  int count(int k) const {
    if (k < 0 || k >= static_cast<int>(m.size())) return 0;
    return m[static_cast<std::size_t>(k)];
  }

  bool operator==(const MultiplicityVector& o) const { return n == o.n && m == o.m; }
  bool operator!=(const MultiplicityVector& o) const { return !(*this == o); }

  std::string to_string() const {
    std::ostringstream os;
    os << "(";
    for (int k = 2; k < n; ++k) {
      if (k > 2) os << ",";
      os << count(k);
    }
    os << ")";
    return os.str();
  }
};

inline MultiplicityVector multiplicity_vector(const TwoPartition& M) {
  MultiplicityVector mv;
  mv.n = M.n;
  mv.m.assign(static_cast<std::size_t>(M.n), 0);
  for (Block b : M.blocks) ++mv.m[static_cast<std::size_t>(block_size(b))];
  return mv;
}

// For a partial block list A on atoms 1..n (blocks pairwise sharing at most
// one atom, not required to cover everything): the number of atoms that e is
// not yet paired with. Zero for every atom of a complete 2-partition.
inline int deficiency(const BlockList& partial, int e_one_based, int n) {
  if (e_one_based < 1 || e_one_based > n) throw std::out_of_range("atom outside 1..n");
  int e = e_one_based - 1;
  Block seen = 0;
  for (Block b : partial)
    if ((b >> e) & 1u) seen |= b;
  seen &= ~(Block{1} << e);
  return (n - 1) - std::popcount(seen);
}

}  // namespace matroid3
