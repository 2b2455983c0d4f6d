#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "perm.hpp"

namespace matroid3 {

// A block is a set of at least two atoms stored as a bitmask over atoms
// {0, ..., n-1}. A block list is kept in normal form: blocks grouped by size
// descending, and within one size group sorted lexicographically when read as
// increasing atom sequences.
using Block = std::uint32_t;
using BlockList = std::vector<Block>;

inline int block_size(Block b) { return std::popcount(b); }

// Lexicographic order on blocks viewed as increasing atom sequences. The
// sequences agree below the smallest atom of the symmetric difference; the
// block containing that atom is smaller unless the other has already run out
// of atoms there, in which case the shorter sequence is the prefix and wins.
inline bool block_lex_less(Block a, Block b) {
  if (a == b) return false;
  Block d = a ^ b;
  Block low = d & (~d + 1);
  Block above = ~((low << 1) - 1);
  if ((a & low) != 0) return (b & above) != 0;
  return (a & above) == 0;
}

inline bool block_normal_order(Block a, Block b) {
  int sa = block_size(a), sb = block_size(b);
  if (sa != sb) return sa > sb;
  return block_lex_less(a, b);
}

inline void normalize_blocks(BlockList& blocks) {
  std::sort(blocks.begin(), blocks.end(), block_normal_order);
}

inline BlockList normalized_blocks(BlockList blocks) {
  normalize_blocks(blocks);
  return blocks;
}

// Total order on normalized block lists: element-wise by the normal-form
// block order, shorter list first on a common prefix.
inline bool blocklist_less(const BlockList& a, const BlockList& b) {
  std::size_t m = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < m; ++i) {
    if (a[i] != b[i]) return block_normal_order(a[i], b[i]);
  }
  return a.size() < b.size();
}

inline BlockList relabel(const Perm& g, const BlockList& blocks) {
  BlockList out;
  out.reserve(blocks.size());
  for (Block b : blocks) out.push_back(g.apply_mask(b));
  normalize_blocks(out);
  return out;
}

inline std::vector<int> block_atoms(Block b) {  // 0-based, ascending
  std::vector<int> atoms;
  while (b != 0) {
    atoms.push_back(std::countr_zero(b));
    b &= b - 1;
  }
  return atoms;
}

inline Block block_from_atoms(const std::vector<int>& atoms) {  // 0-based
  Block b = 0;
  for (int a : atoms) b |= Block{1} << a;
  return b;
}

// Flattened key of a normalized list: the concatenation of each block's
// increasing atom sequence. Used by the canonical-form search; callers only
// ever compare keys of lists with the same size profile.
inline std::vector<std::uint8_t> flatten_key(const BlockList& blocks) {
  std::vector<std::uint8_t> key;
  for (Block b : blocks) {
    Block m = b;
    while (m != 0) {
      key.push_back(static_cast<std::uint8_t>(std::countr_zero(m)));
      m &= m - 1;
    }
  }
  return key;
}

inline std::string block_to_string(Block b) {  // 1-based, for diagnostics
  std::string s = "[";
  auto atoms = block_atoms(b);
  for (std::size_t j = 0; j < atoms.size(); ++j) {
    if (j) s += ",";
    s += std::to_string(atoms[j] + 1);
  }
  s += "]";
  return s;
}

inline std::string blocklist_to_string(const BlockList& blocks) {  // 1-based, for diagnostics
  std::string s = "[";
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    if (i) s += ",";
    s += block_to_string(blocks[i]);
  }
  s += "]";
  return s;
}

}  // namespace matroid3
