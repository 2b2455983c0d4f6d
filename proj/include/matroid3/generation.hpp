#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "canonical.hpp"
#include "invariants.hpp"
#include "two_partition.hpp"

#ifdef MATROID3_GEN_COUNTERS
#include <chrono>
#endif

namespace matroid3 {

#ifdef MATROID3_GEN_COUNTERS
namespace gen_counters {
inline long boundaries = 0, sniff_hits = 0, full_tests = 0, full_rejects = 0, children = 0;
inline double sniff_ms = 0, full_ms = 0, stab_ms = 0;
inline long elem_seeded = 0, gens_fallback = 0, seeds_pushed = 0, materializations = 0;
inline long tests_by_b[32] = {}, rejects_by_b[32] = {};
inline double ms_by_b[32] = {};
}
#endif

struct GenerateOptions {
  int workers = 1;
  std::size_t fifo_capacity = 4096;
  bool prune_parity = true;
  bool prune_degree_cap = true;
  bool merge_transpositions = true;
  bool drain_leaves = false;
};

// All multiplicity vectors (m_2, ..., m_{n-1}) with
//   sum m_k * C(k,2) = C(n,2)   (pair counting)
//   sum m_k >= n                (at least as many blocks as atoms)
// and, when require_int_split is set, an integrally splitting characteristic
// polynomial. Order: lexicographic on (m_{n-1}, ..., m_2), descending.
inline std::vector<MultiplicityVector> enumerate_multiplicity_vectors(int n, bool require_int_split) {
  if (n < 3 || n > kMaxDegree) throw std::invalid_argument("enumerate_multiplicity_vectors: bad n");
  std::vector<MultiplicityVector> out;
  MultiplicityVector mv;
  mv.n = n;
  mv.m.assign(static_cast<std::size_t>(n), 0);
  long long total = static_cast<long long>(n) * (n - 1) / 2;
  auto rec = [&](auto&& self, int k, long long left, long long count) -> void {
    if (k == 2) {
      mv.m[2] = static_cast<int>(left);
      if (count + left >= n && (!require_int_split || characteristic_data(mv).splits))
        out.push_back(mv);
      mv.m[2] = 0;
      return;
    }
    long long pairs = static_cast<long long>(k) * (k - 1) / 2;
    for (long long mk = left / pairs; mk >= 0; --mk) {
      mv.m[static_cast<std::size_t>(k)] = static_cast<int>(mk);
      self(self, k - 1, left - mk * pairs, count + mk);
    }
    mv.m[static_cast<std::size_t>(k)] = 0;
  };
  rec(rec, n - 1, total, 0);
  return out;
}

// The level below k0 that still has blocks to place: max({1} U {k < k0 : m_k > 0}).
inline int next_level(const MultiplicityVector& mv, int k0) {
  for (int k = k0 - 1; k >= 2; --k)
    if (mv.count(k) > 0) return k;
  return 1;
}

// A node of the generation tree: the blocks of every size above k0 have been
// placed and form an admissible partial 2-partition (pairwise intersections
// of at most one atom); sizes k0 and below are still open.
struct GenerationState {
  int n = 0;
  MultiplicityVector mv;
  int k0 = 0;
  BlockList placed;                              // normalized
  std::array<Block, kMaxDegree> cov{};           // cov[a]: atoms already paired with a
  std::array<std::uint8_t, kMaxDegree> dep{};    // blocks of size >= 3 through a
  PermGroup stab;                                // Stab_{Sym(n)}(placed)
};

inline GenerationState state_from_blocks(int n, const MultiplicityVector& mv, BlockList blocks) {
  if (n < 3 || n > kMaxDegree) throw std::invalid_argument("state_from_blocks: bad n");
  if (mv.n != n) throw std::invalid_argument("state_from_blocks: multiplicity vector degree mismatch");
  GenerationState s;
  s.n = n;
  s.mv = mv;
  normalize_blocks(blocks);
  s.placed = std::move(blocks);

  std::vector<int> have(static_cast<std::size_t>(n), 0);
  Block all = (n == 32 ? ~Block{0} : (Block{1} << n) - 1);
  for (Block b : s.placed) {
    if ((b & ~all) != 0 || block_size(b) < 2 || block_size(b) >= n)
      fail(errc::improper_block, "state_from_blocks: block out of range");
    ++have[static_cast<std::size_t>(block_size(b))];
    int sz = block_size(b);
    for (int a : block_atoms(b)) {
      Block rest = b & ~(Block{1} << a);
      if ((s.cov[static_cast<std::size_t>(a)] & rest) != 0)
        fail(errc::pair_covered_twice, "state_from_blocks: pair covered twice");
      s.cov[static_cast<std::size_t>(a)] |= rest;
      if (sz >= 3) ++s.dep[static_cast<std::size_t>(a)];
    }
  }
  int k0 = 0;
  for (int k = n - 1; k >= 2; --k) {
    if (have[static_cast<std::size_t>(k)] == 0 && mv.count(k) > 0) {
      k0 = k;
      break;
    }
    if (have[static_cast<std::size_t>(k)] != mv.count(k))
      throw std::invalid_argument("state_from_blocks: placed blocks do not match the multiplicity vector");
  }
  for (int k = 2; k < k0; ++k)
    if (have[static_cast<std::size_t>(k)] != 0)
      throw std::invalid_argument("state_from_blocks: blocks placed below the current level");
  if (k0 == 0) throw std::invalid_argument("state_from_blocks: nothing left to place");
  s.k0 = k0;
#ifdef MATROID3_GEN_COUNTERS
  ++gen_counters::children;
  auto c0 = std::chrono::steady_clock::now();
  s.stab = blocklist_stabilizer(n, s.placed);
  auto c1 = std::chrono::steady_clock::now();
  gen_counters::stab_ms += std::chrono::duration<double, std::milli>(c1 - c0).count();
#else
  s.stab = blocklist_stabilizer(n, s.placed);
#endif
  return s;
}

inline GenerationState initial_state(int n, const MultiplicityVector& mv) {
  return state_from_blocks(n, mv, {});
}

namespace detail {

// Parity obstruction. The deficiency of an atom (partners still uncovered)
// must reach zero; a placed block of even size k flips the parities of
// exactly its k atoms, odd sizes flip none. With D atoms of odd deficiency:
//  - D above the total flip capacity of the remaining even blocks is dead,
//  - exactly one even block of size k remaining forces D == k,
//  - no even blocks remaining forces D == 0.
inline bool parity_dead(int n, const std::array<Block, kMaxDegree>& cov, long even_capacity,
                        int even_blocks, int lone_even_size) {
  int odd = 0;
  for (int a = 0; a < n; ++a)
    if (((n - 1 - std::popcount(cov[static_cast<std::size_t>(a)])) & 1) != 0) ++odd;
  if (odd > even_capacity) return true;
  if (even_blocks == 0) return odd != 0;
  if (even_blocks == 1) return odd != lone_even_size;
  return false;
}

}  // namespace detail

// State-level form: the remaining blocks are the full m_k for k <= k0.
inline bool deficiency_parity_prune(const GenerationState& s) {
  long cap = 0;
  int cnt = 0, lone = 0;
  for (int k = 2; k <= s.k0; k += 2) {
    int m = s.mv.count(k);
    if (m > 0) {
      cap += static_cast<long>(k) * m;
      cnt += m;
      lone = k;
    }
  }
  return detail::parity_dead(s.n, s.cov, cap, cnt, lone);
}

// One node of Algorithm 1's tree. next() yields, one at a time, the child
// states (or complete block lists when no level remains below) obtained by
// placing all m_{k0} blocks of size k0 in every admissible way, up to the
// stabilizer of the already-placed blocks. Exhaustion is sticky.
class RecursiveIterator {
 public:
  struct Exhausted {};
  using NextResult = std::variant<std::unique_ptr<RecursiveIterator>, BlockList, Exhausted>;

  RecursiveIterator(GenerationState state, GenerateOptions options)
      : s_(std::move(state)), opt_(options) {
    n_ = s_.n;
    k_ = s_.k0;
    m_ = s_.mv.count(k_);
    k1_ = next_level(s_.mv, k_);
    cap_ = (n_ - 1) / 2;
    stab_trivial_ = s_.stab.is_trivial();
    cov_ = s_.cov;
    dep_ = s_.dep;
    if (k_ >= 3) {
      total_ = m_ * k_;
      atom_.assign(static_cast<std::size_t>(total_), -1);
      floorv_.assign(static_cast<std::size_t>(total_), 0);
      tightv_.assign(static_cast<std::size_t>(total_), 0);
      placedv_.assign(static_cast<std::size_t>(total_), 0);
      bmask_.assign(static_cast<std::size_t>(m_), 0);
      use_cnt_.assign(static_cast<std::size_t>(n_), 0);
      if (!stab_trivial_) {
        smask_.assign(static_cast<std::size_t>(n_), 0);
        for (int b = 1; b < n_; ++b)
          for (int a = 0; a < b; ++a)
            if (s_.stab.contains(Perm::transposition(n_, a, b)))
              smask_[static_cast<std::size_t>(b)] |= Block{1} << a;
        sstack_.resize(static_cast<std::size_t>(m_) + 1);
        sstack_[0] = s_.stab;
        estack_.resize(static_cast<std::size_t>(m_) + 1);
        evalid_.assign(static_cast<std::size_t>(m_) + 1, 0);
        if (opt_.merge_transpositions) {
          tstack_.assign(static_cast<std::size_t>(m_) + 1, {});
          tstack_[0] = smask_;
        }
      }
      enter_slot(0);
    }
  }

  const GenerationState& state() const { return s_; }

  // Number of levels already placed.
  int depth() const {
    int d = 0;
    for (int k = k_ + 1; k < n_; ++k)
      if (s_.mv.count(k) > 0) ++d;
    return d;
  }

  NextResult next() {
    if (done_) return Exhausted{};
    if (!started_) {
      started_ = true;
      if (opt_.prune_parity && deficiency_parity_prune(s_)) {
        finish();
        return Exhausted{};
      }
    }
    while (auto group = next_block_group()) {
      BlockList blocks = s_.placed;
      blocks.insert(blocks.end(), group->begin(), group->end());
      normalize_blocks(blocks);
      if (k1_ == 1) return blocks;
      auto child = std::make_unique<RecursiveIterator>(state_from_blocks(n_, s_.mv, std::move(blocks)), opt_);
      return child;
    }
    finish();
    return Exhausted{};
  }

  // Inner stream: the next group of m_{k0} new size-k0 blocks, lexicographically
  // minimal in its Stab(placed)-orbit and not delivered before.
  std::optional<BlockList> next_block_group() {
    if (inner_done_) return std::nullopt;
    if (k_ == 2) {
      inner_done_ = true;
      BlockList pairs;
      for (int a = 0; a < n_; ++a)
        for (int b = a + 1; b < n_; ++b)
          if ((cov_[static_cast<std::size_t>(a)] >> b & 1u) == 0)
            pairs.push_back((Block{1} << a) | (Block{1} << b));
      // The completion is forced, hence already minimal in its orbit.
      if (static_cast<int>(pairs.size()) == m_) return pairs;
      return std::nullopt;
    }
    while (pos_ >= 0) {
      if (placedv_[static_cast<std::size_t>(pos_)]) unplace_slot(pos_);
      int a = atom_[static_cast<std::size_t>(pos_)] + 1;
      int j = pos_ % k_;
      int hi = n_ - (k_ - 1 - j);  // leave room for the rest of the block
      bool found = false;
      for (; a < hi; ++a) {
        if (candidate_ok(pos_, a)) {
          found = true;
          break;
        }
      }
      if (!found) {
        --pos_;
        continue;
      }
      place_slot(pos_, a);
      if (j == k_ - 1) {
        int b = pos_ / k_ + 1;  // blocks completed
        if (opt_.prune_parity && group_parity_dead(b)) continue;
        // Orderly cut: the completed blocks are a normal-form prefix of any
        // completion, and a Stab(placed)-image of a prefix stays a prefix, so
        // only minimal prefixes can grow into minimal groups. A sweep of the
        // stabilizer's transpositions rejects most non-minimal prefixes before
        // the full orbit search runs.
        if (!stab_trivial_) {
          BlockList prefix(bmask_.begin(), bmask_.begin() + b);
#ifdef MATROID3_GEN_COUNTERS
          ++gen_counters::boundaries;
          auto c0 = std::chrono::steady_clock::now();
          bool sniffed = transposition_lowers(prefix);
          auto c1 = std::chrono::steady_clock::now();
          gen_counters::sniff_ms += std::chrono::duration<double, std::milli>(c1 - c0).count();
          if (sniffed) {
            ++gen_counters::sniff_hits;
            continue;
          }
          collect_seeds(b);
          SearchOptions probe;
          probe.seed_automorphisms = &seeds_;
          ++gen_counters::full_tests;
          ++gen_counters::tests_by_b[b];
          c0 = std::chrono::steady_clock::now();
          bool ok = is_minimal_in_orbit(n_, s_.stab, prefix, probe);
          c1 = std::chrono::steady_clock::now();
          double dms = std::chrono::duration<double, std::milli>(c1 - c0).count();
          gen_counters::full_ms += dms;
          gen_counters::ms_by_b[b] += dms;
          if (!ok) {
            ++gen_counters::full_rejects;
            ++gen_counters::rejects_by_b[b];
            continue;
          }
#else
          if (transposition_lowers(prefix)) continue;
          collect_seeds(b);
          SearchOptions probe;
          probe.seed_automorphisms = &seeds_;
          if (!is_minimal_in_orbit(n_, s_.stab, prefix, probe)) continue;
#endif
          if (b < m_) prepare_level(b, prefix);
        }
        if (b == m_) return BlockList(bmask_.begin(), bmask_.end());
      }
      ++pos_;
      enter_slot(pos_);
    }
    inner_done_ = true;
    return std::nullopt;
  }

 private:
  // Stabilizers up to this order are expanded into explicit element lists for
  // seeding; larger ones fall back to their generators.
  static constexpr unsigned long long kSeedOrderCap = 60000;

  void finish() {
    done_ = true;
    inner_done_ = true;
  }

  void enter_slot(int pos) {
    int j = pos % k_;
    bool tight;
    int floor;
    if (j == 0) {
      tight = pos > 0;
      floor = tight ? atom_[static_cast<std::size_t>(pos - k_)] : 0;
    } else {
      tight = tightv_[static_cast<std::size_t>(pos - 1)] != 0;
      floor = tight ? atom_[static_cast<std::size_t>(pos - k_)]
                    : atom_[static_cast<std::size_t>(pos - 1)] + 1;
    }
    floorv_[static_cast<std::size_t>(pos)] = floor;
    tightv_[static_cast<std::size_t>(pos)] = tight ? 1 : 0;
    atom_[static_cast<std::size_t>(pos)] = floor - 1;
    placedv_[static_cast<std::size_t>(pos)] = 0;
  }

  bool candidate_ok(int pos, int a) const {
    int b = pos / k_;
    if ((cov_[static_cast<std::size_t>(a)] & bmask_[static_cast<std::size_t>(b)]) != 0) return false;
    if (opt_.prune_degree_cap && dep_[static_cast<std::size_t>(a)] >= cap_) return false;
    if (!tstack_.empty() && use_cnt_[static_cast<std::size_t>(a)] == 0) {
      // An untouched atom equivalent to a smaller untouched candidate under a
      // transposition stabilizing everything placed so far explores the same
      // subtree up to relabeling.
      const auto& mask = tstack_[static_cast<std::size_t>(b)];
      Block window = ((Block{1} << a) - 1) & ~((Block{1} << floorv_[static_cast<std::size_t>(pos)]) - 1);
      Block peers = mask[static_cast<std::size_t>(a)] & window;
      while (peers != 0) {
        int c = std::countr_zero(peers);
        if (use_cnt_[static_cast<std::size_t>(c)] == 0) return false;
        peers &= peers - 1;
      }
    }
    return true;
  }

  // Elements of the prefix stabilizer that keep the just-completed block in
  // place are automorphisms of the whole new prefix; handing them to the
  // orbit search wholesale is what lets it skip the symmetric branches
  // outright instead of rediscovering the group one tie at a time. Generators
  // alone are useless for this (they almost never fix the new block one by
  // one), so small stabilizers are expanded into explicit element lists,
  // cached per level until the prefix there changes.
  void collect_seeds(int b) {
    const PermGroup& above = sstack_[static_cast<std::size_t>(b - 1)];
    if (above.order() <= kSeedOrderCap) {
      auto& elems = estack_[static_cast<std::size_t>(b - 1)];
      if (!evalid_[static_cast<std::size_t>(b - 1)]) {
        elems.clear();
        elems.reserve(static_cast<std::size_t>(above.order()));
        above.for_each_element([&elems](const Perm& g) { elems.push_back(g); });
        evalid_[static_cast<std::size_t>(b - 1)] = 1;
#ifdef MATROID3_GEN_COUNTERS
        ++gen_counters::materializations;
#endif
      }
      Block nb = bmask_[static_cast<std::size_t>(b - 1)];
      for (const Perm& g : elems)
        if (g.apply_mask(nb) == nb && !g.is_identity()) seeds_.push_back(g);
#ifdef MATROID3_GEN_COUNTERS
      ++gen_counters::elem_seeded;
      gen_counters::seeds_pushed += static_cast<long>(seeds_.size());
#endif
    } else {
      const auto& gs = above.generators();
      seeds_.insert(seeds_.end(), gs.begin(), gs.end());
#ifdef MATROID3_GEN_COUNTERS
      ++gen_counters::gens_fallback;
#endif
    }
  }

  // Stabilizer of the first b new blocks inside Stab(placed), computed once
  // per surviving prefix and reused while the prefix is intact: its elements
  // seed the next boundary's search, and its transpositions drive the merge
  // prune for the next block's slots.
  void prepare_level(int b, const BlockList& prefix) {
    SearchOptions so;
    const auto& above = sstack_[static_cast<std::size_t>(b - 1)].generators();
    so.seed_automorphisms = &above;
    if (!s_.placed.empty()) so.colour_context = &s_.placed;
    sstack_[static_cast<std::size_t>(b)] = blocklist_stabilizer(n_, s_.stab, prefix, so);
    evalid_[static_cast<std::size_t>(b)] = 0;
    if (!tstack_.empty()) {
      auto& mask = tstack_[static_cast<std::size_t>(b)];
      mask.assign(static_cast<std::size_t>(n_), 0);
      const PermGroup& S = sstack_[static_cast<std::size_t>(b)];
      if (!S.is_trivial()) {
        for (int y = 1; y < n_; ++y)
          for (int x = 0; x < y; ++x)
            if (S.contains(Perm::transposition(n_, x, y)))
              mask[static_cast<std::size_t>(y)] |= Block{1} << x;
      }
    }
  }

  // True when some stabilizer transposition sends the prefix strictly lower.
  // Transpositions that fix the prefix are collected into seeds_ on the way;
  // they prime the orbit pruning of the full search that follows.
  bool transposition_lowers(const BlockList& prefix) {
    seeds_.clear();
    for (int y = 1; y < n_; ++y) {
      Block row = smask_[static_cast<std::size_t>(y)];
      while (row != 0) {
        int x = std::countr_zero(row);
        row &= row - 1;
        Block flip = (Block{1} << x) | (Block{1} << y);
        scratch_ = prefix;
        bool touched = false;
        for (Block& blk : scratch_) {
          Block hit = blk & flip;
          if (hit != 0 && hit != flip) {
            blk ^= flip;
            touched = true;
          }
        }
        if (!touched) {
          seeds_.push_back(Perm::transposition(n_, x, y));
          continue;
        }
        std::sort(scratch_.begin(), scratch_.end(), block_normal_order);
        if (blocklist_less(scratch_, prefix)) return true;
        if (scratch_ == prefix) seeds_.push_back(Perm::transposition(n_, x, y));
      }
    }
    return false;
  }

  void place_slot(int pos, int a) {
    int b = pos / k_;
    Block rest = bmask_[static_cast<std::size_t>(b)];
    cov_[static_cast<std::size_t>(a)] |= rest;
    while (rest != 0) {
      int c = std::countr_zero(rest);
      cov_[static_cast<std::size_t>(c)] |= Block{1} << a;
      rest &= rest - 1;
    }
    bmask_[static_cast<std::size_t>(b)] |= Block{1} << a;
    ++dep_[static_cast<std::size_t>(a)];
    ++use_cnt_[static_cast<std::size_t>(a)];
    int j = pos % k_;
    bool tight_in = (j == 0) ? pos > 0 : tightv_[static_cast<std::size_t>(pos - 1)] != 0;
    tightv_[static_cast<std::size_t>(pos)] =
        (tight_in && a == atom_[static_cast<std::size_t>(pos - k_)]) ? 1 : 0;
    atom_[static_cast<std::size_t>(pos)] = a;
    placedv_[static_cast<std::size_t>(pos)] = 1;
  }

  void unplace_slot(int pos) {
    int b = pos / k_;
    int a = atom_[static_cast<std::size_t>(pos)];
    bmask_[static_cast<std::size_t>(b)] &= ~(Block{1} << a);
    Block rest = bmask_[static_cast<std::size_t>(b)];
    cov_[static_cast<std::size_t>(a)] &= ~rest;
    while (rest != 0) {
      int c = std::countr_zero(rest);
      cov_[static_cast<std::size_t>(c)] &= ~(Block{1} << a);
      rest &= rest - 1;
    }
    --dep_[static_cast<std::size_t>(a)];
    --use_cnt_[static_cast<std::size_t>(a)];
    placedv_[static_cast<std::size_t>(pos)] = 0;
  }

  // Remaining blocks once b_done of the current level are in: the rest of
  // this level plus everything below.
  bool group_parity_dead(int b_done) const {
    long cap = 0;
    int cnt = 0, lone = 0;
    auto add = [&](int k, int m) {
      if (m > 0 && k % 2 == 0) {
        cap += static_cast<long>(k) * m;
        cnt += m;
        lone = k;
      }
    };
    add(k_, m_ - b_done);
    for (int k = 2; k < k_; ++k) add(k, s_.mv.count(k));
    return detail::parity_dead(n_, cov_, cap, cnt, lone);
  }

  GenerationState s_;
  GenerateOptions opt_;
  int n_ = 0, k_ = 0, m_ = 0, k1_ = 0, cap_ = 0;
  bool stab_trivial_ = false;
  bool started_ = false;
  bool done_ = false;
  bool inner_done_ = false;

  std::array<Block, kMaxDegree> cov_{};
  std::array<std::uint8_t, kMaxDegree> dep_{};
  int total_ = 0;
  int pos_ = 0;
  std::vector<int> atom_;
  std::vector<int> floorv_;
  std::vector<std::uint8_t> tightv_;
  std::vector<std::uint8_t> placedv_;
  std::vector<Block> bmask_;
  std::vector<std::uint8_t> use_cnt_;
  std::vector<Block> smask_;
  std::vector<PermGroup> sstack_;
  std::vector<std::vector<Perm>> estack_;
  std::vector<std::uint8_t> evalid_;
  std::vector<std::vector<Block>> tstack_;
  BlockList scratch_;
  std::vector<Perm> seeds_;
};

inline std::unique_ptr<RecursiveIterator> iterator_from_state(GenerationState state,
                                                              GenerateOptions options = {}) {
  return std::make_unique<RecursiveIterator>(std::move(state), options);
}

// Depth-first full evaluation; leaves in deterministic order (candidates
// lexicographic at every level). Each leaf is converted to its minimal image
// under Sym(n) and revalidated.
inline std::vector<TwoPartition> generate_all_sequential(int n, const MultiplicityVector& mv,
                                                         const GenerateOptions& options = {}) {
  std::vector<TwoPartition> out;
  bool any = false;
  for (int k = 2; k < n; ++k) any = any || mv.count(k) > 0;
  if (!any) return out;
  std::vector<std::unique_ptr<RecursiveIterator>> stack;
  stack.push_back(iterator_from_state(initial_state(n, mv), options));
  while (!stack.empty()) {
    auto r = stack.back()->next();
    if (auto* child = std::get_if<std::unique_ptr<RecursiveIterator>>(&r)) {
      stack.push_back(std::move(*child));
    } else if (auto* leaf = std::get_if<BlockList>(&r)) {
      out.push_back(make_matroid_masks(n, minimal_image(n, *leaf)));
    } else {
      stack.pop_back();
    }
  }
  return out;
}

}  // namespace matroid3
