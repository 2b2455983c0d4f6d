#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "block_list.hpp"
#include "perm_group.hpp"

namespace matroid3 {

#ifdef MATROID3_GEN_COUNTERS
namespace search_counters {
inline long dfs_nodes = 0, ties = 0, uf_rebuilds = 0, seeds_taken = 0;
}
#endif

namespace detail {

// Two-sided colour refinement on the atom/block incidence structure. Atoms
// start monochrome; blocks are coloured by (size, member colours), atoms by
// the multiset of colours of the blocks containing them, until stable. Colour
// ids are assigned by sorting signature values, so the result is invariant
// under relabeling: any isomorphism maps colour classes onto colour classes.
inline std::vector<int> refine_colours(int n, const BlockList& blocks) {
  std::vector<int> colour(static_cast<std::size_t>(n), 0);
  if (n == 0 || blocks.empty()) return colour;
  int classes = 1;
  for (;;) {
    std::vector<std::vector<int>> bsig(blocks.size());
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      std::vector<int>& s = bsig[i];
      s.push_back(block_size(blocks[i]));
      for (int a : block_atoms(blocks[i])) s.push_back(colour[static_cast<std::size_t>(a)]);
      std::sort(s.begin() + 1, s.end());
    }
    std::vector<std::vector<int>> buniq = bsig;
    std::sort(buniq.begin(), buniq.end());
    buniq.erase(std::unique(buniq.begin(), buniq.end()), buniq.end());
    std::vector<std::vector<int>> asig(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) asig[static_cast<std::size_t>(a)].push_back(colour[static_cast<std::size_t>(a)]);
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      int bc = static_cast<int>(std::lower_bound(buniq.begin(), buniq.end(), bsig[i]) - buniq.begin());
      for (int a : block_atoms(blocks[i])) asig[static_cast<std::size_t>(a)].push_back(bc);
    }
    for (auto& s : asig) std::sort(s.begin() + 1, s.end());
    std::vector<std::vector<int>> auniq = asig;
    std::sort(auniq.begin(), auniq.end());
    auniq.erase(std::unique(auniq.begin(), auniq.end()), auniq.end());
    for (int a = 0; a < n; ++a)
      colour[static_cast<std::size_t>(a)] = static_cast<int>(
          std::lower_bound(auniq.begin(), auniq.end(), asig[static_cast<std::size_t>(a)]) - auniq.begin());
    int now = static_cast<int>(auniq.size());
    if (now == classes) break;
    classes = now;
  }
  return colour;
}

}  // namespace detail

// Backtracking search over a permutation group G acting on a block list.
//
// Elements h of G are enumerated through G's stabilizer chain by choosing,
// depth by depth, which atom h sends label 0 to, then label 1, and so on; the
// candidates at depth d are exactly the chain's options, so every explored
// node extends to a group element. Assigning labels in increasing order means
// each block's known labels form a prefix of its final sorted label sequence,
// which makes a decided prefix of the image's normal-form key available at
// every node for comparison against the incumbent key.
//
// Automorphisms of the list discovered as ties are reused to prune sibling
// candidates lying in a common orbit (only automorphisms fixing all
// previously assigned atoms are applied, which keeps the pruning sound).
struct SearchOptions {
  // Extra blocks that sharpen the colour refinement used by the stabilizer
  // search (e.g. the already-placed part of a partial configuration whose
  // stabilizer is the ambient group).
  const BlockList* colour_context = nullptr;
  // Known elements of G; the ones fixing the block list are used as
  // orbit-pruning seeds. Membership in G is the caller's responsibility.
  const std::vector<Perm>* seed_automorphisms = nullptr;
};

class CanonicalSearch {
 public:
  using Options = SearchOptions;

  CanonicalSearch(int n, const PermGroup& group, BlockList blocks, Options opt = {})
      : n_(n), G_(&group), blocks_(std::move(blocks)), opt_(opt) {
    normalize_blocks(blocks_);
    nb_ = static_cast<int>(blocks_.size());
    bsize_.resize(static_cast<std::size_t>(nb_));
    for (int i = 0; i < nb_; ++i) bsize_[static_cast<std::size_t>(i)] = block_size(blocks_[static_cast<std::size_t>(i)]);
    for (int beg = 0; beg < nb_;) {
      int end = beg;
      while (end < nb_ && bsize_[static_cast<std::size_t>(end)] == bsize_[static_cast<std::size_t>(beg)]) ++end;
      groups_.emplace_back(beg, end);
      beg = end;
    }
    atom_blocks_.assign(static_cast<std::size_t>(n_), {});
    for (int i = 0; i < nb_; ++i)
      for (int a : block_atoms(blocks_[static_cast<std::size_t>(i)]))
        atom_blocks_[static_cast<std::size_t>(a)].push_back(i);
    seq_.assign(static_cast<std::size_t>(nb_), {});
    len_.assign(static_cast<std::size_t>(nb_), 0);
    assigned_.assign(static_cast<std::size_t>(n_), -1);
    incumbent_ = flatten_key(blocks_);
    h_inc_ = Perm::identity(n_);
  }

  BlockList run_minimal_image() {
    if (nb_ == 0 || G_->is_trivial()) return blocks_;
    mode_ = Mode::kMinImage;
    seed();
    dfs(0, Perm::identity(n_));
    return relabel(h_inc_.inverse(), blocks_);
  }

  bool run_is_minimal() {
    if (nb_ == 0 || G_->is_trivial()) return true;
    mode_ = Mode::kIsMinimal;
    seed();
    return dfs(0, Perm::identity(n_));
  }

  PermGroup run_stabilizer() {
    if (nb_ == 0) return *G_;
    if (G_->is_trivial()) return PermGroup::trivial(n_);
    mode_ = Mode::kStabilizer;
    if (opt_.colour_context != nullptr && !opt_.colour_context->empty()) {
      BlockList all = *opt_.colour_context;
      all.insert(all.end(), blocks_.begin(), blocks_.end());
      colour_ = detail::refine_colours(n_, all);
    } else {
      colour_ = detail::refine_colours(n_, blocks_);
    }
    bool discrete = true;
    {
      std::vector<char> seen(static_cast<std::size_t>(n_), 0);
      for (int c : colour_) {
        if (seen[static_cast<std::size_t>(c)]) { discrete = false; break; }
        seen[static_cast<std::size_t>(c)] = 1;
      }
    }
    if (discrete) return PermGroup::trivial(n_);
    seed();
    dfs(0, Perm::identity(n_));
    return PermGroup::from_generators(n_, auts_);
  }

 private:
  enum class Mode { kMinImage, kIsMinimal, kStabilizer };
  enum class Cmp { kLess, kGreater, kEqualUndecided, kEqualComplete };

  void seed() {
    if (opt_.seed_automorphisms != nullptr)
      for (const Perm& s : *opt_.seed_automorphisms)
        if (relabel(s, blocks_) == blocks_) {
#ifdef MATROID3_GEN_COUNTERS
          if (add_aut(s)) ++search_counters::seeds_taken;
#else
          add_aut(s);
#endif
        }
    // Atoms outside every block are interchangeable whenever the ambient
    // group allows it; a star of transpositions links them into one orbit.
    std::vector<int> untouched;
    for (int a = 0; a < n_; ++a)
      if (atom_blocks_[static_cast<std::size_t>(a)].empty()) untouched.push_back(a);
    for (std::size_t i = 1; i < untouched.size(); ++i) {
      Perm t = Perm::transposition(n_, untouched[0], untouched[i]);
      if (G_->contains(t)) add_aut(t);
    }
  }

  bool add_aut(const Perm& k) {
    if (k.is_identity()) return false;
    std::uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < n_; ++i)
      h = (h ^ static_cast<std::uint64_t>(k(i))) * 1099511628211ull;
    auto& bucket = aut_index_[h];
    for (int idx : bucket)
      if (auts_[static_cast<std::size_t>(idx)] == k) return false;
    bucket.push_back(static_cast<int>(auts_.size()));
    std::uint32_t fix = 0;
    for (int i = 0; i < n_; ++i)
      if (k(i) == i) fix |= std::uint32_t{1} << i;
    aut_fix_.push_back(fix);
    auts_.push_back(k);
    return true;
  }

  void assign(int depth, int atom) {
    assigned_[static_cast<std::size_t>(depth)] = atom;
    assigned_mask_ |= std::uint32_t{1} << atom;
    for (int b : atom_blocks_[static_cast<std::size_t>(atom)]) {
      seq_[static_cast<std::size_t>(b)][static_cast<std::size_t>(len_[static_cast<std::size_t>(b)]++)] =
          static_cast<std::uint8_t>(depth);
      if (len_[static_cast<std::size_t>(b)] == bsize_[static_cast<std::size_t>(b)]) ++complete_;
    }
  }

  void unassign(int atom) {
    assigned_mask_ &= ~(std::uint32_t{1} << atom);
    for (int b : atom_blocks_[static_cast<std::size_t>(atom)]) {
      if (len_[static_cast<std::size_t>(b)] == bsize_[static_cast<std::size_t>(b)]) --complete_;
      --len_[static_cast<std::size_t>(b)];
    }
  }

  // true iff block x's decided part sorts strictly before block y's.
  bool partial_less(int x, int y) const {
    int lx = len_[static_cast<std::size_t>(x)], ly = len_[static_cast<std::size_t>(y)];
    int m = std::min(lx, ly);
    const auto& sx = seq_[static_cast<std::size_t>(x)];
    const auto& sy = seq_[static_cast<std::size_t>(y)];
    for (int j = 0; j < m; ++j) {
      if (sx[static_cast<std::size_t>(j)] != sy[static_cast<std::size_t>(j)])
        return sx[static_cast<std::size_t>(j)] < sy[static_cast<std::size_t>(j)];
    }
    // Equal through the shorter sequence: the shorter block's next label is
    // larger than every label assigned so far, so the longer block leads.
    return lx > ly;
  }

  Cmp compare() {
    std::size_t pos = 0;
    for (const auto& [beg, end] : groups_) {
      scratch_.clear();
      for (int i = beg; i < end; ++i) scratch_.push_back(i);
      std::sort(scratch_.begin(), scratch_.end(), [this](int x, int y) { return partial_less(x, y); });
      for (int i : scratch_) {
        int L = len_[static_cast<std::size_t>(i)];
        const auto& s = seq_[static_cast<std::size_t>(i)];
        for (int j = 0; j < L; ++j) {
          std::uint8_t v = s[static_cast<std::size_t>(j)];
          if (v != incumbent_[pos]) return v < incumbent_[pos] ? Cmp::kLess : Cmp::kGreater;
          ++pos;
        }
        if (L < bsize_[static_cast<std::size_t>(i)]) return Cmp::kEqualUndecided;
      }
    }
    return Cmp::kEqualComplete;
  }

  void set_incumbent(const Perm& prefix) {
    incumbent_.clear();
    for (const auto& [beg, end] : groups_) {
      scratch_.clear();
      for (int i = beg; i < end; ++i) scratch_.push_back(i);
      std::sort(scratch_.begin(), scratch_.end(), [this](int x, int y) { return partial_less(x, y); });
      for (int i : scratch_)
        for (int j = 0; j < len_[static_cast<std::size_t>(i)]; ++j)
          incumbent_.push_back(seq_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    h_inc_ = prefix;
  }

  // At a node where every block is fully labelled, the whole subtree below
  // shares one image: the subtree is the coset prefix * T of the chain's tail
  // group T fixing 0..depth-1. All its elements tie, so T's generators yield
  // automorphisms of the list (directly in stabilizer mode, conjugated by the
  // leaf element otherwise).
  void absorb_tail(int depth, const Perm& prefix, bool conjugate) {
    const Perm inv = conjugate ? prefix.inverse() : Perm();
    for (const auto& lvl : G_->levels()) {
      if (lvl.base < depth) continue;
      for (const Perm& g : lvl.gens) {
        if (conjugate)
          add_aut(prefix.compose(g).compose(inv));
        else
          add_aut(g);
      }
    }
  }

  bool dfs(int depth, const Perm& prefix) {
#ifdef MATROID3_GEN_COUNTERS
    ++search_counters::dfs_nodes;
#endif
    Cmp c = compare();
    if (mode_ == Mode::kStabilizer) {
      if (c == Cmp::kLess || c == Cmp::kGreater) return true;
      if (c == Cmp::kEqualComplete) {
#ifdef MATROID3_GEN_COUNTERS
        ++search_counters::ties;
#endif
        add_aut(prefix);
        absorb_tail(depth, prefix, false);
        return true;
      }
    } else {
      if (c == Cmp::kGreater) return true;
      if (c == Cmp::kEqualComplete) {
#ifdef MATROID3_GEN_COUNTERS
        ++search_counters::ties;
#endif
        add_aut(h_inc_.compose(prefix.inverse()));
        absorb_tail(depth, prefix, true);
        return true;
      }
      if (c == Cmp::kLess) {
        if (mode_ == Mode::kIsMinimal) return false;
        if (complete_ == nb_) {
          set_incumbent(prefix);
          absorb_tail(depth, prefix, true);
          return true;
        }
      }
    }
    return descend(depth, prefix);
  }

  bool descend(int depth, const Perm& prefix) {
    int lvl_idx = G_->level_by_point(depth);
    if (lvl_idx < 0) {
      int atom = prefix(depth);
      if (mode_ == Mode::kStabilizer &&
          colour_[static_cast<std::size_t>(atom)] != colour_[static_cast<std::size_t>(depth)])
        return true;
      assign(depth, atom);
      bool ok = dfs(depth + 1, prefix);
      unassign(atom);
      return ok;
    }
    const PermGroup::Level& lvl = G_->levels()[static_cast<std::size_t>(lvl_idx)];
    std::vector<std::pair<int, int>> cands;  // (atom, orbit index), ascending by atom
    cands.reserve(lvl.orbit.size());
    for (std::size_t i = 0; i < lvl.orbit.size(); ++i)
      cands.emplace_back(prefix(lvl.orbit[i]), static_cast<int>(i));
    std::sort(cands.begin(), cands.end());

    std::vector<int> tried;
    std::vector<int> uf;
    std::size_t uf_auts = 0;
    auto uf_find = [&uf](int x) {
      while (uf[static_cast<std::size_t>(x)] != x) {
        uf[static_cast<std::size_t>(x)] = uf[static_cast<std::size_t>(uf[static_cast<std::size_t>(x)])];
        x = uf[static_cast<std::size_t>(x)];
      }
      return x;
    };

    for (const auto& [atom, oi] : cands) {
      if (mode_ == Mode::kStabilizer &&
          colour_[static_cast<std::size_t>(atom)] != colour_[static_cast<std::size_t>(depth)])
        continue;
      if (!tried.empty() && !auts_.empty()) {
        // The prefix only grows an automorphism's obligations, never sheds
        // them, and it is constant across this loop, so merges stay valid and
        // catching up on automorphisms found by deeper calls is incremental.
        if (uf_auts != auts_.size()) {
#ifdef MATROID3_GEN_COUNTERS
          ++search_counters::uf_rebuilds;
#endif
          if (uf.empty()) {
            uf.resize(static_cast<std::size_t>(n_));
            for (int i = 0; i < n_; ++i) uf[static_cast<std::size_t>(i)] = i;
          }
          for (std::size_t ai = uf_auts; ai < auts_.size(); ++ai) {
            if ((assigned_mask_ & ~aut_fix_[ai]) != 0) continue;
            const Perm& k = auts_[ai];
            for (int i = 0; i < n_; ++i) {
              int a = uf_find(i), b = uf_find(k(i));
              if (a != b) uf[static_cast<std::size_t>(a)] = b;
            }
          }
          uf_auts = auts_.size();
        }
        bool equivalent_done = false;
        for (int y : tried) {
          if (uf_find(y) == uf_find(atom)) {
            equivalent_done = true;
            break;
          }
        }
        if (equivalent_done) continue;
      }
      Perm child = prefix.compose(lvl.transversal[static_cast<std::size_t>(oi)]);
      assign(depth, atom);
      bool ok = dfs(depth + 1, child);
      unassign(atom);
      if (!ok) return false;
      tried.push_back(atom);
    }
    return true;
  }

  int n_;
  const PermGroup* G_;
  BlockList blocks_;
  Options opt_;
  Mode mode_ = Mode::kMinImage;
  int nb_ = 0;
  int complete_ = 0;
  std::vector<int> bsize_;
  std::vector<std::pair<int, int>> groups_;
  std::vector<std::vector<int>> atom_blocks_;
  std::vector<std::array<std::uint8_t, 24>> seq_;
  std::vector<int> len_;
  std::vector<int> assigned_;
  std::uint32_t assigned_mask_ = 0;
  std::vector<std::uint8_t> incumbent_;
  Perm h_inc_;
  std::vector<Perm> auts_;
  std::vector<std::uint32_t> aut_fix_;
  std::unordered_map<std::uint64_t, std::vector<int>> aut_index_;
  std::vector<int> colour_;
  std::vector<int> scratch_;
};

inline const PermGroup& cached_symmetric_group(int degree) {
  static std::mutex mu;
  static std::vector<PermGroup*> cache;
  std::lock_guard<std::mutex> lock(mu);
  if (static_cast<int>(cache.size()) <= degree) cache.resize(static_cast<std::size_t>(degree) + 1, nullptr);
  if (cache[static_cast<std::size_t>(degree)] == nullptr)
    cache[static_cast<std::size_t>(degree)] = new PermGroup(PermGroup::symmetric(degree));
  return *cache[static_cast<std::size_t>(degree)];
}

inline BlockList minimal_image(int n, const PermGroup& group, const BlockList& blocks,
                               CanonicalSearch::Options opt = {}) {
  return CanonicalSearch(n, group, blocks, opt).run_minimal_image();
}

inline BlockList minimal_image(int n, const BlockList& blocks) {
  return minimal_image(n, cached_symmetric_group(n), blocks);
}

inline bool is_minimal_in_orbit(int n, const PermGroup& group, const BlockList& blocks,
                                CanonicalSearch::Options opt = {}) {
  return CanonicalSearch(n, group, blocks, opt).run_is_minimal();
}

// Setwise stabilizer of a block list inside an ambient group.
inline PermGroup blocklist_stabilizer(int n, const PermGroup& group, const BlockList& blocks,
                                      CanonicalSearch::Options opt = {}) {
  return CanonicalSearch(n, group, blocks, opt).run_stabilizer();
}

inline PermGroup blocklist_stabilizer(int n, const BlockList& blocks) {
  return blocklist_stabilizer(n, cached_symmetric_group(n), blocks);
}

}  // namespace matroid3
