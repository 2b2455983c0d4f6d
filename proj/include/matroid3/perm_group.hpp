#pragma once

#include <algorithm>
#include <vector>

#include "errors.hpp"
#include "perm.hpp"

namespace matroid3 {

// Permutation group given by a stabilizer chain along the natural base
// 0, 1, 2, ...  Construction is a deterministic incremental Schreier-Sims:
// no randomization, so identical generator lists always produce identical
// chains. Degree is capped at kMaxDegree so orders fit in unsigned 64-bit.
class PermGroup {
 public:
  struct Level {
    int base = 0;
    std::vector<int> orbit;         // orbit[0] == base
    std::vector<Perm> transversal;  // transversal[i](base) == orbit[i]
    std::vector<int> orbit_pos;     // degree-sized; -1 when not in orbit
    std::vector<Perm> gens;         // generators of the stabilizer of 0..base-1
                                    // assigned to this level
  };

  PermGroup() = default;

  static PermGroup trivial(int degree) {
    PermGroup g;
    g.degree_ = degree;
    g.level_by_point_.assign(static_cast<std::size_t>(degree), -1);
    return g;
  }

  static PermGroup from_generators(int degree, const std::vector<Perm>& gens) {
    Builder b(degree);
    for (const Perm& p : gens) {
      if (p.degree() != degree)
        fail(errc::malformed_permutation, "generator degree does not match group degree");
      b.add(p);
    }
    return b.finish(gens);
  }

  static PermGroup symmetric(int degree) {
    if (degree <= 1) return trivial(degree);
    std::vector<int> cyc(static_cast<std::size_t>(degree));
    for (int i = 0; i < degree; ++i) cyc[static_cast<std::size_t>(i)] = (i + 1) % degree + 1;
    std::vector<Perm> gens{Perm::transposition(degree, 0, 1), Perm::from_one_based_images(cyc)};
    return from_generators(degree, gens);
  }

  int degree() const { return degree_; }
  unsigned long long order() const { return order_; }
  bool is_trivial() const { return levels_.empty(); }
  const std::vector<Perm>& generators() const { return gens_; }
  const std::vector<Level>& levels() const { return levels_; }

  // Index into levels() of the level based at point p, or -1 when the chain
  // fixes p at that position (the pointwise stabilizer of 0..p-1 fixes p).
  int level_by_point(int p) const { return level_by_point_[static_cast<std::size_t>(p)]; }

  // Visits every group element exactly once (including the identity) as the
  // transversal products t0 * t1 * ... mirroring the factorization sift uses.
  // Cost is order() compositions; check order() before calling on big groups.
  template <class Fn>
  void for_each_element(Fn&& fn) const {
    elements_rec(levels_.size(), Perm::identity(degree_), fn);
  }

  bool contains(const Perm& p) const {
    if (p.degree() != degree_) return false;
    Perm r = p;
    for (const Level& lvl : levels_) {
      if (r.is_identity()) return true;
      int q = r(lvl.base);
      if (q == lvl.base) continue;
      int idx = lvl.orbit_pos[static_cast<std::size_t>(q)];
      if (idx < 0) return false;
      r = lvl.transversal[static_cast<std::size_t>(idx)].inverse().compose(r);
    }
    return r.is_identity();
  }

 private:
  template <class Fn>
  void elements_rec(std::size_t idx, const Perm& acc, Fn& fn) const {
    if (idx == 0) {
      fn(acc);
      return;
    }
    for (const Perm& t : levels_[idx - 1].transversal) elements_rec(idx - 1, t.compose(acc), fn);
  }

  class Builder {
   public:
    explicit Builder(int n) : n_(n), gens_(static_cast<std::size_t>(n)), lv_(static_cast<std::size_t>(n)) {
      for (int p = 0; p < n; ++p) {
        lv_[static_cast<std::size_t>(p)].base = p;
        lv_[static_cast<std::size_t>(p)].orbit_pos.assign(static_cast<std::size_t>(n), -1);
      }
    }

    void add(const Perm& g) {
      if (g.is_identity()) return;
      int p = 0;
      while (g(p) == p) ++p;
      push_gen(p, g);
    }

    PermGroup finish(const std::vector<Perm>& input_gens) {
      bool dirty = true;
      while (dirty) {
        dirty = false;
        for (int p = n_ - 1; p >= 0; --p)
          if (process_level(p)) dirty = true;
      }
      PermGroup g;
      g.degree_ = n_;
      g.level_by_point_.assign(static_cast<std::size_t>(n_), -1);
      g.order_ = 1;
      for (int p = 0; p < n_; ++p) {
        Level& lvl = lv_[static_cast<std::size_t>(p)];
        if (lvl.orbit.size() <= 1) continue;
        lvl.gens = gens_[static_cast<std::size_t>(p)];
        g.order_ *= static_cast<unsigned long long>(lvl.orbit.size());
        g.level_by_point_[static_cast<std::size_t>(p)] = static_cast<int>(g.levels_.size());
        g.levels_.push_back(std::move(lvl));
      }
      for (const Perm& p : input_gens)
        if (!p.is_identity()) g.gens_.push_back(p);
      return g;
    }

   private:
    bool push_gen(int p, const Perm& g) {
      auto& v = gens_[static_cast<std::size_t>(p)];
      if (std::find(v.begin(), v.end(), g) != v.end()) return false;
      v.push_back(g);
      return true;
    }

    // Rebuilds the orbit of p under all generators assigned to levels >= p
    // (deeper generators fix p but can move other points of the orbit), then
    // sifts every Schreier generator through the deeper chain. Residues that
    // get stuck become new strong generators; returns whether any were added.
    bool process_level(int p) {
      std::vector<Perm> snap;
      for (int r = p; r < n_; ++r)
        for (const Perm& s : gens_[static_cast<std::size_t>(r)]) snap.push_back(s);
      Level& lvl = lv_[static_cast<std::size_t>(p)];
      lvl.orbit.clear();
      lvl.transversal.clear();
      std::fill(lvl.orbit_pos.begin(), lvl.orbit_pos.end(), -1);
      lvl.orbit.push_back(p);
      lvl.transversal.push_back(Perm::identity(n_));
      lvl.orbit_pos[static_cast<std::size_t>(p)] = 0;
      for (std::size_t i = 0; i < lvl.orbit.size(); ++i) {
        for (const Perm& s : snap) {
          int y = s(lvl.orbit[i]);
          if (lvl.orbit_pos[static_cast<std::size_t>(y)] < 0) {
            lvl.orbit_pos[static_cast<std::size_t>(y)] = static_cast<int>(lvl.orbit.size());
            lvl.orbit.push_back(y);
            lvl.transversal.push_back(s.compose(lvl.transversal[i]));
          }
        }
      }
      bool added = false;
      for (std::size_t i = 0; i < lvl.orbit.size(); ++i) {
        for (const Perm& s : snap) {
          int y = s(lvl.orbit[i]);
          int yi = lvl.orbit_pos[static_cast<std::size_t>(y)];
          Perm sg = lvl.transversal[static_cast<std::size_t>(yi)].inverse().compose(
              s.compose(lvl.transversal[i]));
          if (sg.is_identity()) continue;
          auto [res, q] = sift(std::move(sg), p + 1);
          if (q < n_ && push_gen(q, res)) added = true;
        }
      }
      return added;
    }

    // Reduces r through levels from.. and reports where it got stuck; a level
    // of n_ means r sifted all the way to the identity.
    std::pair<Perm, int> sift(Perm r, int from) const {
      for (int p = from; p < n_; ++p) {
        if (r.is_identity()) return {std::move(r), n_};
        int q = r(p);
        if (q == p) continue;
        const Level& lvl = lv_[static_cast<std::size_t>(p)];
        int idx = lvl.orbit_pos[static_cast<std::size_t>(q)];
        if (idx < 0) return {std::move(r), p};
        r = lvl.transversal[static_cast<std::size_t>(idx)].inverse().compose(r);
      }
      return {std::move(r), n_};
    }

    int n_;
    std::vector<std::vector<Perm>> gens_;
    std::vector<Level> lv_;
  };

  int degree_ = 0;
  unsigned long long order_ = 1;
  std::vector<Perm> gens_;
  std::vector<Level> levels_;
  std::vector<int> level_by_point_;
};

}  // namespace matroid3
