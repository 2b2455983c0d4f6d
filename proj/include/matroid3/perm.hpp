#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace matroid3 {

// Permutations act on {0, ..., n-1} internally; every user-facing interface
// (cycle input, image lists, serialization) is 1-based. Maximum supported
// degree is 20 so that group orders fit in an unsigned 64-bit integer.
inline constexpr int kMaxDegree = 20;

class Perm {
 public:
  Perm() = default;

  static Perm identity(int degree) {
    check_degree(degree);
    Perm p;
    p.img_.resize(static_cast<std::size_t>(degree));
    std::iota(p.img_.begin(), p.img_.end(), static_cast<std::uint8_t>(0));
    return p;
  }

  // images[i] = image of atom i+1, all 1-based.
  static Perm from_one_based_images(const std::vector<int>& images) {
    check_degree(static_cast<int>(images.size()));
    Perm p;
    p.img_.resize(images.size());
    std::vector<bool> seen(images.size(), false);
    for (std::size_t i = 0; i < images.size(); ++i) {
      int v = images[i];
      if (v < 1 || v > static_cast<int>(images.size()) || seen[static_cast<std::size_t>(v - 1)])
        fail(errc::malformed_permutation, "image list is not a bijection on 1..n");
      seen[static_cast<std::size_t>(v - 1)] = true;
      p.img_[i] = static_cast<std::uint8_t>(v - 1);
    }
    return p;
  }

  // 1-based disjoint cycles, e.g. from_cycles(4, {{1, 2}, {3, 4}}).
  static Perm from_cycles(int degree, std::initializer_list<std::initializer_list<int>> cycles) {
    Perm p = identity(degree);
    for (const auto& cyc : cycles) {
      std::vector<int> c(cyc);
      for (std::size_t i = 0; i < c.size(); ++i) {
        int from = c[i], to = c[(i + 1) % c.size()];
        if (from < 1 || from > degree || to < 1 || to > degree)
          fail(errc::malformed_permutation, "cycle entry out of range");
        if (p.img_[static_cast<std::size_t>(from - 1)] != from - 1)
          fail(errc::malformed_permutation, "cycles are not disjoint");
        p.img_[static_cast<std::size_t>(from - 1)] = static_cast<std::uint8_t>(to - 1);
      }
    }
    return p;
  }

  static Perm transposition(int degree, int a, int b) {  // 0-based points
    Perm p = identity(degree);
    p.img_[static_cast<std::size_t>(a)] = static_cast<std::uint8_t>(b);
    p.img_[static_cast<std::size_t>(b)] = static_cast<std::uint8_t>(a);
    return p;
  }

  int degree() const { return static_cast<int>(img_.size()); }
  int operator()(int x) const { return img_[static_cast<std::size_t>(x)]; }

  bool is_identity() const {
    for (int i = 0; i < degree(); ++i)
      if (img_[static_cast<std::size_t>(i)] != i) return false;
    return true;
  }

  // (a.compose(b))(x) == a(b(x))
  Perm compose(const Perm& b) const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[i] = img_[b.img_[i]];
    return r;
  }

  Perm inverse() const {
    Perm r;
    r.img_.resize(img_.size());
    for (std::size_t i = 0; i < img_.size(); ++i) r.img_[img_[i]] = static_cast<std::uint8_t>(i);
    return r;
  }

  std::uint32_t apply_mask(std::uint32_t mask) const {
    std::uint32_t out = 0;
    while (mask != 0) {
      int i = std::countr_zero(mask);
      mask &= mask - 1;
      out |= std::uint32_t{1} << img_[static_cast<std::size_t>(i)];
    }
    return out;
  }

  bool operator==(const Perm& o) const { return img_ == o.img_; }
  bool operator!=(const Perm& o) const { return img_ != o.img_; }
  bool operator<(const Perm& o) const { return img_ < o.img_; }

  std::string to_string() const {  // 1-based cycle notation, for diagnostics
    std::string s;
    std::vector<bool> seen(img_.size(), false);
    for (int i = 0; i < degree(); ++i) {
      if (seen[static_cast<std::size_t>(i)] || img_[static_cast<std::size_t>(i)] == i) continue;
      s += '(';
      int j = i;
      while (!seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        s += std::to_string(j + 1);
        j = img_[static_cast<std::size_t>(j)];
        if (!seen[static_cast<std::size_t>(j)]) s += ' ';
      }
      s += ')';
    }
    return s.empty() ? "()" : s;
  }

 private:
  static void check_degree(int degree) {
    if (degree < 0 || degree > kMaxDegree)
      fail(errc::malformed_permutation,
           "degree " + std::to_string(degree) + " outside supported range 0.." +
               std::to_string(kMaxDegree));
  }

  std::vector<std::uint8_t> img_;
};

}  // namespace matroid3
