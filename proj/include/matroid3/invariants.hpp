#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <variant>
#include <vector>

#include "canonical.hpp"
#include "two_partition.hpp"

namespace matroid3 {

namespace detail {

// Exact integer square root (floor), digit-by-digit; no floating point.
inline std::uint64_t isqrt64(std::uint64_t x) {
  std::uint64_t r = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > x) bit >>= 2;
  while (bit != 0) {
    if (x >= r + bit) {
      x -= r + bit;
      r = (r >> 1) + bit;
    } else {
      r >>= 1;
    }
    bit >>= 2;
  }
  return r;
}

inline long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

// The characteristic polynomial of a 2-partition matroid is determined by its
// multiplicity vector: chi(t) = (t-1) * q(t) with q(t) = t^2 - (n-1)t +
// (b2 - (n-1)) and b2 = sum_k m_k (k-1). When q factors over the integers the
// roots (a, b) with a <= b satisfy a + b = n-1 and a*b = b2 - (n-1).
struct CharacteristicData {
  int n = 0;
  long long b2 = 0;
  bool splits = false;
  long long a = 0;
  long long b = 0;

  long long q(long long t) const { return t * t - (n - 1) * t + (b2 - (n - 1)); }
};

inline CharacteristicData characteristic_data(const MultiplicityVector& mv) {
  CharacteristicData d;
  d.n = mv.n;
  for (int k = 2; k < mv.n; ++k) d.b2 += static_cast<long long>(mv.count(k)) * (k - 1);
  const long long p = mv.n - 1;
  const long long disc = p * p - 4 * (d.b2 - p);
  if (disc >= 0) {
    const long long s = static_cast<long long>(detail::isqrt64(static_cast<std::uint64_t>(disc)));
    if (s * s == disc && (p - s) % 2 == 0) {
      d.splits = true;
      d.a = (p - s) / 2;
      d.b = (p + s) / 2;
    }
  }
  return d;
}

// Coefficients of a monic cubic in t, index = power of t.
using CharPoly = std::array<long long, 4>;

inline CharPoly char_poly_from_data(const CharacteristicData& d) {
  return CharPoly{-(d.b2 - d.n + 1), d.b2, -static_cast<long long>(d.n), 1};
}

inline std::string char_poly_to_string(const CharPoly& chi) {
  std::ostringstream os;
  bool first = true;
  for (int k = 3; k >= 0; --k) {
    long long c = chi[static_cast<std::size_t>(k)];
    if (c == 0) continue;
    if (first) {
      if (c < 0) os << "-";
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    long long m = c < 0 ? -c : c;
    if (m != 1 || k == 0) os << m;
    if (k >= 1) os << "t";
    if (k >= 2) os << "^" << k;
  }
  if (first) os << "0";
  return os.str();
}

inline int rank(const TwoPartition& M, Block S) {
  int s = block_size(S);
  if (s <= 1) return s;
  for (Block b : M.blocks)
    if ((S & ~b) == 0) return 2;
  return 3;
}

inline int rank(const TwoPartition& M, const std::vector<int>& atoms_one_based) {
  Block S = 0;
  for (int a : atoms_one_based) {
    if (a < 1 || a > M.n) throw std::out_of_range("atom outside 1..n");
    S |= Block{1} << (a - 1);
  }
  return rank(M, S);
}

struct BivariatePolynomial {
  // c[i][j] = coefficient of x^i y^j
  std::vector<std::vector<long long>> c;

  long long coef(int i, int j) const {
    if (i < 0 || i >= static_cast<int>(c.size())) return 0;
    const auto& row = c[static_cast<std::size_t>(i)];
    if (j < 0 || j >= static_cast<int>(row.size())) return 0;
    return row[static_cast<std::size_t>(j)];
  }

  // Nonzero terms (i, j, coefficient), lexicographic in (i, j).
  std::vector<std::array<long long, 3>> terms() const {
    std::vector<std::array<long long, 3>> out;
    for (int i = 0; i < static_cast<int>(c.size()); ++i)
      for (int j = 0; j < static_cast<int>(c[static_cast<std::size_t>(i)].size()); ++j)
        if (coef(i, j) != 0) out.push_back({i, j, coef(i, j)});
    return out;
  }

  long long evaluate(long long x, long long y) const {
    long long total = 0;
    for (const auto& t : terms()) {
      long long v = t[2];
      for (long long k = 0; k < t[0]; ++k) v *= x;
      for (long long k = 0; k < t[1]; ++k) v *= y;
      total += v;
    }
    return total;
  }

  bool operator==(const BivariatePolynomial& o) const { return terms() == o.terms(); }
  bool operator!=(const BivariatePolynomial& o) const { return !(*this == o); }

  std::string to_string() const {
    auto ts = terms();
    // total degree descending, then x-degree descending
    std::sort(ts.begin(), ts.end(), [](const auto& u, const auto& v) {
      if (u[0] + u[1] != v[0] + v[1]) return u[0] + u[1] > v[0] + v[1];
      return u[0] > v[0];
    });
    std::ostringstream os;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      long long i = ts[k][0], j = ts[k][1], coef = ts[k][2];
      if (k) os << (coef < 0 ? " - " : " + ");
      else if (coef < 0) os << "-";
      long long m = coef < 0 ? -coef : coef;
      if (m != 1 || (i == 0 && j == 0)) os << m;
      if (i >= 1) os << "x";
      if (i >= 2) os << "^" << i;
      if (j >= 1) os << "y";
      if (j >= 2) os << "^" << j;
    }
    if (ts.empty()) os << "0";
    return os.str();
  }
};

// Corank-nullity sum over all 2^n subsets. The rank of a subset needs one
// block lookup: a set of size >= 2 has rank 2 exactly when the block covering
// its two lowest atoms contains it.
inline BivariatePolynomial tutte(const TwoPartition& M) {
  const int n = M.n;
  std::vector<std::int16_t> pair_block(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), -1);
  for (std::size_t bi = 0; bi < M.blocks.size(); ++bi) {
    auto atoms = block_atoms(M.blocks[bi]);
    for (std::size_t u = 0; u < atoms.size(); ++u)
      for (std::size_t v = u + 1; v < atoms.size(); ++v) {
        pair_block[static_cast<std::size_t>(atoms[u]) * static_cast<std::size_t>(n) + static_cast<std::size_t>(atoms[v])] =
            static_cast<std::int16_t>(bi);
      }
  }
  std::vector<std::array<long long, 4>> count(static_cast<std::size_t>(n) + 1, {0, 0, 0, 0});  // [|S|][r(S)]
  const std::uint32_t lim = std::uint32_t{1} << n;
  for (std::uint32_t S = 0; S < lim; ++S) {
    int s = std::popcount(S);
    int r;
    if (s <= 1) {
      r = s;
    } else {
      int a = std::countr_zero(S);
      int b = std::countr_zero(S & (S - 1));
      Block blk = M.blocks[static_cast<std::size_t>(
          pair_block[static_cast<std::size_t>(a) * static_cast<std::size_t>(n) + static_cast<std::size_t>(b)])];
      r = (S & ~blk) == 0 ? 2 : 3;
    }
    ++count[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)];
  }
  BivariatePolynomial T;
  T.c.assign(4, std::vector<long long>(static_cast<std::size_t>(n) + 1, 0));
  for (int s = 0; s <= n; ++s)
    for (int r = 0; r <= 3; ++r) {
      long long N = count[static_cast<std::size_t>(s)][static_cast<std::size_t>(r)];
      if (N == 0) continue;
      int p = 3 - r, q = s - r;
      for (int i = 0; i <= p; ++i) {
        long long cx = detail::binom(p, i) * (((p - i) % 2) ? -1 : 1);
        for (int j = 0; j <= q; ++j) {
          long long cy = detail::binom(q, j) * (((q - j) % 2) ? -1 : 1);
          T.c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] += N * cx * cy;
        }
      }
    }
  return T;
}

// chi(t) = -T(1-t, 0) for a rank 3 matroid.
inline CharPoly char_poly_via_tutte(const TwoPartition& M) {
  BivariatePolynomial T = tutte(M);
  CharPoly chi{0, 0, 0, 0};
  for (int i = 0; i <= 3; ++i) {
    long long ci0 = T.coef(i, 0);
    if (ci0 == 0) continue;
    for (int k = 0; k <= i; ++k)
      chi[static_cast<std::size_t>(k)] -= ci0 * detail::binom(i, k) * ((k % 2) ? -1 : 1);
  }
  return chi;
}

// Deleting an atom can collapse the matroid to rank 2 (all remaining atoms on
// one block); the marker carries the atom count of that rank 2 matroid.
struct Rank2Marker {
  int n = 0;
};

using DeletionResult = std::variant<TwoPartition, Rank2Marker>;

inline DeletionResult deletion(const TwoPartition& M, int atom_one_based) {
  if (M.n < 4) throw std::invalid_argument("deletion needs an atom count of at least 4");
  if (atom_one_based < 1 || atom_one_based > M.n) throw std::out_of_range("atom outside 1..n");
  const int h = atom_one_based - 1;
  const Block low = (Block{1} << h) - 1;
  BlockList out;
  out.reserve(M.blocks.size());
  for (Block b : M.blocks) {
    Block keep = b & ~(Block{1} << h);
    Block shifted = (keep & low) | ((keep >> 1) & ~low);
    if (block_size(shifted) >= 2) out.push_back(shifted);
  }
  const Block full = (Block{1} << (M.n - 1)) - 1;
  for (Block b : out)
    if (b == full) return Rank2Marker{M.n - 1};
  return make_matroid_masks(M.n - 1, std::move(out));
}

struct ContractionSummary {
  int d = 0;  // number of blocks containing the atom; chi of the reduced contraction is (t-1)(t-(d-1))
};

inline ContractionSummary contraction_summary(const TwoPartition& M, int atom_one_based) {
  if (atom_one_based < 1 || atom_one_based > M.n) throw std::out_of_range("atom outside 1..n");
  const Block bit = Block{1} << (atom_one_based - 1);
  int d = 0;
  for (Block b : M.blocks)
    if (b & bit) ++d;
  return ContractionSummary{d};
}

struct Supersolvable {
  bool value = false;
  Block witness = 0;  // a block meeting every other block, when value is true
};

inline Supersolvable is_supersolvable(const TwoPartition& M) {
  for (Block f : M.blocks) {
    bool meets_all = true;
    for (Block g : M.blocks) {
      if (g != f && (f & g) == 0) {
        meets_all = false;
        break;
      }
    }
    if (!meets_all) continue;
    // Such a block forces the factorization chi = (t-1)(t-(|F|-1))(t-(n-|F|)).
    CharacteristicData d = characteristic_data(multiplicity_vector(M));
    const long long s = block_size(f);
    const long long lo = std::min(s - 1, M.n - s);
    const long long hi = std::max(s - 1, M.n - s);
    if (!d.splits || d.a != lo || d.b != hi)
      throw std::logic_error("block meets every other block but the root pair does not match");
    return Supersolvable{true, f};
  }
  return Supersolvable{false, 0};
}

inline bool is_divisionally_free(const TwoPartition& M) {
  if (M.n == 3) return true;
  CharacteristicData d = characteristic_data(multiplicity_vector(M));
  for (int h = 1; h <= M.n; ++h)
    if (d.q(contraction_summary(M, h).d - 1) == 0) return true;
  return false;
}

// Memo for the inductive-freeness recursion, keyed by (n, strict flag,
// canonical block list). Concurrent insert/lookup; values are deterministic,
// so a racing double computation is harmless.
class FreenessMemo {
 public:
  std::optional<bool> get(const std::tuple<int, bool, BlockList>& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::tuple<int, bool, BlockList>& key, bool value) {
    std::lock_guard<std::mutex> lock(mu_);
    map_[key] = value;
  }

  std::size_t size() const {
    std::lock_guard<std::mutex> lock(mu_);
    return map_.size();
  }

 private:
  mutable std::mutex mu_;
  std::map<std::tuple<int, bool, BlockList>, bool> map_;
};

// An atom H qualifies when chi of the reduced contraction at H divides chi,
// i.e. q(d_H - 1) = 0; the matroid is inductively free when some qualifying
// deletion chain reaches the 3-atom matroid or (in the default mode) collapses
// to rank 2. Strict mode does not accept rank 2 collapses.
inline bool is_inductively_free(const TwoPartition& M, FreenessMemo& memo, bool strict = false) {
  if (M.n == 3) return true;
  const auto key = std::make_tuple(M.n, strict, minimal_image(M.n, M.blocks));
  if (auto hit = memo.get(key)) return *hit;
  CharacteristicData d = characteristic_data(multiplicity_vector(M));
  bool result = false;
  for (int h = 1; h <= M.n && !result; ++h) {
    if (d.q(contraction_summary(M, h).d - 1) != 0) continue;
    DeletionResult del = deletion(M, h);
    if (std::holds_alternative<Rank2Marker>(del)) {
      if (!strict) result = true;
    } else {
      result = is_inductively_free(std::get<TwoPartition>(del), memo, strict);
    }
  }
  memo.put(key, result);
  return result;
}

inline bool is_inductively_free(const TwoPartition& M, bool strict = false) {
  FreenessMemo memo;
  return is_inductively_free(M, memo, strict);
}

struct Balancedness {
  bool atom_balanced = false;    // every atom lies on at most a blocks
  bool coatom_balanced = false;  // every block has fewer than a atoms
  bool strongly_balanced = false;
};

inline Balancedness balancedness(const TwoPartition& M) {
  CharacteristicData d = characteristic_data(multiplicity_vector(M));
  if (!d.splits)
    fail(errc::not_integrally_splitting, "characteristic polynomial has no integral split");
  int max_d = 0;
  for (int h = 1; h <= M.n; ++h) max_d = std::max(max_d, contraction_summary(M, h).d);
  int max_block = 0;
  for (Block b : M.blocks) max_block = std::max(max_block, block_size(b));
  Balancedness out;
  out.atom_balanced = max_d <= d.a;
  out.coatom_balanced = max_block < d.a;
  out.strongly_balanced = out.atom_balanced && out.coatom_balanced;
  return out;
}

}  // namespace matroid3
