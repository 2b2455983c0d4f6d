#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <vector>

#include "gf.hpp"
#include "two_partition.hpp"

namespace matroid3 {

// A matrix over GF(q), one column of three field elements per atom.
using GfMatrix = std::vector<std::array<int, 3>>;

enum class EntryKind : std::uint8_t { zero, one, var };

struct PatternEntry {
  EntryKind kind = EntryKind::zero;
  int var = -1;
};

// The projective normal form of a representation search: basis columns are
// the identity, entries outside a column's fundamental circuit are zero, and
// row/column rescalings are spent pinning a maximal independent set of the
// remaining entries to one. Free entries range over nonzero field values
// only, since a circuit coefficient of zero would shrink the circuit.
struct RepresentationProblem {
  int n = 0;
  std::array<int, 3> basis{};                     // 0-based atoms, ascending
  std::vector<std::array<PatternEntry, 3>> cols;  // cols[atom][row]
  int var_count = 0;
  std::vector<std::array<int, 3>> dependent;      // 0-based collinear triples
};

namespace detail {

// pair_block[i*n+j] = mask of the unique block through atoms i and j.
inline std::vector<Block> pair_block_table(const TwoPartition& M) {
  std::vector<Block> table(static_cast<std::size_t>(M.n) * static_cast<std::size_t>(M.n), 0);
  for (Block b : M.blocks) {
    auto atoms = block_atoms(b);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        table[static_cast<std::size_t>(atoms[i] * M.n + atoms[j])] = b;
        table[static_cast<std::size_t>(atoms[j] * M.n + atoms[i])] = b;
      }
  }
  return table;
}

inline bool triple_dependent(const std::vector<Block>& table, int n, int a, int b, int c) {
  return (table[static_cast<std::size_t>(a * n + b)] & (Block{1} << c)) != 0;
}

}  // namespace detail

inline std::array<int, 3> lex_first_basis(const TwoPartition& M) {
  auto table = detail::pair_block_table(M);
  for (int a = 0; a < M.n; ++a)
    for (int b = a + 1; b < M.n; ++b)
      for (int c = b + 1; c < M.n; ++c)
        if (!detail::triple_dependent(table, M.n, a, b, c)) return {a, b, c};
  fail(errc::not_a_basis, "no independent triple exists");
}

inline RepresentationProblem projective_pattern(const TwoPartition& M, std::array<int, 3> basis) {
  std::sort(basis.begin(), basis.end());
  if (basis[0] < 0 || basis[2] >= M.n || basis[0] == basis[1] || basis[1] == basis[2])
    fail(errc::not_a_basis, "basis atoms must be three distinct atoms");
  auto table = detail::pair_block_table(M);
  if (detail::triple_dependent(table, M.n, basis[0], basis[1], basis[2]))
    fail(errc::not_a_basis, "the chosen triple is collinear");

  RepresentationProblem prob;
  prob.n = M.n;
  prob.basis = basis;
  prob.cols.assign(static_cast<std::size_t>(M.n), {});

  std::array<int, 20> row_of{};
  row_of.fill(-1);
  for (int r = 0; r < 3; ++r) row_of[static_cast<std::size_t>(basis[r])] = r;

  for (int k = 0; k < M.n; ++k) {
    auto& col = prob.cols[static_cast<std::size_t>(k)];
    if (row_of[static_cast<std::size_t>(k)] >= 0) {
      col[static_cast<std::size_t>(row_of[static_cast<std::size_t>(k)])] = {EntryKind::one, -1};
      continue;
    }
    // Fundamental circuit of k: either {k, b_i, b_j} when k is collinear with
    // a basis pair (there is at most one such pair, since two lines through k
    // meet only at k), or all of B otherwise.
    int zero_row = -1;
    for (int r = 0; r < 3 && zero_row < 0; ++r) {
      int bi = basis[static_cast<std::size_t>((r + 1) % 3)];
      int bj = basis[static_cast<std::size_t>((r + 2) % 3)];
      if (detail::triple_dependent(table, M.n, bi, bj, k)) zero_row = r;
    }
    for (int r = 0; r < 3; ++r)
      if (r != zero_row) col[static_cast<std::size_t>(r)] = {EntryKind::var, -1};
  }

  // Pin entries to one while each pin spends a fresh rescaling. Row and
  // column scalars form the vertices of a graph whose edges are the pinned
  // entries; a pin is fresh exactly when it joins two components. The
  // identity columns seed the components, and the column-major scan then
  // realizes the first nonzero of every column and of every row as a one.
  std::vector<int> parent(static_cast<std::size_t>(3 + M.n));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  for (int r = 0; r < 3; ++r) parent[static_cast<std::size_t>(find(r))] = find(3 + basis[static_cast<std::size_t>(r)]);
  for (int k = 0; k < M.n; ++k)
    for (int r = 0; r < 3; ++r) {
      auto& entry = prob.cols[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
      if (entry.kind != EntryKind::var) continue;
      int a = find(r), b = find(3 + k);
      if (a != b) {
        parent[static_cast<std::size_t>(a)] = b;
        entry.kind = EntryKind::one;
      } else {
        entry.var = prob.var_count++;
      }
    }

  for (Block b : M.blocks) {
    auto atoms = block_atoms(b);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      for (std::size_t j = i + 1; j < atoms.size(); ++j)
        for (std::size_t l = j + 1; l < atoms.size(); ++l)
          prob.dependent.push_back({atoms[i], atoms[j], atoms[l]});
  }
  return prob;
}

inline RepresentationProblem projective_pattern(const TwoPartition& M) {
  return projective_pattern(M, lex_first_basis(M));
}

struct RepresentationResult {
  FieldSpec field;
  bool found = false;
  GfMatrix matrix;  // empty unless found
};

namespace detail {

inline int det3(const Field& f, const std::array<int, 3>& a, const std::array<int, 3>& b,
                const std::array<int, 3>& c) {
  int m0 = f.sub(f.mul(b[1], c[2]), f.mul(b[2], c[1]));
  int m1 = f.sub(f.mul(b[0], c[2]), f.mul(b[2], c[0]));
  int m2 = f.sub(f.mul(b[0], c[1]), f.mul(b[1], c[0]));
  return f.sub(f.add(f.mul(a[0], m0), f.mul(a[2], m2)), f.mul(a[1], m1));
}

struct ColumnStep {
  int atom = 0;
  std::vector<int> var_rows;                 // rows still free, ascending
  std::vector<std::array<int, 3>> checks;    // earlier step a, earlier step b, dependent flag
};

}  // namespace detail

inline RepresentationResult find_representation(const TwoPartition& M, const FieldSpec& field,
                                                std::array<int, 3> basis) {
  const Field& f = cached_field(field.q());
  RepresentationProblem prob = projective_pattern(M, basis);
  auto table = detail::pair_block_table(M);

  // Place basis columns first, then repeatedly the atom with the most
  // collinearity constraints against already-placed atoms; every placement
  // checks each triple it completes, so dense columns prune earliest.
  std::vector<int> order(prob.basis.begin(), prob.basis.end());
  std::vector<char> placed(static_cast<std::size_t>(M.n), 0);
  for (int b : prob.basis) placed[static_cast<std::size_t>(b)] = 1;
  while (static_cast<int>(order.size()) < M.n) {
    int best = -1, best_count = -1;
    for (int k = 0; k < M.n; ++k) {
      if (placed[static_cast<std::size_t>(k)]) continue;
      int count = 0;
      for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
          if (detail::triple_dependent(table, M.n, order[i], order[j], k)) ++count;
      if (count > best_count) {
        best_count = count;
        best = k;
      }
    }
    order.push_back(best);
    placed[static_cast<std::size_t>(best)] = 1;
  }

  std::vector<detail::ColumnStep> steps(static_cast<std::size_t>(M.n));
  for (int t = 0; t < M.n; ++t) {
    auto& step = steps[static_cast<std::size_t>(t)];
    step.atom = order[static_cast<std::size_t>(t)];
    for (int r = 0; r < 3; ++r)
      if (prob.cols[static_cast<std::size_t>(step.atom)][static_cast<std::size_t>(r)].kind == EntryKind::var)
        step.var_rows.push_back(r);
    for (int i = 0; i < t; ++i)
      for (int j = i + 1; j < t; ++j) {
        int dep = detail::triple_dependent(table, M.n, order[static_cast<std::size_t>(i)],
                                           order[static_cast<std::size_t>(j)], step.atom);
        step.checks.push_back({i, j, dep});
      }
  }

  std::vector<std::array<int, 3>> cols(static_cast<std::size_t>(M.n), {0, 0, 0});
  auto consistent = [&](int t) {
    const auto& step = steps[static_cast<std::size_t>(t)];
    for (const auto& chk : step.checks) {
      int d = detail::det3(f, cols[static_cast<std::size_t>(chk[0])], cols[static_cast<std::size_t>(chk[1])],
                           cols[static_cast<std::size_t>(t)]);
      if ((d == 0) != (chk[2] != 0)) return false;
    }
    return true;
  };

  auto search = [&](auto&& self, int t) -> bool {
    if (t == M.n) return true;
    const auto& step = steps[static_cast<std::size_t>(t)];
    auto& col = cols[static_cast<std::size_t>(t)];
    for (int r = 0; r < 3; ++r) {
      EntryKind kind = prob.cols[static_cast<std::size_t>(step.atom)][static_cast<std::size_t>(r)].kind;
      col[static_cast<std::size_t>(r)] = kind == EntryKind::one ? 1 : 0;
    }
    if (step.var_rows.empty()) return consistent(t) && self(self, t + 1);
    int v0 = step.var_rows[0];
    int v1 = step.var_rows.size() > 1 ? step.var_rows[1] : -1;
    for (int x = 1; x < f.q(); ++x) {
      col[static_cast<std::size_t>(v0)] = x;
      if (v1 < 0) {
        if (consistent(t) && self(self, t + 1)) return true;
        continue;
      }
      for (int y = 1; y < f.q(); ++y) {
        col[static_cast<std::size_t>(v1)] = y;
        if (consistent(t) && self(self, t + 1)) return true;
      }
      col[static_cast<std::size_t>(v1)] = 0;
    }
    return false;
  };

  RepresentationResult result{field, false, {}};
  if (search(search, 0)) {
    result.found = true;
    result.matrix.assign(static_cast<std::size_t>(M.n), {0, 0, 0});
    for (int t = 0; t < M.n; ++t)
      result.matrix[static_cast<std::size_t>(order[static_cast<std::size_t>(t)])] = cols[static_cast<std::size_t>(t)];
  }
  return result;
}

inline RepresentationResult find_representation(const TwoPartition& M, const FieldSpec& field) {
  return find_representation(M, field, lex_first_basis(M));
}

// True exactly when collinear triples of M have singular columns and all
// other triples are nonsingular. An exhaustive check over all atom triples.
inline bool check_representation(const TwoPartition& M, const GfMatrix& A, const FieldSpec& field) {
  if (static_cast<int>(A.size()) != M.n)
    fail(errc::dimension_mismatch, "matrix has " + std::to_string(A.size()) + " columns for " +
                                       std::to_string(M.n) + " atoms");
  const Field& f = cached_field(field.q());
  for (const auto& col : A)
    for (int v : col)
      if (v < 0 || v >= f.q()) fail(errc::dimension_mismatch, "matrix entry outside the field");
  auto table = detail::pair_block_table(M);
  for (int a = 0; a < M.n; ++a)
    for (int b = a + 1; b < M.n; ++b)
      for (int c = b + 1; c < M.n; ++c) {
        int d = detail::det3(f, A[static_cast<std::size_t>(a)], A[static_cast<std::size_t>(b)],
                             A[static_cast<std::size_t>(c)]);
        if ((d == 0) != detail::triple_dependent(table, M.n, a, b, c)) return false;
      }
  return true;
}

// A per-field verdict list. "None" for a field is conclusive for that field;
// failing the whole battery says nothing about fields outside it.
struct RepresentabilitySummary {
  std::vector<RepresentationResult> per_field;
  bool representable_over_battery = false;
};

inline RepresentabilitySummary representability_summary(const TwoPartition& M,
                                                        const std::vector<FieldSpec>& battery) {
  RepresentabilitySummary summary;
  for (const FieldSpec& spec : battery) {
    summary.per_field.push_back(find_representation(M, spec));
    if (summary.per_field.back().found) summary.representable_over_battery = true;
  }
  return summary;
}

inline RepresentabilitySummary representability_summary(const TwoPartition& M) {
  return representability_summary(M, default_battery());
}

}  // namespace matroid3
