#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qk/rational.hpp"

namespace qk {

/// Sparse row/column vector: sorted (index, coefficient) pairs, no zeros.
struct SparseVec {
  std::vector<std::pair<int, Rational>> ent;

  bool operator==(const SparseVec& o) const { return ent == o.ent; }
  bool empty() const { return ent.empty(); }
  void push(int i, Rational c) {
    if (c != 0) ent.emplace_back(i, std::move(c));
  }
  void sort_and_combine();
};

/// Sparse rational matrix, stored by rows. Indices are 0-based.
struct SparseMatrix {
  int nrows = 0;
  int ncols = 0;
  std::vector<SparseVec> rows;

  SparseMatrix() = default;
  SparseMatrix(int r, int c) : nrows(r), ncols(c), rows(r) {}

  void add(int r, int c, const Rational& v);
  void finalize(); // sort rows, drop explicit zeros
  SparseMatrix transposed() const;
  size_t nnz() const;
};

/// Subspace of Q^ambient given by a reduced row-echelon basis with distinct
/// pivots (canonical).
struct Subspace {
  int ambient = 0;
  std::vector<SparseVec> basis; // RREF rows, sorted by pivot column
  std::vector<int> pivots;      // pivot column of each basis row

  int dim() const { return static_cast<int>(basis.size()); }
  /// Remainder of v after reduction by the basis (exact).
  SparseVec reduce(SparseVec v) const;
  bool contains(SparseVec v) const { return reduce(std::move(v)).empty(); }
};

/// Incremental echelon form over Z/p for fast rank queries. Vectors are
/// added one at a time; the structure can be copied cheaply enough to probe
/// "what if" extensions.
class ZpEchelon {
 public:
  ZpEchelon(uint64_t p, int ncols);

  uint64_t prime() const { return p_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  int ncols() const { return ncols_; }

  /// Reduces v against the current rows; if a remainder is left, inserts it
  /// and returns true.
  bool add(const SparseVec& v);
  bool add(const std::vector<std::pair<int, uint64_t>>& v);
  /// Reduction only: returns true iff v lies in the current row span.
  bool contains(const SparseVec& v) const;

 private:
  struct Row {
    std::vector<std::pair<int, uint64_t>> e; // sorted, leading entry = 1
  };
  bool reduce_into_buffer(const std::vector<std::pair<int, uint64_t>>& v,
                          bool insert);
  bool reduce_into_buffer_const(
      const std::vector<std::pair<int, uint64_t>>& v) const;

  uint64_t p_;
  int ncols_;
  std::vector<Row> rows_;
  std::vector<int> pivot_of_col_;
  mutable std::vector<uint64_t> buf_;
  mutable std::vector<int> touched_;
};

/// Deterministic stream of distinct random word-size primes (> 2^30).
std::vector<uint64_t> random_primes(int count, uint64_t seed = 0x5eed5eed);

std::vector<std::pair<int, uint64_t>> reduce_vec_mod(const SparseVec& v,
                                                     uint64_t p);

/// Exact rank over Q.
int rank_exact(const SparseMatrix& m);
/// Rank via elimination modulo `nprimes` random primes with agreement
/// certification. Throws on disagreement (which signals a bug: the primes
/// are fresh and independent).
int rank(const SparseMatrix& m, int nprimes = 3, uint64_t seed = 0x5eed5eed);

/// Canonical reduced row-echelon basis of the row space (exact).
Subspace row_space(const SparseMatrix& m);
/// Canonical basis of {x : m x = 0} derived from the RREF (exact).
Subspace nullspace(const SparseMatrix& m);
/// Echelon-canonical solution of m x = b (free variables 0), or nullopt.
std::optional<std::vector<Rational>> solve(const SparseMatrix& m,
                                           const std::vector<Rational>& b);
/// Multi-RHS variant: solves m X = B columnwise; nullopt if any column has
/// no solution (its index is reported via *bad_col when given).
std::optional<std::vector<SparseVec>> solve_many(
    const SparseMatrix& m, const std::vector<SparseVec>& b_cols,
    int* bad_col = nullptr);

/// Rank of base rows together with extra vectors (modular, certified).
int grow_rank(const SparseMatrix& base, const std::vector<SparseVec>& extra,
              int nprimes = 3, uint64_t seed = 0x5eed5eed);
/// Exact variant against a canonical subspace.
int grow_rank(const Subspace& base, const std::vector<SparseVec>& extra);

/// RREF of arbitrary vectors (exact); `rightmost_pivots` runs the
/// elimination with the column order reversed, so pivots are chosen
/// rightmost-first (used for canonical homology representatives).
Subspace rref(std::vector<SparseVec> vecs, int ambient,
              bool rightmost_pivots = false);

/// SMS-style triplet text: "nrows ncols 'M'" header, 1-based "row col value"
/// lines, terminated by "0 0 0".
void write_sms(std::ostream& os, const SparseMatrix& m);
SparseMatrix read_sms(std::istream& is);

} // namespace qk
