#pragma once

// Exact sparse Gaussian elimination over Scalar.
//
// Rows are inserted one at a time and kept in echelon form with unit leading
// coefficients. Reduction uses a dense scatter/gather accumulator, so inserting a
// row costs time proportional to the fill it touches, not to the column count.

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "halfder/scalars.hpp"

namespace halfder {

/// (column, value) pairs sorted by column; no stored zeros.
using SparseVec = std::vector<std::pair<int, Scalar>>;

/// Drops zeros and merges duplicate columns.
void normalize(SparseVec& v);

class Eliminator {
 public:
  explicit Eliminator(int ncols);

  int ncols() const { return ncols_; }
  int rank() const { return static_cast<int>(rows_.size()); }
  bool full_rank() const { return rank() == ncols_; }

  /// Inserts a row; returns true when it was independent of the rows so far.
  bool add_row(const SparseVec& row);
  bool in_span(const SparseVec& v) const;

  /// Fully reduced row echelon form, sorted by pivot column.
  std::vector<SparseVec> rref() const;
  /// Basis of {x : A x = 0} in reduced row echelon form (deterministic).
  std::vector<SparseVec> kernel() const;
  /// Pivot column of each stored row, in insertion order.
  std::vector<int> pivots() const;

 private:
  // Reduces v against the stored rows until its leading column has no pivot.
  SparseVec reduce(const SparseVec& v) const;

  int ncols_;
  std::vector<SparseVec> rows_;
  std::vector<int> pivot_row_;  // column -> row index or -1

  mutable std::vector<Scalar> acc_;
  mutable std::vector<char> touched_;
};

/// Rank of a set of vectors with the given column count.
int rank_of(const std::vector<SparseVec>& vectors, int ncols);

/// Canonical RREF basis of the span of `vectors`.
std::vector<SparseVec> row_space_basis(const std::vector<SparseVec>& vectors, int ncols);

}  // namespace halfder
