#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "genuslab/rational.hpp"

namespace genuslab {

using Index = std::uint32_t;
using Entry = std::pair<Index, GaussianRational>;
/// Sparse vector: entries sorted by index, no explicit zeros.
using SparseVector = std::vector<Entry>;

/// Sorts by index, sums repeated indices and drops zeros. Consumes `raw`.
SparseVector collect(std::vector<Entry>& raw);

SparseVector add_scaled(const SparseVector& a, const SparseVector& b, const GaussianRational& factor);

/// Column-major sparse matrix over Q(i).
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static SparseMatrix identity(std::size_t n);
  /// Builds column j from `column(j)`; the callback may emit repeated rows, which are summed.
  static SparseMatrix from_columns(std::size_t rows, std::size_t cols,
                                   const std::function<void(Index, std::vector<Entry>&)>& column);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }
  const SparseVector& column(std::size_t j) const { return columns_[j]; }
  std::size_t nonzeros() const;
  GaussianRational at(Index row, Index col) const;

  bool is_zero() const;
  SparseMatrix adjoint() const;  // conjugate transpose
  SparseVector apply(const SparseVector& v) const;

  SparseMatrix& operator+=(const SparseMatrix& other);
  SparseMatrix& operator-=(const SparseMatrix& other);
  SparseMatrix scaled(const GaussianRational& factor) const;

  friend SparseMatrix operator+(SparseMatrix a, const SparseMatrix& b) { return a += b; }
  friend SparseMatrix operator-(SparseMatrix a, const SparseMatrix& b) { return a -= b; }
  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b);
  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

  /// Equality restricted to the block rows x cols selected by the masks.
  bool equal_on(const SparseMatrix& other, const std::vector<bool>& row_mask, const std::vector<bool>& col_mask) const;

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVector> columns_;
};

/// Groups the given columns into classes that share no row (connected
/// components of the bipartite row/column incidence graph).
std::vector<std::vector<Index>> column_components(const SparseMatrix& m, std::span<const Index> columns);

/// Exact null-space basis of m restricted to `columns` (all columns when empty),
/// by Gauss-Jordan elimination over Q(i) on each independent block.
std::vector<SparseVector> null_space(const SparseMatrix& m, std::span<const Index> columns = {});
std::vector<SparseVector> null_space(const SparseMatrix& m, const std::vector<Index>& columns);

/// Rank of the matrix whose columns are `vectors` (all of length `rows`).
std::size_t rank_of(std::size_t rows, const std::vector<SparseVector>& vectors);

/// Sylvester test on a Hermitian matrix: elimination without pivoting on each
/// independent block must produce only real positive pivots.
bool is_positive_definite(const SparseMatrix& hermitian);

}  // namespace genuslab
