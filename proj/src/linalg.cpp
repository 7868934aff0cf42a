#include "genuslab/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "genuslab/error.hpp"

namespace genuslab {

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

SparseVector normalize_entries(std::vector<Entry>& raw) {
  std::sort(raw.begin(), raw.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
  SparseVector out;
  for (auto& e : raw) {
    if (!out.empty() && out.back().first == e.first) {
      out.back().second += e.second;
    } else {
      out.push_back(std::move(e));
    }
  }
  std::erase_if(out, [](const Entry& e) { return e.second.is_zero(); });
  return out;
}

const GaussianRational* find_entry(const SparseVector& v, Index idx) {
  auto it = std::lower_bound(v.begin(), v.end(), idx, [](const Entry& e, Index i) { return e.first < i; });
  return (it != v.end() && it->first == idx) ? &it->second : nullptr;
}

/// Incremental Gauss-Jordan over local column indices. Pivot rows are kept
/// fully reduced with a unit leading entry.
class Eliminator {
 public:
  /// Returns true if the row was independent of the current pivots.
  bool add_row(SparseVector row) {
    for (std::size_t p = 0; p < pivot_rows_.size(); ++p) {
      const GaussianRational* f = find_entry(row, pivot_cols_[p]);
      if (f == nullptr) continue;
      GaussianRational factor = -*f;
      row = add_scaled(row, pivot_rows_[p], factor);
    }
    if (row.empty()) return false;
    GaussianRational inv = GaussianRational(1) / row.front().second;
    for (auto& e : row) e.second *= inv;
    Index lead = row.front().first;
    for (auto& prow : pivot_rows_) {
      const GaussianRational* f = find_entry(prow, lead);
      if (f == nullptr) continue;
      GaussianRational factor = -*f;
      prow = add_scaled(prow, row, factor);
    }
    pivot_cols_.push_back(lead);
    pivot_rows_.push_back(std::move(row));
    return true;
  }

  std::size_t rank() const { return pivot_rows_.size(); }
  const std::vector<Index>& pivot_cols() const { return pivot_cols_; }
  const std::vector<SparseVector>& pivot_rows() const { return pivot_rows_; }

 private:
  std::vector<Index> pivot_cols_;
  std::vector<SparseVector> pivot_rows_;
};

}  // namespace

SparseVector collect(std::vector<Entry>& raw) { return normalize_entries(raw); }

SparseVector add_scaled(const SparseVector& a, const SparseVector& b, const GaussianRational& factor) {
  SparseVector out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.emplace_back(b[j].first, b[j].second * factor);
      ++j;
    } else {
      GaussianRational v = a[i].second + b[j].second * factor;
      if (!v.is_zero()) out.emplace_back(a[i].first, std::move(v));
      ++i;
      ++j;
    }
  }
  return out;
}

SparseMatrix SparseMatrix::identity(std::size_t n) {
  SparseMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) m.columns_[j].emplace_back(static_cast<Index>(j), GaussianRational(1));
  return m;
}

SparseMatrix SparseMatrix::from_columns(std::size_t rows, std::size_t cols,
                                        const std::function<void(Index, std::vector<Entry>&)>& column) {
  SparseMatrix m(rows, cols);
  std::vector<Entry> raw;
  for (std::size_t j = 0; j < cols; ++j) {
    raw.clear();
    column(static_cast<Index>(j), raw);
    m.columns_[j] = normalize_entries(raw);
  }
  return m;
}

std::size_t SparseMatrix::nonzeros() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += c.size();
  return n;
}

GaussianRational SparseMatrix::at(Index row, Index col) const {
  const GaussianRational* e = find_entry(columns_.at(col), row);
  return e ? *e : GaussianRational();
}

bool SparseMatrix::is_zero() const {
  return std::all_of(columns_.begin(), columns_.end(), [](const SparseVector& c) { return c.empty(); });
}

SparseMatrix SparseMatrix::adjoint() const {
  SparseMatrix t(cols(), rows_);
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const auto& [i, v] : columns_[j]) t.columns_[i].emplace_back(static_cast<Index>(j), v.conj());
  }
  return t;
}

SparseVector SparseMatrix::apply(const SparseVector& v) const {
  std::vector<Entry> raw;
  for (const auto& [j, x] : v) {
    for (const auto& [i, a] : columns_.at(j)) raw.emplace_back(i, a * x);
  }
  return normalize_entries(raw);
}

SparseMatrix& SparseMatrix::operator+=(const SparseMatrix& other) {
  if (rows_ != other.rows_ || cols() != other.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix sum of incompatible shapes");
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (!other.columns_[j].empty()) columns_[j] = add_scaled(columns_[j], other.columns_[j], GaussianRational(1));
  }
  return *this;
}

SparseMatrix& SparseMatrix::operator-=(const SparseMatrix& other) {
  if (rows_ != other.rows_ || cols() != other.cols()) {
    throw Error(ErrorCode::DimensionMismatch, "matrix difference of incompatible shapes");
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (!other.columns_[j].empty()) columns_[j] = add_scaled(columns_[j], other.columns_[j], GaussianRational(-1));
  }
  return *this;
}

SparseMatrix SparseMatrix::scaled(const GaussianRational& factor) const {
  if (factor.is_zero()) return SparseMatrix(rows_, cols());
  SparseMatrix m = *this;
  for (auto& c : m.columns_) {
    for (auto& e : c) e.second *= factor;
  }
  return m;
}

SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product of incompatible shapes");
  SparseMatrix m(a.rows(), b.cols());
  std::vector<Entry> raw;
  for (std::size_t j = 0; j < b.cols(); ++j) {
    raw.clear();
    for (const auto& [k, bkj] : b.columns_[j]) {
      for (const auto& [i, aik] : a.columns_[k]) raw.emplace_back(i, aik * bkj);
    }
    m.columns_[j] = normalize_entries(raw);
  }
  return m;
}

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows_ == b.rows_ && a.columns_ == b.columns_;
}

bool SparseMatrix::equal_on(const SparseMatrix& other, const std::vector<bool>& row_mask,
                            const std::vector<bool>& col_mask) const {
  if (rows_ != other.rows_ || cols() != other.cols()) return false;
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (!col_mask[j]) continue;
    SparseVector d = add_scaled(columns_[j], other.columns_[j], GaussianRational(-1));
    for (const auto& [i, v] : d) {
      if (row_mask[i]) return false;
    }
  }
  return true;
}

std::vector<std::vector<Index>> column_components(const SparseMatrix& m, std::span<const Index> columns) {
  UnionFind uf(columns.size());
  std::map<Index, std::size_t> first_owner;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    for (const auto& [row, v] : m.column(columns[c])) {
      auto [it, inserted] = first_owner.emplace(row, c);
      if (!inserted) uf.unite(it->second, c);
    }
  }
  std::map<std::size_t, std::vector<Index>> groups;
  for (std::size_t c = 0; c < columns.size(); ++c) groups[uf.find(c)].push_back(columns[c]);
  std::vector<std::vector<Index>> out;
  out.reserve(groups.size());
  for (auto& [root, cols] : groups) out.push_back(std::move(cols));
  return out;
}

std::vector<SparseVector> null_space(const SparseMatrix& m, const std::vector<Index>& columns) {
  return null_space(m, std::span<const Index>(columns));
}

std::vector<SparseVector> null_space(const SparseMatrix& m, std::span<const Index> columns) {
  std::vector<Index> all;
  if (columns.empty()) {
    all.resize(m.cols());
    std::iota(all.begin(), all.end(), 0);
    columns = all;
  }
  std::vector<SparseVector> basis;
  for (const auto& component : column_components(m, columns)) {
    // Rows of the block, expressed on local column indices.
    std::map<Index, std::vector<Entry>> rows;
    for (std::size_t local = 0; local < component.size(); ++local) {
      for (const auto& [row, v] : m.column(component[local])) rows[row].emplace_back(static_cast<Index>(local), v);
    }
    Eliminator elim;
    for (auto& [row, entries] : rows) elim.add_row(std::move(entries));
    std::vector<bool> is_pivot(component.size(), false);
    for (Index p : elim.pivot_cols()) is_pivot[p] = true;
    for (std::size_t f = 0; f < component.size(); ++f) {
      if (is_pivot[f]) continue;
      std::vector<Entry> raw;
      raw.emplace_back(component[f], GaussianRational(1));
      for (std::size_t p = 0; p < elim.rank(); ++p) {
        const GaussianRational* e = find_entry(elim.pivot_rows()[p], static_cast<Index>(f));
        if (e != nullptr) raw.emplace_back(component[elim.pivot_cols()[p]], -*e);
      }
      basis.push_back(normalize_entries(raw));
    }
  }
  return basis;
}

std::size_t rank_of(std::size_t rows, const std::vector<SparseVector>& vectors) {
  SparseMatrix m = SparseMatrix::from_columns(rows, vectors.size(), [&](Index j, std::vector<Entry>& out) {
    out.insert(out.end(), vectors[j].begin(), vectors[j].end());
  });
  std::vector<Index> cols(vectors.size());
  std::iota(cols.begin(), cols.end(), 0);
  std::size_t rank = 0;
  for (const auto& component : column_components(m, cols)) {
    Eliminator elim;
    // Row rank of the transpose: feed each column as a row.
    for (Index c : component) elim.add_row(m.column(c));
    rank += elim.rank();
  }
  return rank;
}

bool is_positive_definite(const SparseMatrix& hermitian) {
  if (hermitian.rows() != hermitian.cols()) return false;
  if (!(hermitian.adjoint() == hermitian)) return false;
  std::vector<Index> cols(hermitian.cols());
  std::iota(cols.begin(), cols.end(), 0);
  for (const auto& component : column_components(hermitian, cols)) {
    const std::size_t n = component.size();
    std::map<Index, std::size_t> local;
    for (std::size_t k = 0; k < n; ++k) local[component[k]] = k;
    std::vector<std::vector<GaussianRational>> a(n, std::vector<GaussianRational>(n));
    for (std::size_t k = 0; k < n; ++k) {
      for (const auto& [row, v] : hermitian.column(component[k])) a[local.at(row)][k] = v;
    }
    for (std::size_t k = 0; k < n; ++k) {
      const GaussianRational pivot = a[k][k];
      if (sgn(pivot.imag()) != 0 || sgn(pivot.real()) <= 0) return false;
      for (std::size_t i = k + 1; i < n; ++i) {
        if (a[i][k].is_zero()) continue;
        GaussianRational f = a[i][k] / pivot;
        for (std::size_t j = k; j < n; ++j) {
          if (!a[k][j].is_zero()) a[i][j] -= f * a[k][j];
        }
      }
    }
  }
  return true;
}

}  // namespace genuslab
