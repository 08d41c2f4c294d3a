#pragma once

// Exact rational linear algebra: vectors, dense matrices, and subspaces held
// in canonical reduced-row-echelon form.

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "flathom/error.hpp"

namespace flathom {

using Scalar = mpq_class;
using Vector = std::vector<Scalar>;

// Accepts "n" or "n/d" with optional leading sign; returns the reduced value.
inline Scalar parse_scalar(std::string_view text) {
  auto is_int = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view{} : text.substr(slash + 1);
  if (!is_int(num) || (slash != std::string_view::npos && (!is_int(den) || den.front() == '-' || den.front() == '+'))) {
    throw ParseError("not a rational number: '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  Scalar q;
  q.get_num() = mpz_class(n, 10);
  q.get_den() = slash == std::string_view::npos ? mpz_class(1) : mpz_class(std::string(den), 10);
  if (q.get_den() == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  q.canonicalize();
  return q;
}

inline std::string to_string(const Scalar& q) { return q.get_str(10); }

inline Vector zero_vector(std::size_t n) { return Vector(n, Scalar(0)); }

inline Vector unit_vector(std::size_t n, std::size_t i) {
  Vector e = zero_vector(n);
  e.at(i) = 1;
  return e;
}

inline bool is_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return sgn(x) == 0; });
}

inline Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  require_dim(a.size() == b.size(), "dot: length mismatch");
  Scalar s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vector operator+(const Vector& a, const Vector& b) {
  require_dim(a.size() == b.size(), "vector +: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vector operator-(const Vector& a, const Vector& b) {
  require_dim(a.size() == b.size(), "vector -: length mismatch");
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vector operator-(const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

inline Vector operator*(const Scalar& c, const Vector& a) {
  Vector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

/// Dense row-major matrix over the rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Scalar(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static Matrix zero(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }

  static Matrix diagonal(std::span<const Scalar> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  // Every row must have length `cols`; `cols` is needed so that a 0-row
  // matrix still knows its width.
  static Matrix from_rows(std::span<const Vector> rows, std::size_t cols) {
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      require_dim(rows[i].size() == cols, "Matrix::from_rows: ragged rows");
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
      require_dim(row.size() == c, "Matrix::from_rows: ragged rows");
      std::size_t j = 0;
      for (long x : row) m(i, j++) = x;
      ++i;
    }
    return m;
  }

  static Matrix from_columns(std::span<const Vector> cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      require_dim(cols[j].size() == rows, "Matrix::from_columns: ragged columns");
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Scalar> row_span(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  Vector row(std::size_t i) const {
    auto r = row_span(i);
    return Vector(r.begin(), r.end());
  }
  Vector column(std::size_t j) const {
    Vector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  std::vector<Vector> row_vectors() const {
    std::vector<Vector> out;
    out.reserve(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out.push_back(row(i));
    return out;
  }
  std::vector<Vector> column_vectors() const {
    std::vector<Vector> out;
    out.reserve(cols_);
    for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
    return out;
  }

  const std::vector<Scalar>& entries() const { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // Rows [r0, r0+nr) and columns [c0, c0+nc).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    require_dim(r0 + nr <= rows_ && c0 + nc <= cols_, "Matrix::block: out of range");
    Matrix b(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
  }

  bool is_zero() const { return flathom::is_zero(data_); }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
  }

  bool is_skew() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i; j < cols_; ++j)
        if ((*this)(i, j) != -(*this)(j, i)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    require_dim(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix +: shape mismatch");
    Matrix r(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] + b.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    require_dim(a.rows_ == b.rows_ && a.cols_ == b.cols_, "Matrix -: shape mismatch");
    Matrix r(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = a.data_[k] - b.data_[k];
    return r;
  }

  friend Matrix operator-(const Matrix& a) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = -a.data_[k];
    return r;
  }

  friend Matrix operator*(const Scalar& c, const Matrix& a) {
    Matrix r(a.rows_, a.cols_);
    for (std::size_t k = 0; k < a.data_.size(); ++k) r.data_[k] = c * a.data_[k];
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    require_dim(a.cols_ == b.rows_, "Matrix *: inner dimension mismatch");
    Matrix r(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar& aik = a(i, k);
        if (sgn(aik) == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) {
          if (sgn(b(k, j)) != 0) r(i, j) += aik * b(k, j);
        }
      }
    }
    return r;
  }

  friend Vector operator*(const Matrix& a, const Vector& x) {
    require_dim(a.cols_ == x.size(), "Matrix * vector: length mismatch");
    Vector r(a.rows_, Scalar(0));
    for (std::size_t i = 0; i < a.rows_; ++i) {
      for (std::size_t j = 0; j < a.cols_; ++j) {
        if (sgn(a(i, j)) != 0 && sgn(x[j]) != 0) r[i] += a(i, j) * x[j];
      }
    }
    return r;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

inline std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << '[';
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << m(i, j);
    os << "]\n";
  }
  return os;
}

// Stacks `top` over `bottom` (same column count).
inline Matrix vstack(const Matrix& top, const Matrix& bottom) {
  require_dim(top.cols() == bottom.cols(), "vstack: column mismatch");
  Matrix m(top.rows() + bottom.rows(), top.cols());
  for (std::size_t i = 0; i < top.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) m(i, j) = top(i, j);
  for (std::size_t i = 0; i < bottom.rows(); ++i)
    for (std::size_t j = 0; j < top.cols(); ++j) m(top.rows() + i, j) = bottom(i, j);
  return m;
}

inline Matrix hstack(const Matrix& left, const Matrix& right) {
  require_dim(left.rows() == right.rows(), "hstack: row mismatch");
  return vstack(left.transpose(), right.transpose()).transpose();
}

struct RowEchelon {
  Matrix reduced;                    // RREF, zero rows at the bottom
  std::vector<std::size_t> pivots;   // pivot column of each nonzero row, increasing
  std::size_t rank() const { return pivots.size(); }
};

/// Gauss-Jordan elimination to reduced row echelon form. Pivots are the
/// first nonzero entry scanning columns left to right, so the result is the
/// unique RREF of the row space.
inline RowEchelon rref(Matrix m) {
  RowEchelon out;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t p = r;
    while (p < m.rows() && sgn(m(p, c)) == 0) ++p;
    if (p == m.rows()) continue;
    if (p != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
    const Scalar inv = 1 / m(r, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || sgn(m(i, c)) == 0) continue;
      const Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (sgn(m(r, j)) != 0) m(i, j) -= f * m(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.reduced = std::move(m);
  return out;
}

inline std::size_t rank(const Matrix& m) { return rref(m).rank(); }

/// A linear subspace of Q^n, stored as the nonzero rows of its RREF. Two
/// subspaces are equal iff their bases are identical.
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(std::size_t ambient_dim) : ambient_dim_(ambient_dim) {}

  static Subspace zero(std::size_t n) { return Subspace(n); }

  static Subspace full(std::size_t n) {
    Subspace s(n);
    for (std::size_t i = 0; i < n; ++i) s.basis_.push_back(unit_vector(n, i));
    s.pivots_.resize(n);
    for (std::size_t i = 0; i < n; ++i) s.pivots_[i] = i;
    return s;
  }

  static Subspace span(std::span<const Vector> vectors, std::size_t ambient_dim) {
    const auto e = rref(Matrix::from_rows(vectors, ambient_dim));
    Subspace s(ambient_dim);
    for (std::size_t i = 0; i < e.rank(); ++i) s.basis_.push_back(e.reduced.row(i));
    s.pivots_ = e.pivots;
    return s;
  }

  std::size_t ambient_dim() const { return ambient_dim_; }
  std::size_t dim() const { return basis_.size(); }
  bool is_zero() const { return basis_.empty(); }
  bool is_full() const { return basis_.size() == ambient_dim_; }
  const std::vector<Vector>& basis() const { return basis_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  // Rows are the basis vectors.
  Matrix basis_matrix() const { return Matrix::from_rows(basis_, ambient_dim_); }

  // Residual of v after elimination against the echelon basis; zero iff v is in the span.
  Vector reduce(Vector v) const {
    require_dim(v.size() == ambient_dim_, "Subspace::reduce: length mismatch");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      const Scalar f = v[pivots_[i]];
      if (sgn(f) == 0) continue;
      for (std::size_t j = pivots_[i]; j < ambient_dim_; ++j)
        if (sgn(basis_[i][j]) != 0) v[j] -= f * basis_[i][j];
    }
    return v;
  }

  bool contains(const Vector& v) const { return flathom::is_zero(reduce(v)); }

  bool contains(const Subspace& other) const {
    require_dim(other.ambient_dim_ == ambient_dim_, "Subspace::contains: ambient mismatch");
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const Vector& v) { return contains(v); });
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
  }

 private:
  std::size_t ambient_dim_ = 0;
  std::vector<Vector> basis_;
  std::vector<std::size_t> pivots_;
};

/// Canonical subspace spanned by `vectors`.
inline Subspace rref_basis(std::span<const Vector> vectors, std::size_t ambient_dim) {
  return Subspace::span(vectors, ambient_dim);
}

inline Subspace kernel(const Matrix& m) {
  const auto e = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> gens;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector x = zero_vector(m.cols());
    x[f] = 1;
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = -e.reduced(i, f);
    gens.push_back(std::move(x));
  }
  return Subspace::span(gens, m.cols());
}

/// Column space.
inline Subspace image(const Matrix& m) { return Subspace::span(m.transpose().row_vectors(), m.rows()); }

inline Subspace sum_spaces(const Subspace& a, const Subspace& b) {
  require_dim(a.ambient_dim() == b.ambient_dim(), "sum_spaces: ambient mismatch");
  std::vector<Vector> all = a.basis();
  all.insert(all.end(), b.basis().begin(), b.basis().end());
  return Subspace::span(all, a.ambient_dim());
}

/// Intersection via the kernel of [B1^T | -B2^T]: every (x, y) in it gives
/// x.B1 = y.B2 in both spaces.
inline Subspace intersect_spaces(const Subspace& a, const Subspace& b) {
  require_dim(a.ambient_dim() == b.ambient_dim(), "intersect_spaces: ambient mismatch");
  const std::size_t n = a.ambient_dim();
  if (a.is_zero() || b.is_zero()) return Subspace::zero(n);
  const Matrix stacked = hstack(a.basis_matrix().transpose(), -b.basis_matrix().transpose());
  const Subspace rel = kernel(stacked);
  std::vector<Vector> gens;
  for (const auto& coeffs : rel.basis()) {
    Vector x = zero_vector(n);
    for (std::size_t i = 0; i < a.dim(); ++i)
      if (sgn(coeffs[i]) != 0) x = x + coeffs[i] * a.basis()[i];
    gens.push_back(std::move(x));
  }
  return Subspace::span(gens, n);
}

/// Some x with m*x = b, or nullopt if b is not in the image. Free variables
/// are set to zero.
inline std::optional<Vector> solve_linear(const Matrix& m, const Vector& b) {
  require_dim(b.size() == m.rows(), "solve_linear: rhs length mismatch");
  Matrix aug(m.rows(), m.cols() + 1);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const auto e = rref(std::move(aug));
  if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
  Vector x = zero_vector(m.cols());
  for (std::size_t i = 0; i < e.pivots.size(); ++i) x[e.pivots[i]] = e.reduced(i, m.cols());
  return x;
}

inline std::optional<Matrix> inverse(const Matrix& m) {
  require_dim(m.is_square(), "inverse: matrix not square");
  const std::size_t n = m.rows();
  const auto e = rref(hstack(m, Matrix::identity(n)));
  if (e.rank() < n || e.pivots[n - 1] != n - 1) return std::nullopt;
  return e.reduced.block(0, n, n, n);
}

inline Scalar determinant(Matrix m) {
  require_dim(m.is_square(), "determinant: matrix not square");
  const std::size_t n = m.rows();
  Scalar det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(m(p, c)) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    for (std::size_t i = c + 1; i < n; ++i) {
      if (sgn(m(i, c)) == 0) continue;
      const Scalar f = m(i, c) / m(c, c);
      for (std::size_t j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

}  // namespace flathom
