#pragma once

// Nondegenerate symmetric bilinear forms of signature (p, s) and the Witt
// decomposition R^n = U0 + W0 + U0* adapted to a totally isotropic U0.

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "flathom/error.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

struct Signature {
  std::size_t p = 0;  // positive squares
  std::size_t s = 0;  // negative squares (the index)
  std::size_t zero = 0;
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Inertia of a symmetric matrix by symmetric Gaussian congruence. No
/// eigenvalues: each step either pivots on a nonzero diagonal entry or, when
/// the whole remaining diagonal vanishes, adds a row/column pair to create one.
inline Signature inertia(Matrix m) {
  require_dim(m.is_symmetric(), "inertia: matrix not symmetric");
  const std::size_t n = m.rows();
  Signature sig;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    while (piv < n && sgn(m(piv, piv)) == 0) ++piv;
    if (piv == n) {
      // All remaining diagonal entries are zero; look for m(i, j) != 0.
      std::size_t bi = n, bj = n;
      for (std::size_t i = k; i < n && bi == n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (sgn(m(i, j)) != 0) {
            bi = i;
            bj = j;
            break;
          }
      if (bi == n) {
        sig.zero += n - k;
        break;
      }
      // e_i <- e_i + e_j: new diagonal entry is 2 m(i, j).
      for (std::size_t c = 0; c < n; ++c) m(bi, c) += m(bj, c);
      for (std::size_t r = 0; r < n; ++r) m(r, bi) += m(r, bj);
      piv = bi;
    }
    if (piv != k) {
      for (std::size_t c = 0; c < n; ++c) std::swap(m(piv, c), m(k, c));
      for (std::size_t r = 0; r < n; ++r) std::swap(m(r, piv), m(r, k));
    }
    const Scalar d = m(k, k);
    if (sgn(d) > 0) ++sig.p; else ++sig.s;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (sgn(m(i, k)) == 0) continue;
      const Scalar f = m(i, k) / d;
      for (std::size_t c = k; c < n; ++c) m(i, c) -= f * m(k, c);
      for (std::size_t r = k; r < n; ++r) m(r, i) -= f * m(r, k);
    }
  }
  return sig;
}

/// A symmetric nondegenerate form <x, y> = x^T G y on Q^n.
class BilinearForm {
 public:
  explicit BilinearForm(Matrix gram) : gram_(std::move(gram)) {
    if (!gram_.is_square() || gram_.rows() == 0) throw PreconditionError("Gram matrix must be square and nonempty");
    if (!gram_.is_symmetric()) throw PreconditionError("Gram matrix is not symmetric");
    const Signature sig = inertia(gram_);
    if (sig.zero != 0) throw PreconditionError("Gram matrix is degenerate");
    p_ = sig.p;
    s_ = sig.s;
  }

  // Also checks that the declared signature is the actual one.
  BilinearForm(Matrix gram, std::size_t p, std::size_t s) : BilinearForm(std::move(gram)) {
    if (p != p_ || s != s_) {
      throw PreconditionError("declared signature (" + std::to_string(p) + "," + std::to_string(s) +
                              ") does not match Gram signature (" + std::to_string(p_) + "," +
                              std::to_string(s_) + ")");
    }
  }

  std::size_t n() const { return gram_.rows(); }
  std::size_t p() const { return p_; }
  std::size_t s() const { return s_; }
  const Matrix& gram() const { return gram_; }

  Scalar operator()(const Vector& x, const Vector& y) const {
    require_dim(x.size() == n() && y.size() == n(), "form evaluation: length mismatch");
    return dot(x, gram_ * y);
  }

  friend bool operator==(const BilinearForm& a, const BilinearForm& b) { return a.gram_ == b.gram_; }

 private:
  Matrix gram_;
  std::size_t p_ = 0;
  std::size_t s_ = 0;
};

/// diag(+1 x p, -1 x s).
inline BilinearForm standard_form(std::size_t p, std::size_t s) {
  if (p + s == 0) throw PreconditionError("standard_form: p + s must be at least 1");
  Vector d(p + s, Scalar(1));
  for (std::size_t i = p; i < p + s; ++i) d[i] = -1;
  return BilinearForm(Matrix::diagonal(d));
}

inline Scalar evaluate(const BilinearForm& f, const Vector& x, const Vector& y) { return f(x, y); }

inline Subspace orth_complement(const BilinearForm& f, const Subspace& s) {
  require_dim(s.ambient_dim() == f.n(), "orth_complement: ambient mismatch");
  if (s.is_zero()) return Subspace::full(f.n());
  return kernel(s.basis_matrix() * f.gram());
}

/// Pairwise check on the basis, self-pairings included.
inline bool is_totally_isotropic(const BilinearForm& f, const Subspace& s) {
  require_dim(s.ambient_dim() == f.n(), "is_totally_isotropic: ambient mismatch");
  const auto& b = s.basis();
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i; j < b.size(); ++j)
      if (sgn(f(b[i], b[j])) != 0) return false;
  return true;
}

// Second route to the same predicate: S is contained in its own complement.
inline bool is_self_orthogonal(const BilinearForm& f, const Subspace& s) {
  return orth_complement(f, s).contains(s);
}

/// Totally isotropic subspaces have dimension at most min(p, s).
inline std::size_t max_isotropic_bound(const BilinearForm& f) { return std::min(f.p(), f.s()); }

/// Basis adapted to R^n = U0 + W0 + U0*: columns of `change_of_basis` are
/// u_1..u_k, w_1..w_m, u*_1..u*_k and the Gram matrix in that basis is
/// [[0,0,I],[0,I~,0],[I,0,0]].
struct WittBasis {
  BilinearForm form;
  std::size_t k = 0;
  std::size_t w_dim = 0;
  Matrix change_of_basis;
  Matrix i_tilde;

  Vector u(std::size_t i) const { return change_of_basis.column(i); }
  Vector w(std::size_t i) const { return change_of_basis.column(k + i); }
  Vector u_dual(std::size_t i) const { return change_of_basis.column(k + w_dim + i); }

  Matrix adapted_gram() const { return change_of_basis.transpose() * form.gram() * change_of_basis; }

  // Block form [[0,0,I_k],[0,I~,0],[I_k,0,0]] that adapted_gram() must equal.
  Matrix expected_gram() const {
    const std::size_t n = form.n();
    Matrix g(n, n);
    for (std::size_t i = 0; i < k; ++i) {
      g(i, k + w_dim + i) = 1;
      g(k + w_dim + i, i) = 1;
    }
    for (std::size_t i = 0; i < w_dim; ++i)
      for (std::size_t j = 0; j < w_dim; ++j) g(k + i, k + j) = i_tilde(i, j);
    return g;
  }

  Subspace u_space() const {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(u(i));
    return rref_basis(v, form.n());
  }
  Subspace w_space() const {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < w_dim; ++i) v.push_back(w(i));
    return rref_basis(v, form.n());
  }
  Subspace dual_space() const {
    std::vector<Vector> v;
    for (std::size_t i = 0; i < k; ++i) v.push_back(u_dual(i));
    return rref_basis(v, form.n());
  }
};

/// Hyperbolic-pair completion of a totally isotropic U0. For each basis
/// vector u_i, take the canonical solution y of <u_j, y> = delta_ij and
/// <u*_m, y> = 0 (m < i), then u*_i = y - (<y,y>/2) u_i. W0 is the
/// orthogonal complement of U0 + U0*, in its canonical basis.
inline WittBasis witt_extend(const BilinearForm& f, const Subspace& u0) {
  require_dim(u0.ambient_dim() == f.n(), "witt_extend: ambient mismatch");
  if (!is_totally_isotropic(f, u0)) throw PreconditionError("witt_extend: U0 is not totally isotropic");
  const std::size_t n = f.n();
  const std::size_t k = u0.dim();
  const auto& us = u0.basis();

  std::vector<Vector> duals;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Vector> rows;
    Vector rhs;
    for (std::size_t j = 0; j < k; ++j) {
      rows.push_back(f.gram() * us[j]);
      rhs.emplace_back(i == j ? 1 : 0);
    }
    for (const auto& d : duals) {
      rows.push_back(f.gram() * d);
      rhs.emplace_back(0);
    }
    auto y = solve_linear(Matrix::from_rows(rows, n), rhs);
    if (!y) throw InternalError("witt_extend: dual vector system unsolvable");
    const Scalar half = f(*y, *y) / 2;
    duals.push_back(*y - half * us[i]);
  }

  std::vector<Vector> hyperbolic = us;
  hyperbolic.insert(hyperbolic.end(), duals.begin(), duals.end());
  const Subspace w0 = orth_complement(f, rref_basis(hyperbolic, n));

  std::vector<Vector> cols = us;
  cols.insert(cols.end(), w0.basis().begin(), w0.basis().end());
  cols.insert(cols.end(), duals.begin(), duals.end());

  WittBasis wb{f, k, w0.dim(), Matrix::from_columns(cols, n), Matrix{}};
  const Matrix wm = Matrix::from_columns(w0.basis(), n);
  wb.i_tilde = wm.transpose() * f.gram() * wm;
  if (wb.adapted_gram() != wb.expected_gram()) throw InternalError("witt_extend: adapted Gram has wrong block shape");
  return wb;
}

}  // namespace flathom
