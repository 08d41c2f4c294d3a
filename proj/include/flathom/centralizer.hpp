#pragma once

// Lie algebra of the centralizer of Gamma in Iso(R^n_s) and the orbit of its
// identity component through a point.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flathom/affine.hpp"
#include "flathom/form.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

/// Translations commuting with every generator: the common kernel of the A's.
inline Subspace centralizer_translations(const GroupSpec& spec) { return common_kernel(spec); }

/// An infinitesimal isometry x -> X x + w.
struct CentralizerElement {
  Matrix x;
  Vector w;
};

/// Pairs (X, w) with X skew for the form and, for every generator
/// (I + A, v): X A = A X and X v = A w.
struct CentralizerAlgebra {
  std::vector<CentralizerElement> basis;
  std::size_t dim() const { return basis.size(); }
};

/// X is parametrized as G^-1 S with S skew-symmetric, which is exactly the
/// set of X with X^T G + G X = 0. The remaining conditions are linear in
/// (S, w) and are solved by one exact kernel computation.
inline CentralizerAlgebra centralizer_algebra(const GroupSpec& spec) {
  const std::size_t n = spec.n();
  const Matrix ginv = *inverse(spec.form().gram());

  std::vector<CentralizerElement> unknowns;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      Matrix s(n, n);
      s(i, j) = 1;
      s(j, i) = -1;
      unknowns.push_back({ginv * s, zero_vector(n)});
    }
  for (std::size_t i = 0; i < n; ++i) unknowns.push_back({Matrix(n, n), unit_vector(n, i)});

  // One column per unknown: its residuals in every defining equation.
  std::vector<Vector> columns;
  columns.reserve(unknowns.size());
  const auto& gens = spec.generators();
  std::vector<Matrix> as;
  for (const auto& g : gens) as.push_back(g.a());
  for (const auto& u : unknowns) {
    Vector col;
    col.reserve(gens.size() * (n * n + n));
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      const Matrix comm = u.x * as[gi] - as[gi] * u.x;
      col.insert(col.end(), comm.entries().begin(), comm.entries().end());
      const Vector t = u.x * gens[gi].translation() - as[gi] * u.w;
      col.insert(col.end(), t.begin(), t.end());
    }
    columns.push_back(std::move(col));
  }

  CentralizerAlgebra alg;
  const std::size_t eqs = gens.size() * (n * n + n);
  const Subspace sol = eqs == 0 ? Subspace::full(unknowns.size()) : kernel(Matrix::from_columns(columns, eqs));
  for (const auto& coeffs : sol.basis()) {
    CentralizerElement e{Matrix(n, n), zero_vector(n)};
    for (std::size_t t = 0; t < unknowns.size(); ++t) {
      if (sgn(coeffs[t]) == 0) continue;
      e.x = e.x + coeffs[t] * unknowns[t].x;
      e.w = e.w + coeffs[t] * unknowns[t].w;
    }
    alg.basis.push_back(std::move(e));
  }
  return alg;
}

/// Tangent space {X p + w} of the identity-component orbit through p.
inline Subspace orbit_tangent(const CentralizerAlgebra& alg, const Vector& p) {
  std::vector<Vector> t;
  t.reserve(alg.basis.size());
  for (const auto& e : alg.basis) t.push_back(e.x * p + e.w);
  return rref_basis(t, p.size());
}

/// dim of the orbit tangent at p; equal to n iff the orbit through p is open.
inline std::size_t orbit_dimension(const CentralizerAlgebra& alg, const Vector& p) {
  return orbit_tangent(alg, p).dim();
}

inline std::size_t orbit_dimension(const GroupSpec& spec, const Vector& p) {
  require_dim(p.size() == spec.n(), "orbit_dimension: point has wrong length");
  return orbit_dimension(centralizer_algebra(spec), p);
}

struct CentralizesResult {
  bool holds = true;
  // Witness on failure: the translation u, the generator index and A u.
  std::optional<Vector> u;
  std::optional<std::size_t> generator;
  std::optional<Vector> a_u;
};

/// Whether every translation by a vector of U0^perp commutes with every
/// generator, checked by composing (I+A, v)(I, u) and (I, u)(I+A, v).
inline CentralizesResult u0perp_centralizes(const GroupSpec& spec, const Subspace& u0) {
  const Subspace perp = orth_complement(spec.form(), u0);
  const auto& gens = spec.generators();
  for (const auto& u : perp.basis()) {
    const AffineIso t = AffineIso::translation(spec.form_ptr(), u);
    for (std::size_t i = 0; i < gens.size(); ++i) {
      if (!(compose(gens[i], t) == compose(t, gens[i]))) return {false, u, i, gens[i].a() * u};
    }
  }
  return {};
}

inline CentralizesResult u0perp_centralizes(const GroupSpec& spec) { return u0perp_centralizes(spec, u_zero(spec)); }

}  // namespace flathom
