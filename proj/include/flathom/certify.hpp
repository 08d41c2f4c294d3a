#pragma once

// Certificates that the development image of a group with abelian linear
// holonomy is translationally isotropic, and an independent re-checker.
//
// The certificate proves U0^perp <= T by exhibiting U0^perp as translations
// that commute with Gamma (so they preserve every orbit of the centralizer),
// and then T^perp <= U0 <= U0^perp <= T. T itself is never computed.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "flathom/affine.hpp"
#include "flathom/centralizer.hpp"
#include "flathom/error.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

/// Raw basis as stored in a certificate. The verifier never trusts these to
/// be canonical; it checks that itself.
struct BasisList {
  std::size_t ambient_dim = 0;
  std::vector<Vector> vectors;

  static BasisList of(const Subspace& s) { return {s.ambient_dim(), s.basis()}; }
  friend bool operator==(const BasisList&, const BasisList&) = default;
};

struct HolonomyEvidence {
  BasisList u_gamma;
  BasisList u_gamma_perp;
  BasisList u_zero;
  std::array<bool, 4> criteria{};
  bool abelian = false;

  static HolonomyEvidence of(const HolonomyReport& r) {
    return {BasisList::of(r.u_gamma), BasisList::of(r.u_gamma_perp), BasisList::of(r.u_zero), r.criteria, r.abelian};
  }
};

struct ChainStep {
  std::string id;
  std::string claim;
  std::string reference;
  bool verified = false;
};

struct IsotropyCertificate {
  GroupSpec spec;
  HolonomyEvidence abelian_evidence;
  BasisList t_lower;  // U0^perp, proven to consist of translations preserving D
  std::vector<ChainStep> chain;
  bool verdict = false;
  std::optional<std::string> failing_criterion;
  std::optional<IsotropicWitness> witness;
  std::optional<std::string> witness_error;
};

namespace chain_text {
inline constexpr const char* kA = "U_0 = U_Gamma";
inline constexpr const char* kB = "U_0^perp = U_Gamma^perp";
inline constexpr const char* kC = "every translation in U_0^perp commutes with every generator";
inline constexpr const char* kD = "U_0^perp consists of centralizing translations, hence U_0^perp <= T";
inline constexpr const char* kE = "T^perp <= U_0 <= U_0^perp <= T";
}  // namespace chain_text

inline IsotropyCertificate translational_isotropy_certificate(const GroupSpec& spec, std::size_t word_length = 4) {
  for (std::size_t i = 0; i < spec.generators().size(); ++i)
    if (!satisfies_wolf(spec.generators()[i]))
      throw PreconditionError("certificate: generator " + std::to_string(i) + " fails the Wolf conditions");

  const HolonomyReport rep = abelian_report(spec, word_length);
  const BilinearForm& f = spec.form();
  const Subspace u0_perp = orth_complement(f, rep.u_zero);
  const Subspace ctrans = centralizer_translations(spec);

  IsotropyCertificate cert{spec, HolonomyEvidence::of(rep), BasisList::of(u0_perp), {}, false, {}, {}, {}};
  const bool a = rep.u_zero == rep.u_gamma;
  const bool b = u0_perp == rep.u_gamma_perp;
  const bool c = u0perp_centralizes(spec, rep.u_zero).holds;
  const bool d = ctrans.contains(u0_perp);
  const bool e = u0_perp.contains(rep.u_zero) && rep.u_zero.dim() + u0_perp.dim() == f.n() && d;
  cert.chain = {
      {"a", chain_text::kA, "abelianness criterion 4", a},
      {"b", chain_text::kB, "orthogonal complement of (a)", b},
      {"c", chain_text::kC, "(I+A,v)(I,u) = (I+A,u+Au+v)", c},
      {"d", chain_text::kD, "translations centralizing Gamma preserve centralizer orbits", d},
      {"e", chain_text::kE, "U totally isotropic and U^perp <= T", e},
  };
  cert.verdict = rep.abelian && a && b && c && d && e;

  if (!rep.abelian) {
    if (rep.nonvanishing_pair) {
      cert.failing_criterion = "A_i A_j = 0 fails for generators (" + std::to_string(rep.nonvanishing_pair->first) +
                               ", " + std::to_string(rep.nonvanishing_pair->second) + ")";
    } else {
      cert.failing_criterion = "holonomy is not abelian";
    }
    try {
      cert.witness = index_witness(spec, rep);
    } catch (const WitnessError& err) {
      cert.witness_error = err.what();
    }
  }
  return cert;
}

struct VerificationResult {
  bool accepted = false;
  std::vector<std::string> failures;
};

namespace verify_detail {

// Rank by fraction-free (Bareiss) elimination on integer rows obtained by
// clearing denominators. Kept separate from the library's RREF.
inline std::size_t rank_of(const std::vector<Vector>& rows, std::size_t n) {
  std::vector<std::vector<mpz_class>> m;
  for (const auto& r : rows) {
    if (r.size() != n) throw ParseError("certificate: vector of wrong length");
    mpz_class l = 1;
    for (const auto& q : r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), q.get_den_mpz_t());
    std::vector<mpz_class> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = r[j].get_num() * (l / r[j].get_den());
    m.push_back(std::move(z));
  }
  std::size_t rk = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < n && rk < m.size(); ++c) {
    std::size_t p = rk;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rk]);
    for (std::size_t i = rk + 1; i < m.size(); ++i) {
      for (std::size_t j = c + 1; j < n; ++j) {
        m[i][j] = (m[rk][c] * m[i][j] - m[i][c] * m[rk][j]);
        mpz_divexact(m[i][j].get_mpz_t(), m[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[i][c] = 0;
    }
    prev = m[rk][c];
    ++rk;
  }
  return rk;
}

inline bool in_span(const std::vector<Vector>& basis, const Vector& v, std::size_t n) {
  std::vector<Vector> ext = basis;
  ext.push_back(v);
  return rank_of(ext, n) == rank_of(basis, n);
}

// Reduced row echelon shape: strictly increasing leading ones, pivot columns
// otherwise zero.
inline bool is_rref(const BasisList& b) {
  std::vector<std::size_t> pivots;
  for (const auto& v : b.vectors) {
    if (v.size() != b.ambient_dim) return false;
    std::size_t p = 0;
    while (p < v.size() && sgn(v[p]) == 0) ++p;
    if (p == v.size() || v[p] != 1) return false;
    if (!pivots.empty() && p <= pivots.back()) return false;
    pivots.push_back(p);
  }
  for (std::size_t i = 0; i < b.vectors.size(); ++i)
    for (std::size_t j = 0; j < b.vectors.size(); ++j)
      if (i != j && sgn(b.vectors[j][pivots[i]]) != 0) return false;
  return true;
}

inline Scalar pair(const Matrix& gram, const Vector& x, const Vector& y) {
  Scalar s = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      if (sgn(gram(i, j)) != 0) s += x[i] * gram(i, j) * y[j];
  return s;
}

inline bool mutually_orthogonal(const Matrix& gram, const std::vector<Vector>& xs, const std::vector<Vector>& ys) {
  for (const auto& x : xs)
    for (const auto& y : ys)
      if (sgn(pair(gram, x, y)) != 0) return false;
  return true;
}

}  // namespace verify_detail

/// Re-checks every chain step from the group data alone, without the
/// generator's subspace routines. Accepts only certificates whose verdict is
/// true and whose every claim holds.
inline VerificationResult verify_certificate_detailed(const IsotropyCertificate& cert) {
  using namespace verify_detail;
  VerificationResult res;
  auto fail = [&](std::string why) { res.failures.push_back(std::move(why)); };

  const GroupSpec& spec = cert.spec;
  const std::size_t n = spec.n();
  const Matrix& gram = spec.form().gram();
  const auto& ev = cert.abelian_evidence;

  for (const auto* b : {&ev.u_gamma, &ev.u_gamma_perp, &ev.u_zero, &cert.t_lower}) {
    if (b->ambient_dim != n) {
      fail("subspace has wrong ambient dimension");
      return res;
    }
  }
  if (!is_rref(ev.u_gamma)) fail("U_Gamma basis is not canonical");
  if (!is_rref(ev.u_gamma_perp)) fail("U_Gamma^perp basis is not canonical");
  if (!is_rref(ev.u_zero)) fail("U_0 basis is not canonical");
  if (!is_rref(cert.t_lower)) fail("t_lower basis is not canonical");
  if (!res.failures.empty()) return res;

  // Direct arithmetic on the generators: L - I and explicit compositions.
  std::vector<Matrix> as;
  std::vector<Vector> columns;
  for (const auto& g : spec.generators()) {
    if (g.linear().transpose() * gram * g.linear() != gram) fail("generator is not an isometry");
    Matrix a = g.linear();
    for (std::size_t i = 0; i < n; ++i) a(i, i) -= 1;
    for (std::size_t j = 0; j < n; ++j) columns.push_back(a.column(j));
    as.push_back(std::move(a));
  }

  const auto& ug = ev.u_gamma.vectors;
  const auto& ugp = ev.u_gamma_perp.vectors;
  const auto& u0 = ev.u_zero.vectors;
  const auto& tl = cert.t_lower.vectors;

  // U_Gamma equals the span of all columns of the A's.
  const std::size_t rk_cols = rank_of(columns, n);
  if (rank_of(ug, n) != ug.size() || ug.size() != rk_cols) fail("U_Gamma has the wrong dimension");
  for (const auto& c : columns)
    if (!in_span(ug, c, n)) {
      fail("a column of some A is outside U_Gamma");
      break;
    }
  // U_Gamma^perp: killed by every A, orthogonal to U_Gamma, complementary dimension.
  auto killed_by_all = [&](const std::vector<Vector>& vs) {
    for (const auto& y : vs)
      for (const auto& a : as)
        if (!is_zero(a * y)) return false;
    return true;
  };
  if (!killed_by_all(ugp)) fail("U_Gamma^perp vector not in the common kernel");
  if (!mutually_orthogonal(gram, ug, ugp)) fail("U_Gamma^perp is not orthogonal to U_Gamma");
  if (rank_of(ugp, n) != ugp.size() || ugp.size() + ug.size() != n) fail("U_Gamma^perp has the wrong dimension");
  // U_0 = U_Gamma meet U_Gamma^perp.
  for (const auto& x : u0)
    if (!in_span(ug, x, n) || !in_span(ugp, x, n)) {
      fail("U_0 vector outside U_Gamma or U_Gamma^perp");
      break;
    }
  {
    std::vector<Vector> both = ug;
    both.insert(both.end(), ugp.begin(), ugp.end());
    if (rank_of(u0, n) != u0.size() || u0.size() + rank_of(both, n) != ug.size() + ugp.size())
      fail("U_0 has the wrong dimension");
  }

  // Abelianness criteria, recomputed.
  bool products = true;
  for (const auto& a1 : as)
    for (const auto& a2 : as)
      if (!(a1 * a2).is_zero()) products = false;
  bool iso = mutually_orthogonal(gram, ug, ug);
  bool equal = ev.u_zero == ev.u_gamma;
  bool commute = true;
  for (std::size_t i = 0; i < spec.generators().size(); ++i)
    for (std::size_t j = i + 1; j < spec.generators().size(); ++j) {
      const Matrix& li = spec.generators()[i].linear();
      const Matrix& lj = spec.generators()[j].linear();
      if (li * lj != lj * li) commute = false;
    }
  const std::array<bool, 4> recomputed{commute, products, iso, equal};
  for (std::size_t i = 0; i < 4; ++i)
    if (ev.criteria[i] != recomputed[i]) fail(std::string("criterion '") + criterion_name(static_cast<AbelianCriterion>(i)) + "' is misreported");
  for (bool c : ev.criteria)
    if (c != ev.criteria[0]) fail("abelian criteria disagree");
  if (ev.abelian != (ev.criteria[0] && ev.criteria[1] && ev.criteria[2] && ev.criteria[3])) fail("abelian flag inconsistent");
  if (!ev.abelian) fail("holonomy is not abelian");

  // (a) U_0 = U_Gamma, (b) U_0^perp = U_Gamma^perp.
  if (!equal) fail("chain (a): U_0 != U_Gamma");
  if (!(cert.t_lower == ev.u_gamma_perp)) fail("chain (b): U_0^perp != U_Gamma^perp");
  // t_lower really is U_0^perp.
  if (!mutually_orthogonal(gram, u0, tl) || rank_of(tl, n) != tl.size() || tl.size() + u0.size() != n)
    fail("t_lower is not U_0^perp");
  // (c) (I+A,v)(I,u) = (I,u)(I+A,v) for every u in t_lower and generator.
  auto commutes = [&] {
    for (const auto& u : tl)
      for (const auto& g : spec.generators()) {
        // translation part of (L, v)(I, u) against that of (I, u)(L, v)
        if (g.linear() * u + g.translation() != u + g.translation()) return false;
      }
    return true;
  };
  if (!commutes()) fail("chain (c): a translation in U_0^perp does not commute with a generator");
  // (d) each such translation centralizes Gamma: A u = 0.
  if (!killed_by_all(tl)) fail("chain (d): U_0^perp is not made of centralizing translations");
  // (e) U_0 <= U_0^perp, and the outer inclusions via dim U_0 + dim U_0^perp = n.
  if (!mutually_orthogonal(gram, u0, u0)) fail("chain (e): U_0 is not totally isotropic");
  for (const auto& x : u0)
    if (!in_span(tl, x, n)) {
      fail("chain (e): U_0 not contained in U_0^perp");
      break;
    }

  for (const auto& step : cert.chain)
    if (!step.verified) fail("chain step (" + step.id + ") is marked unverified");
  if (cert.chain.size() != 5) fail("chain must have five steps");
  if (!cert.verdict) fail("certificate verdict is false");

  res.accepted = res.failures.empty();
  return res;
}

inline bool verify_certificate(const IsotropyCertificate& cert) { return verify_certificate_detailed(cert).accepted; }

}  // namespace flathom
