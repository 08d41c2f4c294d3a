#pragma once

// Holonomy invariants of a group spec: U_Gamma, its orthogonal space, U0,
// the abelianness criteria, the block shape of A in a Witt-adapted basis,
// and the totally isotropic witness built for non-abelian holonomy.

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flathom/affine.hpp"
#include "flathom/error.hpp"
#include "flathom/form.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

/// Sum of im A over the generators. Since im(A1 + A2 + A1 A2) lies in
/// im A1 + im A2, this is the sum over every element of the group.
inline Subspace u_gamma(const GroupSpec& spec) {
  std::vector<Vector> cols;
  for (const auto& g : spec.generators()) {
    const Matrix a = g.a();
    for (std::size_t j = 0; j < a.cols(); ++j) cols.push_back(a.column(j));
  }
  return rref_basis(cols, spec.n());
}

/// Intersection of ker A over the generators.
inline Subspace common_kernel(const GroupSpec& spec) {
  if (spec.generators().empty()) return Subspace::full(spec.n());
  Matrix stacked(0, spec.n());
  for (const auto& g : spec.generators()) stacked = vstack(stacked, g.a());
  return kernel(stacked);
}

inline Subspace u_zero(const GroupSpec& spec) {
  const Subspace ug = u_gamma(spec);
  return intersect_spaces(ug, orth_complement(spec.form(), ug));
}

enum class AbelianCriterion : std::size_t {
  LinearPartsCommute = 0,  // Hol(Gamma) abelian, checked on words
  ProductsVanish,          // A_i A_j = 0 for all ordered generator pairs
  UGammaIsotropic,         // U_Gamma totally isotropic
  UZeroEqualsUGamma,       // U0 = U_Gamma
};

inline const char* criterion_name(AbelianCriterion c) {
  switch (c) {
    case AbelianCriterion::LinearPartsCommute: return "linear parts commute";
    case AbelianCriterion::ProductsVanish: return "A_i A_j = 0";
    case AbelianCriterion::UGammaIsotropic: return "U_Gamma totally isotropic";
    case AbelianCriterion::UZeroEqualsUGamma: return "U_0 = U_Gamma";
  }
  return "?";
}

struct HolonomyReport {
  Subspace u_gamma;
  Subspace u_gamma_perp;
  Subspace u_zero;
  std::array<bool, 4> criteria{};
  bool abelian = false;
  std::size_t word_length = 0;
  // First ordered generator pair with A_i A_j != 0, if any.
  std::optional<std::pair<std::size_t, std::size_t>> nonvanishing_pair;

  bool criterion(AbelianCriterion c) const { return criteria[static_cast<std::size_t>(c)]; }

  bool criteria_agree() const {
    for (bool c : criteria)
      if (c != criteria[0]) return false;
    return true;
  }
};

/// Distinct linear parts of words of length <= max_length.
inline std::vector<Matrix> linear_words_up_to(const GroupSpec& spec, std::size_t max_length,
                                              std::size_t cap = kDefaultWordCap) {
  const std::size_t n = spec.n();
  std::vector<Matrix> letters;
  for (const auto& g : spec.generators()) {
    letters.push_back(g.linear());
    letters.push_back(inverse(g).linear());
  }
  auto less = [](const Matrix& x, const Matrix& y) {
    const auto& a = x.entries();
    const auto& b = y.entries();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    return false;
  };
  std::vector<Matrix> out{Matrix::identity(n)};
  std::set<Matrix, decltype(less)> seen(less);
  seen.insert(out.front());
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t end = out.size();
    for (std::size_t w = begin; w < end; ++w) {
      for (const auto& l : letters) {
        Matrix next = out[w] * l;
        if (seen.insert(next).second) {
          out.push_back(std::move(next));
          if (out.size() > cap) throw Error("linear_words_up_to: word budget exceeded");
        }
      }
    }
    begin = end;
    if (begin == out.size()) break;
  }
  return out;
}

/// Computes the four criteria independently without asserting agreement.
inline HolonomyReport evaluate_criteria(const GroupSpec& spec, std::size_t word_length = 4) {
  const BilinearForm& f = spec.form();
  HolonomyReport rep;
  rep.word_length = word_length;
  rep.u_gamma = u_gamma(spec);
  rep.u_gamma_perp = orth_complement(f, rep.u_gamma);
  rep.u_zero = intersect_spaces(rep.u_gamma, rep.u_gamma_perp);

  // A word commuting with every generator commutes with every word, so this
  // decides pairwise commutation of all words up to word_length.
  const auto words = linear_words_up_to(spec, word_length);
  bool commute = true;
  for (std::size_t i = 0; i < words.size() && commute; ++i)
    for (const auto& g : spec.generators())
      if (words[i] * g.linear() != g.linear() * words[i]) {
        commute = false;
        break;
      }
  rep.criteria[0] = commute;

  const auto as = spec.linear_parts_minus_identity();
  bool products = true;
  for (std::size_t i = 0; i < as.size() && products; ++i)
    for (std::size_t j = 0; j < as.size(); ++j)
      if (!(as[i] * as[j]).is_zero()) {
        products = false;
        rep.nonvanishing_pair = {i, j};
        break;
      }
  rep.criteria[1] = products;
  rep.criteria[2] = is_totally_isotropic(f, rep.u_gamma);
  rep.criteria[3] = rep.u_zero == rep.u_gamma;
  rep.abelian = rep.criteria_agree() && rep.criteria[0];
  return rep;
}

/// Four-way abelianness decision. Disagreement between criteria means the
/// input is not a holonomy group of a homogeneous space (or a bug) and is
/// reported as an InternalError naming the disagreeing pair.
inline HolonomyReport abelian_report(const GroupSpec& spec, std::size_t word_length = 4) {
  HolonomyReport rep = evaluate_criteria(spec, word_length);
  if (!is_totally_isotropic(spec.form(), rep.u_zero)) throw InternalError("U_0 is not totally isotropic");
  if (!(rep.u_gamma_perp == common_kernel(spec)))
    throw InternalError("orthogonal space of U_Gamma differs from the common kernel of the A's");
  for (std::size_t i = 1; i < 4; ++i) {
    if (rep.criteria[i] != rep.criteria[0]) {
      throw InternalError(std::string("abelian criteria disagree: '") +
                          criterion_name(AbelianCriterion::LinearPartsCommute) + "' is " +
                          (rep.criteria[0] ? "true" : "false") + " but '" +
                          criterion_name(static_cast<AbelianCriterion>(i)) + "' is " +
                          (rep.criteria[i] ? "true" : "false"));
    }
  }
  return rep;
}

/// A conjugated into a Witt basis and split into the blocks
///   [[0, -B^T I~, C], [0, 0, B], [0, 0, 0]].
struct BlockForm {
  WittBasis witt;
  Matrix conjugated;
  Matrix b_block;  // w_dim x k
  Matrix c_block;  // k x k
  bool zero_pattern_ok = false;
  bool c_skew_ok = false;
  bool b_columns_ok = false;

  bool ok() const { return zero_pattern_ok && c_skew_ok && b_columns_ok; }
};

inline BlockForm block_form(const WittBasis& witt, const AffineIso& g) {
  if (!satisfies_wolf(g)) throw PreconditionError("block_form: element fails the Wolf conditions");
  const std::size_t k = witt.k;
  const std::size_t m = witt.w_dim;
  const auto pinv = inverse(witt.change_of_basis);
  if (!pinv) throw InternalError("block_form: singular change of basis");
  BlockForm bf{witt, *pinv * g.a() * witt.change_of_basis, Matrix{}, Matrix{}};
  const Matrix& x = bf.conjugated;
  bf.b_block = x.block(k, k + m, m, k);
  bf.c_block = x.block(0, k + m, k, k);
  const std::size_t offs[3] = {0, k, k + m};
  const std::size_t lens[3] = {k, m, k};
  bool zeros = true;
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < 3; ++c) {
      const bool allowed = (r == 0 && c >= 1) || (r == 1 && c == 2);
      if (!allowed && !x.block(offs[r], offs[c], lens[r], lens[c]).is_zero()) zeros = false;
    }
  if (x.block(0, k, k, m) != -(bf.b_block.transpose() * witt.i_tilde)) zeros = false;
  bf.zero_pattern_ok = zeros;
  bf.c_skew_ok = bf.c_block.is_skew();
  bf.b_columns_ok = (bf.b_block.transpose() * witt.i_tilde * bf.b_block).is_zero();
  return bf;
}

inline BlockForm block_form(const GroupSpec& spec, const AffineIso& g) {
  return block_form(witt_extend(spec.form(), u_zero(spec)), g);
}

class WitnessError : public Error {
 public:
  WitnessError(std::string step, const std::string& what)
      : Error("isotropic witness failed at '" + step + "': " + what), step_(std::move(step)) {}
  const std::string& step() const { return step_; }

 private:
  std::string step_;
};

/// The totally isotropic subspace W' + U0 of dimension >= 4 exhibited for a
/// non-abelian holonomy group.
struct IsotropicWitness {
  std::pair<std::size_t, std::size_t> pair;     // generators with A_i A_j != 0
  std::pair<std::size_t, std::size_t> columns;  // columns of B_i spanning W'
  std::vector<Vector> vectors;                  // the two columns, ambient coordinates
  Subspace subspace;                            // W' + U0
  std::size_t dim = 0;
  std::size_t isotropic_bound = 0;              // min(p, s)
  std::size_t index = 0;                        // s
  // The same columns of B_j give four independent isotropic vectors with
  // <b_i^1, b_i^2> = 0 and <b_i^a, b_j^b> != 0 for a != b. Informational.
  bool pairing_rule_holds = false;
};

/// nullopt for abelian holonomy. Otherwise builds the witness and checks each
/// property explicitly, throwing WitnessError with the failing step.
inline std::optional<IsotropicWitness> index_witness(const GroupSpec& spec, const HolonomyReport& report) {
  if (report.abelian) return std::nullopt;
  const BilinearForm& f = spec.form();
  const std::size_t n = spec.n();
  const auto as = spec.linear_parts_minus_identity();
  std::optional<std::pair<std::size_t, std::size_t>> pair;
  for (std::size_t i = 0; i < as.size() && !pair; ++i)
    for (std::size_t j = 0; j < as.size(); ++j)
      if (!(as[i] * as[j]).is_zero()) {
        pair = {i, j};
        break;
      }
  if (!pair) throw WitnessError("find pair", "no generator pair with A_i A_j != 0");

  const auto& gens = spec.generators();
  for (std::size_t idx : {pair->first, pair->second})
    if (!satisfies_wolf(gens[idx])) throw WitnessError("block form", "generator fails the Wolf conditions");
  const WittBasis witt = witt_extend(f, report.u_zero);
  const BlockForm bi = block_form(witt, gens[pair->first]);
  const BlockForm bj = block_form(witt, gens[pair->second]);
  if (!bi.ok() || !bj.ok()) throw WitnessError("block form", "generator is not in block form for U_0");

  const Matrix& b = bi.b_block;
  if (rank(b) < 2) throw WitnessError("rank B_i", "rank of B_i is below 2");
  std::vector<std::size_t> chosen;
  std::vector<Vector> picked;
  for (std::size_t c = 0; c < b.cols() && chosen.size() < 2; ++c) {
    std::vector<Vector> trial = picked;
    trial.push_back(b.column(c));
    if (rank(Matrix::from_rows(trial, b.rows())) == trial.size()) {
      chosen.push_back(c);
      picked = std::move(trial);
    }
  }

  const Matrix wcols = witt.change_of_basis.block(0, witt.k, n, witt.w_dim);
  IsotropicWitness w;
  w.pair = *pair;
  w.columns = {chosen[0], chosen[1]};
  w.vectors = {wcols * picked[0], wcols * picked[1]};
  const Subspace w0 = witt.w_space();
  for (const auto& v : w.vectors)
    if (!w0.contains(v)) throw WitnessError("W' in W_0", "selected column is outside W_0");

  std::vector<Vector> span = w.vectors;
  span.insert(span.end(), report.u_zero.basis().begin(), report.u_zero.basis().end());
  w.subspace = rref_basis(span, n);
  w.dim = w.subspace.dim();
  w.isotropic_bound = max_isotropic_bound(f);
  w.index = f.s();
  if (!is_totally_isotropic(f, w.subspace)) throw WitnessError("total isotropy", "W' + U_0 is not totally isotropic");
  if (w.dim < 4) throw WitnessError("dimension", "dim(W' + U_0) = " + std::to_string(w.dim) + " < 4");
  if (w.dim > w.isotropic_bound) throw WitnessError("index bound", "dimension exceeds min(p, s)");
  if (w.index < 4) throw WitnessError("index bound", "s < 4");

  const Matrix& bjb = bj.b_block;
  const std::vector<Vector> four = {w.vectors[0], w.vectors[1], wcols * bjb.column(chosen[0]),
                                    wcols * bjb.column(chosen[1])};
  bool rule = rank(Matrix::from_rows(four, n)) == 4;
  for (const auto& v : four) rule = rule && sgn(f(v, v)) == 0;
  rule = rule && sgn(f(four[0], four[1])) == 0 && sgn(f(four[2], four[3])) == 0;
  rule = rule && sgn(f(four[0], four[3])) != 0 && sgn(f(four[1], four[2])) != 0;
  w.pairing_rule_holds = rule;
  return w;
}

}  // namespace flathom
