#pragma once

// Affine isometries (I + A, v) of a flat space R^n_s, finite generating sets,
// and the element-wise structure conditions on them.

#include <array>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "flathom/error.hpp"
#include "flathom/form.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

using FormPtr = std::shared_ptr<const BilinearForm>;

inline FormPtr make_form(BilinearForm f) { return std::make_shared<const BilinearForm>(std::move(f)); }

/// x -> L x + v with L preserving the form.
class AffineIso {
 public:
  AffineIso(FormPtr form, Matrix linear, Vector translation)
      : form_(std::move(form)), linear_(std::move(linear)), translation_(std::move(translation)) {
    if (!form_) throw PreconditionError("AffineIso: null form");
    const std::size_t n = form_->n();
    require_dim(linear_.rows() == n && linear_.cols() == n, "AffineIso: linear part has wrong shape");
    require_dim(translation_.size() == n, "AffineIso: translation has wrong length");
    if (linear_.transpose() * form_->gram() * linear_ != form_->gram())
      throw PreconditionError("AffineIso: linear part does not preserve the form");
  }

  static AffineIso identity(FormPtr form) {
    const std::size_t n = form->n();
    return AffineIso(Trusted{}, std::move(form), Matrix::identity(n), zero_vector(n));
  }

  static AffineIso translation(FormPtr form, Vector v) {
    const std::size_t n = form->n();
    require_dim(v.size() == n, "AffineIso::translation: wrong length");
    return AffineIso(Trusted{}, std::move(form), Matrix::identity(n), std::move(v));
  }

  const FormPtr& form_ptr() const { return form_; }
  const BilinearForm& form() const { return *form_; }
  std::size_t n() const { return form_->n(); }
  const Matrix& linear() const { return linear_; }
  const Vector& translation() const { return translation_; }

  // A = L - I.
  Matrix a() const { return linear_ - Matrix::identity(n()); }

  bool is_identity() const { return linear_ == Matrix::identity(n()) && is_zero(translation_); }

  friend bool operator==(const AffineIso& g, const AffineIso& h) {
    return *g.form_ == *h.form_ && g.linear_ == h.linear_ && g.translation_ == h.translation_;
  }

 private:
  struct Trusted {};
  AffineIso(Trusted, FormPtr form, Matrix linear, Vector translation)
      : form_(std::move(form)), linear_(std::move(linear)), translation_(std::move(translation)) {}

  friend AffineIso compose(const AffineIso&, const AffineIso&);
  friend AffineIso inverse(const AffineIso&);

  FormPtr form_;
  Matrix linear_;
  Vector translation_;
};

inline void require_same_form(const AffineIso& g, const AffineIso& h) {
  if (g.form_ptr() != h.form_ptr() && !(g.form() == h.form()))
    throw PreconditionError("affine isometries act on different forms");
}

/// (g o h)(x) = g(h(x)) = L_g L_h x + L_g v_h + v_g.
inline AffineIso compose(const AffineIso& g, const AffineIso& h) {
  require_same_form(g, h);
  return AffineIso(AffineIso::Trusted{}, g.form_ptr(), g.linear() * h.linear(),
                   g.linear() * h.translation() + g.translation());
}

/// (L^-1, -L^-1 v). The inverse of an isometry is G^-1 L^T G.
inline AffineIso inverse(const AffineIso& g) {
  const auto& gram = g.form().gram();
  auto ginv = flathom::inverse(gram);
  Matrix linv = *ginv * g.linear().transpose() * gram;
  Vector t = -(linv * g.translation());
  return AffineIso(AffineIso::Trusted{}, g.form_ptr(), std::move(linv), std::move(t));
}

inline Vector act(const AffineIso& g, const Vector& x) {
  require_dim(x.size() == g.n(), "act: point has wrong length");
  return g.linear() * x + g.translation();
}

/// g^k for any integer k.
inline AffineIso power(const AffineIso& g, long k) {
  AffineIso base = k < 0 ? inverse(g) : g;
  unsigned long e = k < 0 ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
  AffineIso acc = AffineIso::identity(g.form_ptr());
  while (e > 0) {
    if (e & 1UL) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

/// A named finite generating set of a group of isometries of one form.
class GroupSpec {
 public:
  GroupSpec(std::string name, FormPtr form, std::vector<AffineIso> generators)
      : name_(std::move(name)), form_(std::move(form)), generators_(std::move(generators)) {
    if (!form_) throw PreconditionError("GroupSpec: null form");
    for (const auto& g : generators_) {
      if (g.form_ptr() != form_ && !(g.form() == *form_))
        throw PreconditionError("GroupSpec: generator uses a different form");
    }
  }

  const std::string& name() const { return name_; }
  const BilinearForm& form() const { return *form_; }
  const FormPtr& form_ptr() const { return form_; }
  std::size_t n() const { return form_->n(); }
  const std::vector<AffineIso>& generators() const { return generators_; }

  std::vector<Matrix> linear_parts_minus_identity() const {
    std::vector<Matrix> out;
    out.reserve(generators_.size());
    for (const auto& g : generators_) out.push_back(g.a());
    return out;
  }

 private:
  std::string name_;
  FormPtr form_;
  std::vector<AffineIso> generators_;
};

enum class WolfCondition : std::size_t {
  ASquaredZero = 0,
  ATranslationZero,
  ImageTotallyIsotropic,
  TranslationOrthogonalToImage,
  ImageIsKernelPerp,
  KernelIsImagePerp,
};

inline constexpr std::size_t kWolfConditionCount = 6;

inline const char* wolf_condition_name(WolfCondition c) {
  switch (c) {
    case WolfCondition::ASquaredZero: return "A^2=0";
    case WolfCondition::ATranslationZero: return "Av=0";
    case WolfCondition::ImageTotallyIsotropic: return "im A totally isotropic";
    case WolfCondition::TranslationOrthogonalToImage: return "v perp im A";
    case WolfCondition::ImageIsKernelPerp: return "im A=(ker A)^perp";
    case WolfCondition::KernelIsImagePerp: return "ker A=(im A)^perp";
  }
  return "?";
}

struct WolfConditionResult {
  WolfCondition condition{};
  bool passed = true;
  // Offending vectors when the condition fails (e.g. A v, or a non-isotropic pair).
  std::vector<Vector> witness;
  std::string detail;
};

struct WolfReport {
  std::array<WolfConditionResult, kWolfConditionCount> conditions{};

  bool passed() const {
    for (const auto& c : conditions)
      if (!c.passed) return false;
    return true;
  }
  const WolfConditionResult& operator[](WolfCondition c) const { return conditions[static_cast<std::size_t>(c)]; }
};

/// Evaluates all six conditions independently; never throws on failure.
inline WolfReport wolf_check(const AffineIso& g) {
  const BilinearForm& f = g.form();
  const Matrix a = g.a();
  const Vector& v = g.translation();
  WolfReport rep;
  for (std::size_t i = 0; i < kWolfConditionCount; ++i) rep.conditions[i].condition = static_cast<WolfCondition>(i);
  auto& c_sq = rep.conditions[0];
  auto& c_av = rep.conditions[1];
  auto& c_iso = rep.conditions[2];
  auto& c_vperp = rep.conditions[3];
  auto& c_im = rep.conditions[4];
  auto& c_ker = rep.conditions[5];

  const Matrix a2 = a * a;
  for (std::size_t j = 0; j < a2.cols() && c_sq.passed; ++j) {
    Vector col = a2.column(j);
    if (!is_zero(col)) {
      c_sq.passed = false;
      c_sq.witness = {unit_vector(g.n(), j), col};
      c_sq.detail = "A^2 e_" + std::to_string(j) + " != 0";
    }
  }

  const Vector av = a * v;
  if (!is_zero(av)) {
    c_av.passed = false;
    c_av.witness = {av};
    c_av.detail = "A v != 0";
  }

  const Subspace im = image(a);
  const Subspace ker = kernel(a);
  const auto& ib = im.basis();
  for (std::size_t i = 0; i < ib.size() && c_iso.passed; ++i)
    for (std::size_t j = i; j < ib.size(); ++j)
      if (sgn(f(ib[i], ib[j])) != 0) {
        c_iso.passed = false;
        c_iso.witness = {ib[i], ib[j]};
        c_iso.detail = "<x,y> = " + to_string(f(ib[i], ib[j])) + " for image basis vectors";
        break;
      }

  for (const auto& x : ib) {
    if (sgn(f(v, x)) != 0) {
      c_vperp.passed = false;
      c_vperp.witness = {x};
      c_vperp.detail = "<v,x> = " + to_string(f(v, x));
      break;
    }
  }

  const Subspace ker_perp = orth_complement(f, ker);
  if (!(im == ker_perp)) {
    c_im.passed = false;
    c_im.witness = ker_perp.basis();
    c_im.detail = "dim im A = " + std::to_string(im.dim()) + ", dim (ker A)^perp = " + std::to_string(ker_perp.dim());
  }
  const Subspace im_perp = orth_complement(f, im);
  if (!(ker == im_perp)) {
    c_ker.passed = false;
    c_ker.witness = im_perp.basis();
    c_ker.detail = "dim ker A = " + std::to_string(ker.dim()) + ", dim (im A)^perp = " + std::to_string(im_perp.dim());
  }
  return rep;
}

/// Same verdict as wolf_check(g).passed(), stopping at the first failure.
inline bool satisfies_wolf(const AffineIso& g) {
  const Matrix a = g.a();
  if (!(a * a).is_zero()) return false;
  if (!is_zero(a * g.translation())) return false;
  const BilinearForm& f = g.form();
  const Subspace im = image(a);
  if (!is_totally_isotropic(f, im)) return false;
  for (const auto& x : im.basis())
    if (sgn(f(g.translation(), x)) != 0) return false;
  const Subspace ker = kernel(a);
  return im == orth_complement(f, ker) && ker == orth_complement(f, im);
}

namespace detail {

struct AffineLess {
  bool operator()(const AffineIso& x, const AffineIso& y) const {
    const auto& a = x.linear().entries();
    const auto& b = y.linear().entries();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const int c = cmp(a[i], b[i]);
      if (c != 0) return c < 0;
    }
    const auto& u = x.translation();
    const auto& v = y.translation();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const int c = cmp(u[i], v[i]);
      if (c != 0) return c < 0;
    }
    return false;
  }
};

}  // namespace detail

inline constexpr std::size_t kDefaultWordCap = 200000;

/// All distinct products of at most `max_length` generators and inverses,
/// identity first, then in breadth-first order of first appearance.
inline std::vector<AffineIso> words_up_to(const GroupSpec& spec, std::size_t max_length,
                                          std::size_t cap = kDefaultWordCap) {
  std::vector<AffineIso> letters;
  for (const auto& g : spec.generators()) {
    letters.push_back(g);
    letters.push_back(inverse(g));
  }
  std::vector<AffineIso> out{AffineIso::identity(spec.form_ptr())};
  std::set<AffineIso, detail::AffineLess> seen(out.begin(), out.end());
  std::size_t frontier_begin = 0;
  for (std::size_t len = 1; len <= max_length; ++len) {
    const std::size_t frontier_end = out.size();
    for (std::size_t w = frontier_begin; w < frontier_end; ++w) {
      for (const auto& l : letters) {
        AffineIso next = compose(out[w], l);
        if (seen.insert(next).second) {
          out.push_back(std::move(next));
          if (out.size() > cap) throw Error("words_up_to: word budget of " + std::to_string(cap) + " exceeded");
        }
      }
    }
    frontier_begin = frontier_end;
    if (frontier_begin == out.size()) break;
  }
  return out;
}

/// Canonical solution of A x = -v, i.e. a point with g x = x.
inline std::optional<Vector> fixed_point_check(const AffineIso& g) { return solve_linear(g.a(), -g.translation()); }

}  // namespace flathom
