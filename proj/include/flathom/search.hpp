#pragma once

// Randomized generation of generator sets that satisfy the element-wise
// structure conditions, built directly in Witt-block coordinates, and the
// search for non-abelian holonomy in a given signature.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "flathom/affine.hpp"
#include "flathom/centralizer.hpp"
#include "flathom/error.hpp"
#include "flathom/form.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/linalg.hpp"

namespace flathom {

/// Stream of trial seeds: splitmix64 of (seed, index).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// mt19937_64 with a portable bounded draw (std distributions are not
/// specified bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform integer in [lo, hi].
  long uniform(long lo, long hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do x = eng_(); while (x >= limit);
    return lo + static_cast<long>(x % span);
  }

  bool chance(long num, long den) { return uniform(0, den - 1) < num; }

 private:
  std::mt19937_64 eng_;
};

struct SampleOptions {
  long entry_bound = 2;
  std::size_t generator_count = 2;
  std::optional<std::size_t> k;  // dim of the U0 block; random in [0, min(p,s)] when unset
  bool require_nonzero_b = false;
};

namespace search_detail {

// Nonzero integer vectors with entries in [-b, b] that are isotropic for
// diag(+1 x p, -1 x s). Cached per (p, s, b).
inline const std::vector<Vector>& isotropic_pool(std::size_t p, std::size_t s, long b) {
  static std::mutex mu;
  static std::map<std::tuple<std::size_t, std::size_t, long>, std::vector<Vector>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, s, b);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  std::vector<Vector> pool;
  const std::size_t m = p + s;
  if (p > 0 && s > 0) {
    std::vector<long> x(m, -b);
    while (true) {
      long q = 0;
      bool nonzero = false;
      for (std::size_t i = 0; i < m; ++i) {
        q += (i < p ? 1 : -1) * x[i] * x[i];
        nonzero = nonzero || x[i] != 0;
      }
      if (q == 0 && nonzero) {
        Vector v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = x[i];
        pool.push_back(std::move(v));
      }
      std::size_t i = 0;
      while (i < m && x[i] == b) x[i++] = -b;
      if (i == m) break;
      ++x[i];
    }
  }
  return cache.emplace(key, std::move(pool)).first->second;
}

inline Scalar diag_pair(std::size_t p, const Vector& x, const Vector& y) {
  Scalar r = 0;
  for (std::size_t i = 0; i < x.size(); ++i) r += (i < p ? 1 : -1) * x[i] * y[i];
  return r;
}

}  // namespace search_detail

/// Gram [[0,0,I_k],[0,I~,0],[I_k,0,0]] with I~ = diag(+1 x (p-k), -1 x (s-k)).
inline Matrix witt_standard_gram(std::size_t p, std::size_t s, std::size_t k) {
  const std::size_t n = p + s;
  const std::size_t m = n - 2 * k;
  Matrix g(n, n);
  for (std::size_t i = 0; i < k; ++i) {
    g(i, k + m + i) = 1;
    g(k + m + i, i) = 1;
  }
  for (std::size_t i = 0; i < m; ++i) g(k + i, k + i) = i < p - k ? 1 : -1;
  return g;
}

/// Draws a generator set in block coordinates: for each generator, C is a
/// random skew k x k matrix and the columns of B are mutually orthogonal
/// isotropic vectors of I~; A = [[0, -B^T I~, C], [0, 0, B], [0, 0, 0]].
/// Translations are random integer combinations of the common kernel of the
/// A's, so every translation part is killed by every linear part.
inline GroupSpec sample_generators(std::size_t p, std::size_t s, std::uint64_t seed, const SampleOptions& opt = {}) {
  if (opt.entry_bound < 1) throw PreconditionError("sample_generators: entry bound must be at least 1");
  if (p + s == 0) throw PreconditionError("sample_generators: empty signature");
  Rng rng(seed);
  const long b = opt.entry_bound;
  const std::size_t kmax = std::min(p, s);
  std::size_t k = opt.k ? *opt.k : static_cast<std::size_t>(rng.uniform(0, static_cast<long>(kmax)));
  if (k > kmax) throw PreconditionError("sample_generators: k exceeds min(p, s)");
  const std::size_t n = p + s;
  const std::size_t m = n - 2 * k;
  const std::size_t wp = p - k;
  const auto& pool = search_detail::isotropic_pool(wp, s - k, b);
  if (opt.require_nonzero_b && (k == 0 || pool.empty()))
    throw PreconditionError("sample_generators: W_0 has no nonzero isotropic vectors, B must vanish");

  const FormPtr form = make_form(BilinearForm(witt_standard_gram(p, s, k), p, s));
  const Matrix& gram = form->gram();
  Matrix itilde = gram.block(k, k, m, m);

  std::vector<Matrix> as;
  for (std::size_t g = 0; g < opt.generator_count; ++g) {
    Matrix bm(m, k);
    std::vector<Vector> cols;
    for (std::size_t j = 0; j < k; ++j) {
      if (pool.empty() || rng.chance(1, 3)) continue;
      std::vector<const Vector*> ok;
      for (const auto& v : pool) {
        bool orth = true;
        for (const auto& c : cols)
          if (sgn(search_detail::diag_pair(wp, v, c)) != 0) {
            orth = false;
            break;
          }
        if (orth) ok.push_back(&v);
      }
      if (ok.empty()) continue;
      const Vector& pick = *ok[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(ok.size()) - 1))];
      cols.push_back(pick);
      for (std::size_t i = 0; i < m; ++i) bm(i, j) = pick[i];
    }
    if (opt.require_nonzero_b && bm.is_zero()) {
      // Force one nonzero column so the request is honoured.
      const Vector& pick = pool[static_cast<std::size_t>(rng.uniform(0, static_cast<long>(pool.size()) - 1))];
      for (std::size_t i = 0; i < m; ++i) bm(i, 0) = pick[i];
    }
    Matrix c(k, k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        c(i, j) = rng.uniform(-b, b);
        c(j, i) = -c(i, j);
      }
    Matrix a(n, n);
    const Matrix top = -(bm.transpose() * itilde);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < m; ++j) a(i, k + j) = top(i, j);
      for (std::size_t j = 0; j < k; ++j) a(i, k + m + j) = c(i, j);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < k; ++j) a(k + i, k + m + j) = bm(i, j);
    as.push_back(std::move(a));
  }

  Matrix stacked(0, n);
  for (const auto& a : as) stacked = vstack(stacked, a);
  const Subspace ker = as.empty() ? Subspace::full(n) : kernel(stacked);

  std::vector<AffineIso> gens;
  for (const auto& a : as) {
    Vector v = zero_vector(n);
    for (const auto& kb : ker.basis()) v = v + Scalar(rng.uniform(-b, b)) * kb;
    gens.emplace_back(form, Matrix::identity(n) + a, std::move(v));
  }
  return GroupSpec("sample_p" + std::to_string(p) + "_s" + std::to_string(s) + "_k" + std::to_string(k), form,
                   std::move(gens));
}

/// Any ordered generator pair with A_i A_j != 0.
inline bool has_nonvanishing_product(const GroupSpec& spec) {
  const auto as = spec.linear_parts_minus_identity();
  for (const auto& x : as)
    for (const auto& y : as)
      if (!(x * y).is_zero()) return true;
  return false;
}

struct SearchOptions {
  SampleOptions sample;
  std::size_t word_length = 3;
  std::size_t extra_orbit_points = 2;  // random points tried after the origin
  long point_bound = 3;
  unsigned threads = 1;
};

enum class TrialOutcome { GeneratorWolfFailed, Abelian, WordWolfFailed, OrbitNotOpen, Survivor };

inline const char* outcome_name(TrialOutcome o) {
  switch (o) {
    case TrialOutcome::GeneratorWolfFailed: return "generator_wolf_failed";
    case TrialOutcome::Abelian: return "abelian";
    case TrialOutcome::WordWolfFailed: return "word_wolf_failed";
    case TrialOutcome::OrbitNotOpen: return "orbit_not_open";
    case TrialOutcome::Survivor: return "survivor";
  }
  return "?";
}

struct Survivor {
  std::size_t trial = 0;
  std::uint64_t trial_seed = 0;
  Vector open_point;  // point where the centralizer orbit is open
  GroupSpec spec;
};

struct SearchReport {
  std::size_t p = 0;
  std::size_t s = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::vector<Survivor> found;
  std::map<std::string, std::size_t> stats;  // outcome name -> count
};

/// Point at which the identity component of the centralizer has an open
/// orbit, trying the origin first and then `extra` random points.
inline std::optional<Vector> find_open_orbit_point(const GroupSpec& spec, Rng& rng, std::size_t extra, long bound) {
  const CentralizerAlgebra alg = centralizer_algebra(spec);
  const std::size_t n = spec.n();
  Vector p = zero_vector(n);
  for (std::size_t attempt = 0; attempt <= extra; ++attempt) {
    if (attempt > 0)
      for (auto& x : p) x = rng.uniform(-bound, bound);
    if (orbit_dimension(alg, p) == n) return p;
  }
  return std::nullopt;
}

struct TrialResult {
  TrialOutcome outcome{};
  std::optional<Survivor> survivor;
};

/// One search trial. Abelian candidates are tallied before the word and
/// orbit filters, which only matter for potential survivors.
inline TrialResult run_trial(std::size_t p, std::size_t s, std::uint64_t seed, std::size_t trial,
                             const SearchOptions& opt) {
  const std::uint64_t ts = derive_seed(seed, trial);
  GroupSpec spec = sample_generators(p, s, ts, opt.sample);
  for (const auto& g : spec.generators())
    if (!satisfies_wolf(g)) return {TrialOutcome::GeneratorWolfFailed, {}};
  if (!has_nonvanishing_product(spec)) return {TrialOutcome::Abelian, {}};
  for (const auto& w : words_up_to(spec, opt.word_length))
    if (!satisfies_wolf(w)) return {TrialOutcome::WordWolfFailed, {}};
  Rng prng(derive_seed(ts, 0xC0FFEE));
  auto point = find_open_orbit_point(spec, prng, opt.extra_orbit_points, opt.point_bound);
  if (!point) return {TrialOutcome::OrbitNotOpen, {}};
  GroupSpec named("nonabelian_p" + std::to_string(p) + "_s" + std::to_string(s) + "_seed" + std::to_string(seed) +
                      "_trial" + std::to_string(trial),
                  spec.form_ptr(), spec.generators());
  return {TrialOutcome::Survivor, Survivor{trial, ts, std::move(*point), std::move(named)}};
}

inline SearchReport search_nonabelian(std::size_t p, std::size_t s, std::size_t budget, std::uint64_t seed,
                                      const SearchOptions& opt = {}) {
  if (budget < 1) throw PreconditionError("search_nonabelian: budget must be at least 1");
  std::vector<std::optional<TrialResult>> results(budget);
  const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(budget)));
  auto worker = [&](unsigned t) {
    for (std::size_t i = t; i < budget; i += threads) results[i] = run_trial(p, s, seed, i, opt);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
  }

  SearchReport rep{p, s, budget, seed, {}, {}};
  for (auto o : {TrialOutcome::GeneratorWolfFailed, TrialOutcome::Abelian, TrialOutcome::WordWolfFailed,
                 TrialOutcome::OrbitNotOpen, TrialOutcome::Survivor})
    rep.stats[outcome_name(o)] = 0;
  for (auto& r : results) {
    ++rep.stats[outcome_name(r->outcome)];
    if (r->survivor) rep.found.push_back(std::move(*r->survivor));
  }
  return rep;
}

struct TheoremScanSummary {
  std::size_t s_max = 0;
  std::size_t p_max = 0;
  std::size_t budget = 0;
  std::uint64_t seed = 0;
  std::vector<SearchReport> per_signature;
  std::size_t survivors = 0;
  // Survivors at s <= 3 would contradict the index bound; they point at a
  // filter bug and are kept for inspection.
  std::vector<GroupSpec> violations;
};

/// search_nonabelian over every signature (p, s) with s <= s_max and p <= p_max.
inline TheoremScanSummary theorem_scan(std::size_t s_max, std::size_t p_max, std::size_t budget, std::uint64_t seed,
                                       const SearchOptions& opt = {}) {
  TheoremScanSummary sum{s_max, p_max, budget, seed, {}, 0, {}};
  for (std::size_t s = 0; s <= s_max; ++s)
    for (std::size_t p = 0; p <= p_max; ++p) {
      if (p + s == 0) continue;
      SearchReport r = search_nonabelian(p, s, budget, derive_seed(seed, p * 1000 + s), opt);
      sum.survivors += r.found.size();
      if (s <= 3)
        for (const auto& f : r.found) sum.violations.push_back(f.spec);
      sum.per_signature.push_back(std::move(r));
    }
  return sum;
}

}  // namespace flathom
