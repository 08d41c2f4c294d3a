#pragma once

// JSON encoding of group-spec files, reports and certificates. Rationals are
// written as strings ("3", "-1/2"); on input integers and such strings are
// accepted, floats are rejected.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flathom/affine.hpp"
#include "flathom/centralizer.hpp"
#include "flathom/certify.hpp"
#include "flathom/error.hpp"
#include "flathom/form.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/linalg.hpp"
#include "flathom/search.hpp"

namespace flathom::io {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

inline Json to_json(const Scalar& q) { return to_string(q); }

inline Scalar scalar_from_json(const Json& j) {
  if (j.is_number_integer()) {
    return j.is_number_unsigned() ? parse_scalar(std::to_string(j.get<unsigned long long>()))
                                  : parse_scalar(std::to_string(j.get<long long>()));
  }
  if (j.is_number_float()) throw ParseError("floating point entry " + j.dump() + " (use an integer or \"num/den\")");
  if (j.is_string()) return parse_scalar(j.get<std::string>());
  throw ParseError("expected a rational, got " + j.dump());
}

inline Json to_json(const Vector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_json(x));
  return a;
}

inline Vector vector_from_json(const Json& j, std::optional<std::size_t> len = std::nullopt) {
  if (!j.is_array()) throw ParseError("expected an array, got " + j.dump());
  Vector v;
  for (const auto& x : j) v.push_back(scalar_from_json(x));
  if (len && v.size() != *len)
    throw ParseError("expected a vector of length " + std::to_string(*len) + ", got " + std::to_string(v.size()));
  return v;
}

inline Json to_json(const Matrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(to_json(m.row(i)));
  return a;
}

inline Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols) {
  if (!j.is_array() || j.size() != rows)
    throw ParseError("expected a matrix with " + std::to_string(rows) + " rows");
  std::vector<Vector> r;
  for (const auto& row : j) r.push_back(vector_from_json(row, cols));
  return Matrix::from_rows(r, cols);
}

inline Json basis_json(std::size_t ambient, const std::vector<Vector>& basis) {
  Json b = Json::array();
  for (const auto& v : basis) b.push_back(to_json(v));
  return Json{{"ambient_dim", ambient}, {"dim", basis.size()}, {"basis", b}};
}

inline Json to_json(const Subspace& s) { return basis_json(s.ambient_dim(), s.basis()); }
inline Json to_json(const BasisList& s) { return basis_json(s.ambient_dim, s.vectors); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  return j.at(key);
}

inline std::size_t count_from_json(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) throw ParseError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

inline bool bool_from_json(const Json& j, const char* what) {
  if (!j.is_boolean()) throw ParseError(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

inline BasisList basis_list_from_json(const Json& j) {
  BasisList b;
  b.ambient_dim = count_from_json(field(j, "ambient_dim"), "ambient_dim");
  const Json& rows = field(j, "basis");
  if (!rows.is_array()) throw ParseError("basis must be an array");
  for (const auto& r : rows) b.vectors.push_back(vector_from_json(r, b.ambient_dim));
  return b;
}

// ---------------------------------------------------------------------------
// Group-spec files

inline Json to_json(const GroupSpec& spec) {
  Json gens = Json::array();
  for (const auto& g : spec.generators())
    gens.push_back(Json{{"linear", to_json(g.linear())}, {"translation", to_json(g.translation())}});
  return Json{{"name", spec.name()},
              {"dim", spec.n()},
              {"signature", Json::array({spec.form().p(), spec.form().s()})},
              {"gram", to_json(spec.form().gram())},
              {"generators", gens}};
}

/// Parses a group-spec document. Structural problems raise ParseError; a
/// degenerate or mis-declared Gram matrix or a non-isometric generator raises
/// PreconditionError.
inline GroupSpec group_spec_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("group spec must be a JSON object");
  const Json& name_j = field(j, "name");
  if (!name_j.is_string()) throw ParseError("name must be a string");
  const std::size_t n = count_from_json(field(j, "dim"), "dim");
  if (n == 0) throw ParseError("dim must be positive");
  const Json& sig = field(j, "signature");
  if (!sig.is_array() || sig.size() != 2) throw ParseError("signature must be [p, s]");
  const std::size_t p = count_from_json(sig[0], "p");
  const std::size_t s = count_from_json(sig[1], "s");
  if (p + s != n) throw ParseError("signature does not add up to dim");
  FormPtr form = (j.contains("gram") && !j.at("gram").is_null())
                     ? make_form(BilinearForm(matrix_from_json(j.at("gram"), n, n), p, s))
                     : make_form(standard_form(p, s));
  std::vector<AffineIso> gens;
  const Json& gj = field(j, "generators");
  if (!gj.is_array()) throw ParseError("generators must be an array");
  for (const auto& g : gj)
    gens.emplace_back(form, matrix_from_json(field(g, "linear"), n, n), vector_from_json(field(g, "translation"), n));
  return GroupSpec(name_j.get<std::string>(), form, std::move(gens));
}

inline Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

inline GroupSpec load_group_spec(const std::string& path) { return group_spec_from_json(parse_json_text(read_file(path))); }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const WolfReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions) {
    Json e{{"condition", wolf_condition_name(c.condition)}, {"passed", c.passed}};
    if (!c.passed) {
      Json w = Json::array();
      for (const auto& v : c.witness) w.push_back(to_json(v));
      e["witness"] = w;
      e["detail"] = c.detail;
    }
    conds.push_back(e);
  }
  return Json{{"passed", r.passed()}, {"conditions", conds}};
}

inline Json criteria_json(const std::array<bool, 4>& c) {
  Json j = Json::object();
  for (std::size_t i = 0; i < 4; ++i) j[criterion_name(static_cast<AbelianCriterion>(i))] = c[i];
  return j;
}

inline Json to_json(const HolonomyReport& r) {
  Json j{{"u_gamma", to_json(r.u_gamma)},
         {"u_gamma_perp", to_json(r.u_gamma_perp)},
         {"u_zero", to_json(r.u_zero)},
         {"criteria", criteria_json(r.criteria)},
         {"abelian", r.abelian},
         {"word_length", r.word_length}};
  if (r.nonvanishing_pair) j["nonvanishing_pair"] = Json::array({r.nonvanishing_pair->first, r.nonvanishing_pair->second});
  return j;
}

inline Json to_json(const WittBasis& w) {
  return Json{{"k", w.k}, {"w_dim", w.w_dim}, {"change_of_basis", to_json(w.change_of_basis)},
              {"i_tilde", to_json(w.i_tilde)}, {"adapted_gram", to_json(w.adapted_gram())}};
}

inline Json to_json(const BlockForm& b) {
  return Json{{"conjugated", to_json(b.conjugated)}, {"b_block", to_json(b.b_block)}, {"c_block", to_json(b.c_block)},
              {"zero_pattern_ok", b.zero_pattern_ok}, {"c_skew_ok", b.c_skew_ok}, {"b_columns_ok", b.b_columns_ok}};
}

inline Json to_json(const IsotropicWitness& w) {
  Json vecs = Json::array();
  for (const auto& v : w.vectors) vecs.push_back(to_json(v));
  return Json{{"pair", Json::array({w.pair.first, w.pair.second})},
              {"columns", Json::array({w.columns.first, w.columns.second})},
              {"vectors", vecs},
              {"subspace", to_json(w.subspace)},
              {"dim", w.dim},
              {"isotropic_bound", w.isotropic_bound},
              {"index", w.index},
              {"pairing_rule_holds", w.pairing_rule_holds}};
}

inline IsotropicWitness witness_from_json(const Json& j) {
  IsotropicWitness w;
  const Json& pr = field(j, "pair");
  const Json& cl = field(j, "columns");
  if (!pr.is_array() || pr.size() != 2 || !cl.is_array() || cl.size() != 2) throw ParseError("witness pair/columns malformed");
  w.pair = {count_from_json(pr[0], "pair"), count_from_json(pr[1], "pair")};
  w.columns = {count_from_json(cl[0], "columns"), count_from_json(cl[1], "columns")};
  const BasisList sub = basis_list_from_json(field(j, "subspace"));
  const Json& vs = field(j, "vectors");
  if (!vs.is_array()) throw ParseError("witness vectors malformed");
  for (const auto& v : vs) w.vectors.push_back(vector_from_json(v, sub.ambient_dim));
  w.subspace = rref_basis(sub.vectors, sub.ambient_dim);
  w.dim = count_from_json(field(j, "dim"), "dim");
  w.isotropic_bound = count_from_json(field(j, "isotropic_bound"), "isotropic_bound");
  w.index = count_from_json(field(j, "index"), "index");
  w.pairing_rule_holds = bool_from_json(field(j, "pairing_rule_holds"), "pairing_rule_holds");
  return w;
}

inline Json centralizer_json(const CentralizerAlgebra& alg) {
  Json b = Json::array();
  for (const auto& e : alg.basis) b.push_back(Json{{"x", to_json(e.x)}, {"w", to_json(e.w)}});
  return Json{{"dim", alg.dim()}, {"basis", b}};
}

// ---------------------------------------------------------------------------
// Certificates

inline Json to_json(const IsotropyCertificate& c) {
  Json chain = Json::array();
  for (const auto& s : c.chain)
    chain.push_back(Json{{"id", s.id}, {"claim", s.claim}, {"reference", s.reference}, {"verified", s.verified}});
  const auto& ev = c.abelian_evidence;
  Json j{{"schema", kSchemaVersion},
         {"kind", "isotropy_certificate"},
         {"spec", to_json(c.spec)},
         {"abelian_evidence",
          Json{{"u_gamma", to_json(ev.u_gamma)},
               {"u_gamma_perp", to_json(ev.u_gamma_perp)},
               {"u_zero", to_json(ev.u_zero)},
               {"criteria", criteria_json(ev.criteria)},
               {"abelian", ev.abelian}}},
         {"t_lower", to_json(c.t_lower)},
         {"chain", chain},
         {"verdict", c.verdict}};
  if (c.failing_criterion) j["failing_criterion"] = *c.failing_criterion;
  if (c.witness) j["witness"] = to_json(*c.witness);
  if (c.witness_error) j["witness_error"] = *c.witness_error;
  if (!c.verdict) j["note"] = "translational isotropy undetermined by this method for non-abelian holonomy";
  return j;
}

inline IsotropyCertificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("certificate must be a JSON object");
  if (field(j, "schema") != kSchemaVersion) throw ParseError("unsupported certificate schema");
  if (field(j, "kind") != "isotropy_certificate") throw ParseError("not an isotropy certificate");
  GroupSpec spec = group_spec_from_json(field(j, "spec"));
  const Json& ev = field(j, "abelian_evidence");
  HolonomyEvidence evidence;
  evidence.u_gamma = basis_list_from_json(field(ev, "u_gamma"));
  evidence.u_gamma_perp = basis_list_from_json(field(ev, "u_gamma_perp"));
  evidence.u_zero = basis_list_from_json(field(ev, "u_zero"));
  const Json& cr = field(ev, "criteria");
  for (std::size_t i = 0; i < 4; ++i) {
    const char* name = criterion_name(static_cast<AbelianCriterion>(i));
    evidence.criteria[i] = bool_from_json(field(cr, name), name);
  }
  evidence.abelian = bool_from_json(field(ev, "abelian"), "abelian");
  IsotropyCertificate c{std::move(spec), std::move(evidence), basis_list_from_json(field(j, "t_lower")), {}, false, {}, {}, {}};
  const Json& chain = field(j, "chain");
  if (!chain.is_array()) throw ParseError("chain must be an array");
  for (const auto& s : chain) {
    auto str = [&](const char* k) {
      const Json& v = field(s, k);
      if (!v.is_string()) throw ParseError(std::string(k) + " must be a string");
      return v.get<std::string>();
    };
    c.chain.push_back({str("id"), str("claim"), str("reference"), bool_from_json(field(s, "verified"), "verified")});
  }
  c.verdict = bool_from_json(field(j, "verdict"), "verdict");
  if (j.contains("failing_criterion")) c.failing_criterion = j.at("failing_criterion").get<std::string>();
  if (j.contains("witness")) c.witness = witness_from_json(j.at("witness"));
  if (j.contains("witness_error")) c.witness_error = j.at("witness_error").get<std::string>();
  return c;
}

// ---------------------------------------------------------------------------
// Search

inline Json to_json(const SearchReport& r) {
  Json found = Json::array();
  for (const auto& f : r.found)
    found.push_back(Json{{"trial", f.trial}, {"trial_seed", std::to_string(f.trial_seed)},
                         {"open_point", to_json(f.open_point)}, {"spec", to_json(f.spec)}});
  Json stats = Json::object();
  for (const auto& [k, v] : r.stats) stats[k] = v;
  return Json{{"schema", kSchemaVersion}, {"kind", "search_report"}, {"signature", Json::array({r.p, r.s})},
              {"budget", r.budget}, {"seed", r.seed}, {"stats", stats}, {"found", found}};
}

}  // namespace flathom::io
