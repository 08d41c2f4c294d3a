#pragma once

// Command-line front end. Exit codes: 0 all checks pass / verdict true,
// 1 a check failed or verdict false, 2 malformed input.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flathom/affine.hpp"
#include "flathom/centralizer.hpp"
#include "flathom/certify.hpp"
#include "flathom/error.hpp"
#include "flathom/holonomy.hpp"
#include "flathom/io.hpp"
#include "flathom/search.hpp"

namespace flathom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitMalformed = 2;

using io::Json;

struct Options {
  bool json = false;
  std::size_t max_word_length = 4;
  std::string file;
  std::string point;
  std::string signature;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  std::string out_dir;
  unsigned threads = 1;
  std::size_t s_max = 0;
  std::size_t p_max = 5;
  bool theorem = false;
};

namespace detail {

inline std::string vec_str(const Vector& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
  return s + ")";
}

inline void print_subspace(std::ostream& out, const std::string& label, const Subspace& s) {
  out << label << " (dim " << s.dim() << "):";
  if (s.is_zero()) out << " {0}";
  for (const auto& v : s.basis()) out << " " << vec_str(v);
  out << "\n";
}

inline void print_matrix(std::ostream& out, const std::string& label, const Matrix& m) {
  out << label << " (" << m.rows() << "x" << m.cols() << ")" << (m.rows() == 0 || m.cols() == 0 ? " empty" : "") << "\n";
  for (std::size_t i = 0; i < m.rows() && m.cols() > 0; ++i) out << "  " << vec_str(m.row(i)) << "\n";
}

inline Json envelope(const std::string& command, const GroupSpec* spec) {
  Json j{{"schema", io::kSchemaVersion}, {"command", command}};
  if (spec) j["spec"] = spec->name();
  return j;
}

inline Vector parse_point(const std::string& csv, std::size_t n) {
  if (csv.empty()) return zero_vector(n);
  Vector p;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) p.push_back(parse_scalar(item));
  if (p.size() != n) throw ParseError("--point must have " + std::to_string(n) + " coordinates");
  return p;
}

inline std::pair<std::size_t, std::size_t> parse_signature(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("--signature must be P,S");
  auto num = [](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) throw ParseError("bad signature '" + s + "'");
    return static_cast<std::size_t>(std::stoul(s));
  };
  return {num(text.substr(0, comma)), num(text.substr(comma + 1))};
}

inline std::string certificate_path(const std::string& input) {
  std::filesystem::path p(input);
  std::string stem = p.filename().string();
  if (stem.size() > 5 && stem.substr(stem.size() - 5) == ".json") stem.resize(stem.size() - 5);
  return (p.parent_path() / (stem + ".cert.json")).string();
}

// --- commands -------------------------------------------------------------

inline int cmd_check(const GroupSpec& spec, const Options& o, std::ostream& out) {
  bool ok = true;
  Json gens = Json::array();
  if (!o.json) out << "Wolf conditions for " << spec.name() << "\n";
  for (std::size_t i = 0; i < spec.generators().size(); ++i) {
    const WolfReport r = wolf_check(spec.generators()[i]);
    ok = ok && r.passed();
    if (o.json) {
      gens.push_back(io::to_json(r));
    } else {
      out << "generator " << i << ":";
      for (const auto& c : r.conditions) out << "  [" << (c.passed ? "ok" : "FAIL") << "] " << wolf_condition_name(c.condition);
      out << "\n";
      for (const auto& c : r.conditions)
        if (!c.passed) out << "    " << wolf_condition_name(c.condition) << ": " << c.detail << "\n";
    }
  }
  const auto words = words_up_to(spec, o.max_word_length);
  std::size_t failed = 0;
  Json bad = Json::array();
  for (std::size_t w = 0; w < words.size(); ++w) {
    if (satisfies_wolf(words[w])) continue;
    ++failed;
    if (bad.size() < 10) bad.push_back(Json{{"linear", io::to_json(words[w].linear())}, {"translation", io::to_json(words[w].translation())}});
  }
  ok = ok && failed == 0;
  if (o.json) {
    Json j = envelope("check", &spec);
    j["generators"] = gens;
    j["words"] = Json{{"max_length", o.max_word_length}, {"checked", words.size()}, {"failed", failed}, {"failing_examples", bad}};
    j["passed"] = ok;
    out << io::dump(j);
  } else {
    out << "words up to length " << o.max_word_length << ": " << words.size() << " checked, " << failed << " failed\n";
    out << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_report(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const HolonomyReport r = abelian_report(spec, o.max_word_length);
  if (o.json) {
    Json j = envelope("report", &spec);
    j["report"] = io::to_json(r);
    out << io::dump(j);
  } else {
    out << "Holonomy report for " << spec.name() << "\n";
    print_subspace(out, "U_Gamma", r.u_gamma);
    print_subspace(out, "U_Gamma^perp", r.u_gamma_perp);
    print_subspace(out, "U_0", r.u_zero);
    for (std::size_t i = 0; i < 4; ++i)
      out << "criterion " << i + 1 << " (" << criterion_name(static_cast<AbelianCriterion>(i)) << "): " << (r.criteria[i] ? "true" : "false") << "\n";
    out << "linear holonomy: " << (r.abelian ? "abelian" : "NOT abelian") << " (words up to length " << r.word_length << ")\n";
  }
  return kExitOk;
}

inline int cmd_witt(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const WittBasis w = witt_extend(spec.form(), u_zero(spec));
  const bool ok = w.adapted_gram() == w.expected_gram();
  if (o.json) {
    Json j = envelope("witt", &spec);
    j["witt"] = io::to_json(w);
    j["block_shape_ok"] = ok;
    out << io::dump(j);
  } else {
    out << "Witt basis for " << spec.name() << ": dim U_0 = " << w.k << ", dim W_0 = " << w.w_dim << "\n";
    for (std::size_t i = 0; i < w.k; ++i) out << "  u_" << i + 1 << " = " << vec_str(w.u(i)) << "\n";
    for (std::size_t i = 0; i < w.w_dim; ++i) out << "  w_" << i + 1 << " = " << vec_str(w.w(i)) << "\n";
    for (std::size_t i = 0; i < w.k; ++i) out << "  u*_" << i + 1 << " = " << vec_str(w.u_dual(i)) << "\n";
    print_matrix(out, "I~", w.i_tilde);
    out << "adapted Gram block shape: " << (ok ? "ok" : "FAIL") << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_blockform(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const WittBasis w = witt_extend(spec.form(), u_zero(spec));
  bool ok = true;
  Json arr = Json::array();
  if (!o.json) out << "Block form for " << spec.name() << " (k = " << w.k << ", dim W_0 = " << w.w_dim << ")\n";
  for (std::size_t i = 0; i < spec.generators().size(); ++i) {
    const auto& g = spec.generators()[i];
    if (!satisfies_wolf(g)) {
      ok = false;
      if (o.json) arr.push_back(Json{{"generator", i}, {"error", "fails the Wolf conditions"}});
      else out << "generator " << i << ": fails the Wolf conditions, no block form\n";
      continue;
    }
    const BlockForm b = block_form(w, g);
    ok = ok && b.ok();
    if (o.json) {
      Json e = io::to_json(b);
      e["generator"] = i;
      arr.push_back(e);
    } else {
      out << "generator " << i << ": zero pattern " << (b.zero_pattern_ok ? "ok" : "FAIL") << ", C skew "
          << (b.c_skew_ok ? "ok" : "FAIL") << ", B columns isotropic and orthogonal " << (b.b_columns_ok ? "ok" : "FAIL") << "\n";
      print_matrix(out, "  C", b.c_block);
      print_matrix(out, "  B", b.b_block);
    }
  }
  if (o.json) {
    Json j = envelope("blockform", &spec);
    j["witt"] = io::to_json(w);
    j["generators"] = arr;
    j["passed"] = ok;
    out << io::dump(j);
  }
  return ok ? kExitOk : kExitFailed;
}

inline int cmd_orbit(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const Vector p = parse_point(o.point, spec.n());
  const CentralizerAlgebra alg = centralizer_algebra(spec);
  const Subspace tangent = orbit_tangent(alg, p);
  const bool open = tangent.dim() == spec.n();
  if (o.json) {
    Json j = envelope("orbit", &spec);
    j["point"] = io::to_json(p);
    j["centralizer_dim"] = alg.dim();
    j["orbit_dimension"] = tangent.dim();
    j["open"] = open;
    j["tangent"] = io::to_json(tangent);
    out << io::dump(j);
  } else {
    out << "centralizer algebra of " << spec.name() << ": dim " << alg.dim() << "\n";
    out << "orbit dimension at " << vec_str(p) << ": " << tangent.dim() << " of " << spec.n() << "\n";
    out << (open ? "identity component orbit is open at p" : "identity component orbit not open at p") << "\n";
  }
  return open ? kExitOk : kExitFailed;
}

inline int cmd_free(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const auto words = words_up_to(spec, o.max_word_length);
  std::size_t with_fixed = 0;
  Json bad = Json::array();
  std::vector<std::string> lines;
  for (const auto& w : words) {
    if (w.is_identity()) continue;
    if (auto fp = fixed_point_check(w)) {
      ++with_fixed;
      if (bad.size() < 10) {
        bad.push_back(Json{{"linear", io::to_json(w.linear())}, {"translation", io::to_json(w.translation())}, {"fixed_point", io::to_json(*fp)}});
        lines.push_back("  fixed point " + vec_str(*fp) + " of a word with translation " + vec_str(w.translation()));
      }
    }
  }
  const bool ok = with_fixed == 0;
  const std::string scope = "verified up to word length " + std::to_string(o.max_word_length);
  if (o.json) {
    Json j = envelope("free", &spec);
    j["words_checked"] = words.size();
    j["words_with_fixed_point"] = with_fixed;
    j["examples"] = bad;
    j["free"] = ok;
    j["scope"] = scope;
    out << io::dump(j);
  } else {
    out << "fixed-point scan of " << spec.name() << ": " << words.size() << " words, " << with_fixed << " with a fixed point\n";
    for (const auto& l : lines) out << l << "\n";
    out << (ok ? "no fixed points, " : "action is NOT free, ") << scope << "\n";
  }
  return ok ? kExitOk : kExitFailed;
}

inline void print_certificate(std::ostream& out, const IsotropyCertificate& c) {
  out << "translational isotropy certificate for " << c.spec.name() << "\n";
  for (const auto& s : c.chain) out << "  (" << s.id << ") [" << (s.verified ? "ok" : "FAIL") << "] " << s.claim << "\n";
  out << "verdict: " << (c.verdict ? "D is translationally isotropic" : "undetermined by this method") << "\n";
  if (c.failing_criterion) out << "failing criterion: " << *c.failing_criterion << "\n";
  if (c.witness)
    out << "isotropic witness: dim " << c.witness->dim << " totally isotropic subspace, so s >= " << c.witness->dim << " (s = " << c.witness->index << ")\n";
  if (c.witness_error) out << "witness: " << *c.witness_error << "\n";
}

inline int cmd_certify(const GroupSpec& spec, const Options& o, std::ostream& out) {
  const IsotropyCertificate c = translational_isotropy_certificate(spec, o.max_word_length);
  const std::string text = io::dump(io::to_json(c));
  const std::string path = certificate_path(o.file);
  io::write_file(path, text);
  if (o.json) {
    out << text;
  } else {
    print_certificate(out, c);
    out << "written to " << path << "\n";
  }
  return c.verdict ? kExitOk : kExitFailed;
}

inline int cmd_verify(const IsotropyCertificate& c, const Options& o, std::ostream& out) {
  const VerificationResult r = verify_certificate_detailed(c);
  if (o.json) {
    Json j = envelope("verify", &c.spec);
    j["accepted"] = r.accepted;
    j["failures"] = r.failures;
    out << io::dump(j);
  } else {
    out << "certificate for " << c.spec.name() << ": " << (r.accepted ? "ACCEPTED" : "REJECTED") << "\n";
    for (const auto& f : r.failures) out << "  " << f << "\n";
  }
  return r.accepted ? kExitOk : kExitFailed;
}

inline void write_survivors(const SearchReport& r, const std::string& dir) {
  if (dir.empty()) return;
  std::filesystem::create_directories(dir);
  for (const auto& f : r.found)
    io::write_file((std::filesystem::path(dir) / (f.spec.name() + ".json")).string(), io::dump(io::to_json(f.spec)));
}

inline void print_stats(std::ostream& out, const SearchReport& r) {
  out << "signature (" << r.p << "," << r.s << "), budget " << r.budget << ", seed " << r.seed << ":";
  for (const auto& [k, v] : r.stats) out << " " << k << "=" << v;
  out << "\n";
}

inline int cmd_scan(const Options& o, std::ostream& out) {
  SearchOptions so;
  so.threads = o.threads;
  if (o.theorem) {
    const TheoremScanSummary sum = theorem_scan(o.s_max, o.p_max, o.budget, o.seed, so);
    for (const auto& r : sum.per_signature) write_survivors(r, o.out_dir);
    if (o.json) {
      Json per = Json::array();
      for (const auto& r : sum.per_signature) per.push_back(io::to_json(r));
      Json j{{"schema", io::kSchemaVersion}, {"command", "scan"}, {"s_max", sum.s_max}, {"p_max", sum.p_max},
             {"budget", sum.budget}, {"seed", sum.seed}, {"survivors", sum.survivors},
             {"theorem_violations", sum.violations.size()}, {"per_signature", per}};
      out << io::dump(j);
    } else {
      for (const auto& r : sum.per_signature) print_stats(out, r);
      out << "total survivors: " << sum.survivors << "\n";
      if (!sum.violations.empty()) out << "THEOREM VIOLATION: " << sum.violations.size() << " non-abelian survivors with s <= 3\n";
    }
    return sum.violations.empty() ? kExitOk : kExitFailed;
  }
  const auto [p, s] = parse_signature(o.signature);
  if (p + s == 0) throw ParseError("signature must have p + s >= 1");
  const SearchReport r = search_nonabelian(p, s, o.budget, o.seed, so);
  write_survivors(r, o.out_dir);
  const bool violation = s <= 3 && !r.found.empty();
  if (o.json) {
    Json j = io::to_json(r);
    j["theorem_violation"] = violation;
    out << io::dump(j);
  } else {
    print_stats(out, r);
    out << "non-abelian survivors: " << r.found.size() << "\n";
    for (const auto& f : r.found) out << "  " << f.spec.name() << " (open orbit at " << vec_str(f.open_point) << ")\n";
    if (violation) out << "THEOREM VIOLATION: non-abelian survivor with s <= 3 (filter bug?)\n";
  }
  return violation ? kExitFailed : kExitOk;
}

}  // namespace detail

/// Runs one command line (args excludes the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact checks for flat pseudo-Riemannian homogeneous spaces", "flathom"};
  app.require_subcommand(1);
  Options o;
  app.add_flag("--json", o.json, "JSON output");
  app.add_option("--max-word-length", o.max_word_length, "word length for element-wise checks")->check(CLI::NonNegativeNumber);

  auto file_cmd = [&](const char* name, const char* help) {
    auto* c = app.add_subcommand(name, help);
    c->add_option("file", o.file, "group-spec JSON file")->required();
    c->fallthrough();
    return c;
  };
  auto* check = file_cmd("check", "Wolf conditions on generators and words");
  auto* report = file_cmd("report", "holonomy report U_Gamma, U_0, abelianness");
  auto* witt = file_cmd("witt", "Witt basis adapted to U_0");
  auto* blockform = file_cmd("blockform", "per-generator block form");
  auto* orbit = file_cmd("orbit", "centralizer orbit dimension");
  orbit->add_option("--point", o.point, "comma-separated point (default origin)");
  auto* free_cmd = file_cmd("free", "fixed-point scan over words");
  auto* certify = file_cmd("certify", "translational isotropy certificate");
  auto* verify = app.add_subcommand("verify", "re-check a certificate file");
  verify->add_option("certfile", o.file, "certificate JSON file")->required();
  verify->fallthrough();
  auto* scan = app.add_subcommand("scan", "search for non-abelian holonomy");
  scan->fallthrough();
  auto* sig_opt = scan->add_option("--signature", o.signature, "P,S");
  auto* smax_opt = scan->add_option("--s-max", o.s_max, "scan all s <= S_MAX instead of one signature");
  sig_opt->excludes(smax_opt);
  scan->add_option("--p-max", o.p_max, "largest p in an --s-max scan");
  scan->add_option("--budget", o.budget, "trials per signature")->check(CLI::PositiveNumber);
  scan->add_option("--seed", o.seed, "random seed");
  scan->add_option("--out-dir", o.out_dir, "write survivors as group-spec files here");
  scan->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> storage{"flathom"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitMalformed;
  }
  if (scan->parsed() && o.signature.empty() && smax_opt->count() == 0) {
    err << "scan: one of --signature or --s-max is required\n";
    return kExitMalformed;
  }
  o.theorem = smax_opt->count() > 0;

  try {
    if (scan->parsed()) return detail::cmd_scan(o, out);
    if (verify->parsed()) {
      IsotropyCertificate c = [&] {
        try {
          return io::certificate_from_json(io::parse_json_text(io::read_file(o.file)));
        } catch (const std::exception& e) {
          throw ParseError(e.what());
        }
      }();
      return detail::cmd_verify(c, o, out);
    }
    GroupSpec spec = [&] {
      try {
        return io::load_group_spec(o.file);
      } catch (const Error& e) {
        throw ParseError(e.what());
      }
    }();
    if (check->parsed()) return detail::cmd_check(spec, o, out);
    if (report->parsed()) return detail::cmd_report(spec, o, out);
    if (witt->parsed()) return detail::cmd_witt(spec, o, out);
    if (blockform->parsed()) return detail::cmd_blockform(spec, o, out);
    if (orbit->parsed()) return detail::cmd_orbit(spec, o, out);
    if (free_cmd->parsed()) return detail::cmd_free(spec, o, out);
    if (certify->parsed()) return detail::cmd_certify(spec, o, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitMalformed;
}

}  // namespace flathom::cli
