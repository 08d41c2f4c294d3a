// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. All comparisons are exact.

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

#ifndef FLATHOM_CLI_PATH
#error "FLATHOM_CLI_PATH must be defined"
#endif

namespace fs = std::filesystem;
using namespace flathom;

namespace {

constexpr std::uint64_t kSampleSeed = 1;
constexpr std::size_t kSampleCount = 1000;
constexpr std::uint64_t kScanSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;
  std::vector<std::string> problems;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    if (problems.size() < 5) problems.push_back(what);
  }
};

struct Corpus {
  std::vector<std::pair<std::string, GroupSpec>> fixtures;  // all fixtures, by file name
  std::vector<testing::SampledSpec> samples;
  double sample_seconds = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string tag(const testing::SampledSpec& s) { return s.spec.name() + " (seed " + std::to_string(s.seed) + ")"; }

// Every spec in the corpus, labelled.
void for_each_spec(const Corpus& c, const std::function<void(const std::string&, const GroupSpec&)>& f) {
  for (const auto& [name, spec] : c.fixtures) f(name, spec);
  for (const auto& s : c.samples) f(tag(s), s.spec);
}

Outcome criterion1(const Corpus& c) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t reports = 0;
  for_each_spec(c, [&](const std::string& name, const GroupSpec& spec) {
    const HolonomyReport r = evaluate_criteria(spec, 4);
    ++reports;
    o.check(r.criteria_agree(), name + ": criteria disagree");
  });
  const double secs = seconds_since(t0) + c.sample_seconds;
  o.check(c.samples.size() >= 1000, "fewer than 1000 samples");
  o.check(secs < 120.0, "took " + std::to_string(secs) + " s");
  std::ostringstream d;
  d << reports << " reports (" << c.samples.size() << " samples + " << c.fixtures.size() << " fixtures), four criteria agree; "
    << static_cast<int>(secs) << " s including sampling";
  o.detail = d.str();
  return o;
}

Outcome criterion2(const Corpus& c) {
  Outcome o;
  std::size_t specs = 0, words = 0;
  for_each_spec(c, [&](const std::string& name, const GroupSpec& spec) {
    if (!evaluate_criteria(spec, 4).abelian) return;
    ++specs;
    for (const auto& w : words_up_to(spec, 4)) {
      ++words;
      o.check(wolf_check(w).passed(), name + ": a word of length <= 4 fails the Wolf conditions");
    }
    for (const auto& g : spec.generators())
      for (long k = -10; k <= 10; ++k) {
        const AffineIso gk = power(g, k);
        // Independent: repeated composition.
        AffineIso rep = AffineIso::identity(spec.form_ptr());
        const AffineIso step = k < 0 ? inverse(g) : g;
        for (long i = 0; i < (k < 0 ? -k : k); ++i) rep = compose(rep, step);
        o.check(gk == rep, name + ": power disagrees with repeated composition");
        o.check(gk.linear() == Matrix::identity(spec.n()) + Scalar(k) * g.a() && gk.translation() == Scalar(k) * g.translation(),
                name + ": g^" + std::to_string(k) + " != (I + kA, kv)");
      }
  });
  o.detail = std::to_string(specs) + " abelian specs, " + std::to_string(words) + " words checked, powers |k| <= 10 exact";
  return o;
}

Outcome criterion3(const Corpus& c) {
  Outcome o;
  const GroupSpec quad = testing::load_fixture("quad22.json");
  const BlockForm bq = block_form(quad, quad.generators()[0]);
  o.check(bq.c_block == Matrix::from_rows({{0, -1}, {1, 0}}), "quad22: C != [[0,-1],[1,0]]");
  o.check(bq.b_block.rows() == 0 && bq.witt.w_dim == 0, "quad22: B not empty");
  o.check(bq.ok(), "quad22: block flags");
  const GroupSpec wolf = testing::load_fixture("wolf42.json");
  const BlockForm bw = block_form(wolf, wolf.generators()[0]);
  o.check(bw.c_block == Matrix::from_rows({{0, 1}, {-1, 0}}), "wolf42: C != [[0,1],[-1,0]]");
  o.check(bw.b_block == Matrix::zero(2, 2), "wolf42: B != 0");
  o.check(bw.ok(), "wolf42: block flags");
  std::size_t blocks = 0;
  for (const auto& s : c.samples) {
    const WittBasis witt = witt_extend(s.spec.form(), u_zero(s.spec));
    for (const auto& g : s.spec.generators()) {
      const BlockForm b = block_form(witt, g);
      ++blocks;
      o.check(b.c_block.is_skew(), tag(s) + ": C not skew");
      o.check((b.b_block.transpose() * witt.i_tilde * b.b_block).is_zero(), tag(s) + ": B^T I~ B != 0");
      o.check(b.zero_pattern_ok, tag(s) + ": zero pattern");
    }
  }
  o.detail = "fixture blocks exact; " + std::to_string(blocks) + " sampled generators have C skew and B^T I~ B = 0";
  return o;
}

Outcome criterion4() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t small_trials = 0, small_survivors = 0;
  for (std::size_t s = 1; s <= 3; ++s)
    for (std::size_t p = 0; p <= 5; ++p) {
      const SearchReport r = search_nonabelian(p, s, 10000, derive_seed(kScanSeed, p * 1000 + s));
      small_trials += r.budget;
      small_survivors += r.found.size();
      o.check(r.found.empty(), "survivor at signature (" + std::to_string(p) + "," + std::to_string(s) + ")");
    }
  const SearchReport big = search_nonabelian(4, 4, 100000, kScanSeed);
  o.check(!big.found.empty(), "no survivor at (4,4)");
  std::size_t witnesses = 0;
  for (const auto& f : big.found) {
    const HolonomyReport r = abelian_report(f.spec);
    try {
      const auto w = index_witness(f.spec, r);
      o.check(w.has_value(), f.spec.name() + ": no witness");
      if (!w) continue;
      o.check(w->dim == 4, f.spec.name() + ": witness dim " + std::to_string(w->dim));
      // Isotropy re-checked by direct pairing of the basis.
      const auto& b = w->subspace.basis();
      for (const auto& x : b)
        for (const auto& y : b) o.check(sgn(f.spec.form()(x, y)) == 0, f.spec.name() + ": witness not isotropic");
      ++witnesses;
    } catch (const WitnessError& e) {
      o.check(false, f.spec.name() + ": " + e.what());
    }
  }
  std::ostringstream d;
  d << small_trials << " trials at s in {1,2,3}, p <= 5: " << small_survivors << " survivors; (4,4) budget 100000: "
    << big.found.size() << " survivors, " << witnesses << " witnesses of dim 4; " << static_cast<int>(seconds_since(t0)) << " s";
  o.detail = d.str();
  return o;
}

std::vector<IsotropyCertificate> mutations(const IsotropyCertificate& cert) {
  std::vector<IsotropyCertificate> out;
  auto lists = [](IsotropyCertificate& c) {
    return std::array<BasisList*, 4>{&c.abelian_evidence.u_gamma, &c.abelian_evidence.u_gamma_perp,
                                     &c.abelian_evidence.u_zero, &c.t_lower};
  };
  IsotropyCertificate probe = cert;
  const auto ls = lists(probe);
  for (std::size_t t = 0; t < ls.size(); ++t)
    for (std::size_t i = 0; i < ls[t]->vectors.size(); ++i)
      for (std::size_t j = 0; j < ls[t]->ambient_dim; ++j)
        for (int delta : {1, -2}) {
          IsotropyCertificate m = cert;
          lists(m)[t]->vectors[i][j] += delta;
          out.push_back(std::move(m));
        }
  return out;
}

Outcome criterion5(const Corpus& c) {
  Outcome o;
  std::size_t certs = 0, mutated = 0, rejected = 0, mutated_specs = 0;
  for_each_spec(c, [&](const std::string& name, const GroupSpec& spec) {
    if (!abelian_report(spec).abelian) return;
    const IsotropyCertificate cert = translational_isotropy_certificate(spec);
    ++certs;
    o.check(cert.verdict, name + ": verdict false");
    o.check(verify_certificate(cert), name + ": verifier rejects");
    // Mutations on every fixture and the first 100 abelian samples.
    if (mutated_specs >= 100 + c.fixtures.size()) return;
    ++mutated_specs;
    for (const auto& m : mutations(cert)) {
      ++mutated;
      const bool rej = !verify_certificate(m);
      rejected += rej;
      o.check(rej, name + ": mutated certificate accepted");
    }
  });
  o.detail = std::to_string(certs) + " abelian certificates verified; " + std::to_string(rejected) + "/" +
             std::to_string(mutated) + " single-vector mutations rejected (" + std::to_string(mutated_specs) + " specs)";
  return o;
}

Outcome criterion6(const Corpus& c) {
  Outcome o;
  std::size_t n = 0;
  for (const auto& s : c.samples) {
    if (s.spec.form().s() > 3) continue;
    ++n;
    const bool abelian = abelian_report(s.spec).abelian;
    const bool verdict = translational_isotropy_certificate(s.spec).verdict;
    o.check(abelian && verdict, tag(s) + ": s <= 3 but not abelian-and-certified");
  }
  o.check(n > 0, "no samples with s <= 3");
  o.detail = std::to_string(n) + " samples with s <= 3, all abelian with verdict true";
  return o;
}

Outcome criterion7(const Corpus& c) {
  Outcome o;
  std::size_t specs = 0, nonabelian = 0;
  for_each_spec(c, [&](const std::string& name, const GroupSpec& spec) {
    ++specs;
    o.check(centralizer_translations(spec).contains(u_zero(spec)), name + ": U_0 not in centralizer translations");
    const bool ab = abelian_report(spec).abelian;
    nonabelian += !ab;
    o.check(u0perp_centralizes(spec).holds == ab, name + ": u0perp_centralizes != abelian");
  });
  o.detail = std::to_string(specs) + " specs (" + std::to_string(nonabelian) + " non-abelian), both lemmas hold";
  return o;
}

Outcome criterion8() {
  Outcome o;
  const GroupSpec quad = testing::load_fixture("quad22.json");
  const GroupSpec wolf = testing::load_fixture("wolf42.json");
  const std::size_t oq = testing::orbit_dimension_oracle(quad, zero_vector(4));
  const std::size_t ow = testing::orbit_dimension_oracle(wolf, zero_vector(6));
  o.check(oq == 4, "oracle: quad22 orbit dim " + std::to_string(oq));
  o.check(ow == 6, "oracle: wolf42 orbit dim " + std::to_string(ow));
  const std::size_t lq = orbit_dimension(quad, zero_vector(4));
  const std::size_t lw = orbit_dimension(wolf, zero_vector(6));
  o.check(lq == oq, "quad22: library " + std::to_string(lq) + " vs oracle " + std::to_string(oq));
  o.check(lw == ow, "wolf42: library " + std::to_string(lw) + " vs oracle " + std::to_string(ow));
  o.detail = "orbit dim at 0: quad22 = " + std::to_string(lq) + ", wolf42 = " + std::to_string(lw) + " (oracle agrees)";
  return o;
}

// stdout of the CLI binary and its exit status.
std::pair<std::string, int> run_cli(const std::string& args) {
  const std::string cmd = std::string(FLATHOM_CLI_PATH) + " " + args + " 2>/dev/null";
  std::string out;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return {"", -1};
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  return {out, ::pclose(pipe)};
}

Outcome criterion9() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("flathom_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  for (const char* f : {"quad22.json", "wolf42.json", "nonabelian44.json"}) fs::copy_file(testing::fixture_path(f), dir / f);
  const std::string d = dir.string() + "/";
  const std::vector<std::string> commands = {
      "report " + d + "quad22.json",
      "--json report " + d + "nonabelian44.json",
      "certify " + d + "wolf42.json",
      "--json certify " + d + "nonabelian44.json",
      "scan --signature 4,4 --budget 300 --seed 5",
      "--json scan --signature 3,2 --budget 300 --seed 5",
      "--json scan --s-max 1 --p-max 2 --budget 50 --seed 9",
  };
  std::size_t compared = 0;
  for (const auto& c : commands) {
    const auto a = run_cli(c);
    std::string cert_a;
    const bool certify = c.find("certify") != std::string::npos;
    const std::string stem = c.find("wolf42") != std::string::npos ? "wolf42" : "nonabelian44";
    if (certify) cert_a = io::read_file(d + stem + ".cert.json");
    const auto b = run_cli(c);
    o.check(!a.first.empty(), c + ": no output");
    o.check(a == b, c + ": output differs between runs");
    if (certify) o.check(cert_a == io::read_file(d + stem + ".cert.json"), c + ": certificate file differs");
    ++compared;
  }
  fs::remove_all(dir);
  o.detail = std::to_string(compared) + " command lines byte-identical across two runs (stdout, exit code, certificate files)";
  return o;
}

}  // namespace

int main() {
  Corpus corpus;
  for (const char* f : {"quad22.json", "wolf42.json", "trivial22.json", "translations31.json", "nonabelian44.json"})
    corpus.fixtures.emplace_back(f, testing::load_fixture(f));
  const auto t0 = std::chrono::steady_clock::now();
  corpus.samples = testing::sample_valid_specs(kSampleCount, kSampleSeed);
  corpus.sample_seconds = seconds_since(t0);

  const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
      {1, [&] { return criterion1(corpus); }}, {2, [&] { return criterion2(corpus); }},
      {3, [&] { return criterion3(corpus); }}, {4, [] { return criterion4(); }},
      {5, [&] { return criterion5(corpus); }}, {6, [&] { return criterion6(corpus); }},
      {7, [&] { return criterion7(corpus); }}, {8, [] { return criterion8(); }},
      {9, [] { return criterion9(); }},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.problems.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << o.detail << "\n";
    for (const auto& p : o.problems) std::cout << "    " << p << "\n";
    std::cout.flush();
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
