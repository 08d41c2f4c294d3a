#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <sys/wait.h>

#include "flathom/cli.hpp"
#include "test_support.hpp"

namespace flathom {
namespace {

namespace fs = std::filesystem;
using io::Json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("flathom_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    for (const char* f : {"quad22.json", "wolf42.json", "trivial22.json", "nonabelian44.json"})
      fs::copy_file(testing::fixture_path(f), dir_ / f);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  void write(const std::string& name, const std::string& text) const { io::write_file(path(name), text); }

  fs::path dir_;
};

TEST_F(CliTest, CheckQuad) {
  const Result r = run({"check", path("quad22.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  for (const char* cond : {"A^2=0", "Av=0", "im A totally isotropic", "v perp im A", "im A=(ker A)^perp", "ker A=(im A)^perp"})
    EXPECT_NE(r.out.find(cond), std::string::npos) << cond;
}

TEST_F(CliTest, CheckFailureExitsOne) {
  Json j = io::parse_json_text(io::read_file(path("quad22.json")));
  j["generators"][0]["translation"] = Json::array({0, 1, 0, 0});
  write("bad.json", io::dump(j));
  EXPECT_EQ(run({"check", path("bad.json")}).code, 1);
}

TEST_F(CliTest, ReportJson) {
  const Result r = run({"--json", "report", path("quad22.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = io::parse_json_text(r.out);
  EXPECT_EQ(j["schema"], 1);
  EXPECT_EQ(j["report"]["abelian"], true);
}

TEST_F(CliTest, ReportNonAbelian) {
  const Result r = run({"report", path("nonabelian44.json")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("NOT abelian"), std::string::npos);
}

TEST_F(CliTest, WittBlockformOrbitFree) {
  EXPECT_EQ(run({"witt", path("quad22.json")}).code, 0);
  EXPECT_EQ(run({"blockform", path("wolf42.json")}).code, 0);
  const Result orbit = run({"--json", "orbit", path("wolf42.json")});
  ASSERT_EQ(orbit.code, 0) << orbit.err;
  EXPECT_EQ(io::parse_json_text(orbit.out)["orbit_dimension"], 6);
  EXPECT_NE(run({"orbit", path("quad22.json"), "--point", "1,0,-1/2,3"}).code, 2);
  EXPECT_EQ(run({"orbit", path("quad22.json"), "--point", "1,0"}).code, 2);
  // The quad fixture fixes -w2, so it does not act freely.
  EXPECT_EQ(run({"free", path("quad22.json")}).code, 1);
  EXPECT_EQ(run({"free", path("trivial22.json")}).code, 0);
}

TEST_F(CliTest, CertifyThenVerify) {
  const Result c = run({"--json", "certify", path("wolf42.json")});
  ASSERT_EQ(c.code, 0) << c.err;
  ASSERT_TRUE(fs::exists(path("wolf42.cert.json")));
  EXPECT_EQ(io::read_file(path("wolf42.cert.json")), c.out);
  EXPECT_EQ(io::parse_json_text(c.out)["verdict"], true);
  EXPECT_EQ(run({"verify", path("wolf42.cert.json")}).code, 0);

  // Corrupt one t_lower vector: rejected.
  Json j = io::parse_json_text(c.out);
  j["t_lower"]["basis"][0][5] = "1";
  write("tampered.cert.json", io::dump(j));
  const Result v = run({"verify", path("tampered.cert.json")});
  EXPECT_EQ(v.code, 1);
  EXPECT_NE(v.out.find("REJECTED"), std::string::npos);
}

TEST_F(CliTest, CertifyNonAbelianExitsOne) {
  const Result c = run({"certify", path("nonabelian44.json")});
  EXPECT_EQ(c.code, 1);
  EXPECT_NE(c.out.find("undetermined"), std::string::npos);
}

TEST_F(CliTest, MalformedInputExitsTwo) {
  write("float.json", R"({"name":"f","dim":2,"signature":[1,1],"generators":[{"linear":[[1,0],[0,1]],"translation":[0.5,0]}]})");
  EXPECT_EQ(run({"check", path("float.json")}).code, 2);
  write("garbage.json", "{");
  EXPECT_EQ(run({"report", path("garbage.json")}).code, 2);
  EXPECT_EQ(run({"report", path("missing.json")}).code, 2);
  EXPECT_EQ(run({"verify", path("quad22.json")}).code, 2);
  EXPECT_EQ(run({"nonsense"}).code, 2);
  EXPECT_EQ(run({"scan", "--budget", "5"}).code, 2);
  EXPECT_EQ(run({"scan", "--signature", "x,3", "--budget", "5"}).code, 2);
}

TEST_F(CliTest, ScanSmallIndex) {
  const Result r = run({"scan", "--signature", "3,3", "--budget", "1000", "--seed", "7"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("non-abelian survivors: 0"), std::string::npos);
}

TEST_F(CliTest, ScanWritesSurvivors) {
  const GroupSpec fx = testing::load_fixture("nonabelian44.json");
  std::size_t seed = 0, trial = 0;
  ASSERT_EQ(std::sscanf(fx.name().c_str(), "nonabelian_p4_s4_seed%zu_trial%zu", &seed, &trial), 2);
  const Result r = run({"scan", "--signature", "4,4", "--budget", std::to_string(trial + 1), "--seed",
                        std::to_string(seed), "--out-dir", path("out")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(io::read_file(path("out/" + fx.name() + ".json")), io::read_file(testing::fixture_path("nonabelian44.json")));
}

// The installed binary maps exit codes the same way.
TEST(CliBinary, ExitCodes) {
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(FLATHOM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  EXPECT_EQ(status("check " + testing::fixture_path("quad22.json")), 0);
  EXPECT_EQ(status("report " + testing::fixture_path("does_not_exist.json")), 2);
  EXPECT_EQ(status("free " + testing::fixture_path("quad22.json")), 1);
}

}  // namespace
}  // namespace flathom
