#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace {

namespace fs = std::filesystem;

struct Invocation {
  int status = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("pucci_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Invocation run(const std::string& args, const std::string& env = "") {
    const fs::path out = dir_ / "stdout", err = dir_ / "stderr";
    const std::string cmd = env + " " + PUCCI_CLI_PATH + " " + args + " > " + out.string() + " 2> " + err.string();
    const int raw = std::system(cmd.c_str());
    Invocation r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) {
    const fs::path p = dir_ / name;
    std::ofstream(p) << text;
    return p;
  }

  fs::path dir_;
};

const std::string kConfigs = PUCCI_CONFIG_DIR;

TEST_F(Cli, MaximumPrincipleConfigAssertsTheBound) {
  const Invocation r = run("solve --config " + kConfigs + "/mp_disk.cfg");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["report"]["solve"]["bound_holds"].get<bool>());
  EXPECT_EQ(j["report"]["solve"]["mp_constant"].get<double>(), 0.25);
  EXPECT_EQ(j["config"]["h"].get<double>(), 0.015625);
}

TEST_F(Cli, CounterexampleConfigAssertsTheViolation) {
  const Invocation r = run("solve --config " + kConfigs + "/counterexample.cfg --csv " + (dir_ / "f.csv").string());
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_GT(j["report"]["closed_form"]["violation_margin"].get<double>(), 0.0);
  EXPECT_GT(j["report"]["grid"]["violation_margin"].get<double>(), 0.0);
  EXPECT_EQ(slurp(dir_ / "f.csv").rfind("x,y,value,mask\n", 0), 0u);
}

TEST_F(Cli, MalformedConfigIsAUsageError) {
  const fs::path cfg = write("bad.cfg", "lambda = 1\nstencil = 3\n");
  const Invocation r = run("solve --config " + cfg.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("stencil"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST_F(Cli, UsageAndInputErrors) {
  EXPECT_EQ(run("ops-properties --set samples=0").status, 2);
  EXPECT_EQ(run("capacity-suite --set alpha=2").status, 2);
  EXPECT_EQ(run("no-such-subcommand").status, 2);
  EXPECT_EQ(run("solve --seed").status, 2);
  EXPECT_EQ(run("").status, 2);
  const fs::path asym = write("asym.json", R"({"matrix": [[1, 2], [3, 1]]})");
  const Invocation r = run("ops-properties --set samples=3 --input " + asym.string());
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.err.find("symmetric"), std::string::npos);
}

TEST_F(Cli, InjectedMatricesAreChecked) {
  const fs::path ok = write("ok.json", R"({"matrices": [[[1, 2], [2, -1]], [[0, 0, 1], [0, 0, 0], [1, 0, 5]]]})");
  const Invocation r = run("ops-properties --set samples=3 --input " + ok.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(nlohmann::json::parse(r.out)["report"]["injected"].get<int>(), 2);
}

TEST_F(Cli, KeysListing) {
  const Invocation r = run("emp --keys");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("eps_list"), std::string::npos);
}

TEST_F(Cli, OutputFileAndFlags) {
  const fs::path out = dir_ / "report.json";
  const Invocation r = run("ops-properties --seed 7 --tol 1e-9 --set samples=20 --out " + out.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto j = nlohmann::json::parse(slurp(out));
  EXPECT_EQ(j["config"]["seed"].get<int>(), 7);
  EXPECT_EQ(j["config"]["tol"].get<double>(), 1e-9);
}

TEST_F(Cli, RepeatedRunsAndThreadCountsAreByteIdentical) {
  const std::string args = "solve --set h=0.03125 --set f_const=-1 --set boundary=harmonic";
  const Invocation a = run(args, "PUCCI_THREADS=1");
  const Invocation b = run(args, "PUCCI_THREADS=4");
  const Invocation c = run(args, "PUCCI_THREADS=4");
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(b.out, c.out);
  const Invocation d = run("capacity-suite --set set=circle --set resolutions=16,32,64");
  const Invocation e = run("capacity-suite --set set=circle --set resolutions=16,32,64");
  EXPECT_EQ(d.out, e.out);
}

}  // namespace
