#include "twistor/cli.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace twistor;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / ("twistor-cli-test-" + std::to_string(::getpid()));
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

ErrorKind load_error(const std::string& text) {
  RunConfig c;
  try {
    load_config_text(c, text);
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::Precondition;
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
  RunConfig c;
  load_config_text(c,
                   "# comment\n"
                   "chart = cp2:orientation=-1\n"
                   "nu = 2, 4   # trailing comment\n"
                   "t1 = 0.25\n"
                   "t-grid = 0.5:1, 2:2\n"
                   "tol-tier = fd\n"
                   "interval = 0.1, 3\n"
                   "distribution = D-perp\n"
                   "g11 = 1 + x1^2\n");
  EXPECT_EQ(c.chart, "cp2:orientation=-1");
  EXPECT_EQ(c.nu, (std::vector<int>{2, 4}));
  EXPECT_EQ(c.t1, 0.25);
  ASSERT_EQ(c.t_grid.size(), 2u);
  EXPECT_EQ(c.t_grid[1].t2, 2.0);
  EXPECT_EQ(c.tier, ToleranceTier::FiniteDifference);
  EXPECT_EQ(c.interval_hi, 3.0);
  EXPECT_EQ(c.distribution, Distribution::Complement);
  EXPECT_EQ(c.components[0][0], "1 + x1^2");
  EXPECT_EQ(make_chart(c).orientation(), -1);
}

TEST(Config, Rejections) {
  EXPECT_EQ(load_error("colour = blue\n"), ErrorKind::Usage);
  EXPECT_EQ(load_error("t1 0.5\n"), ErrorKind::Usage);
  EXPECT_EQ(load_error("t-grid = 1:0\n"), ErrorKind::Usage);
  EXPECT_EQ(load_error("t1 = abc\n"), ErrorKind::Usage);
  EXPECT_EQ(load_error("distribution = sideways\n"), ErrorKind::Usage);
}

TEST(Cli, ClassifyPrintsLabel) {
  const Outcome r = run({"classify", "--chart", "sphere", "--nu", "3", "--t1", "0.5", "--t2", "0.5"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("nu=3  W4\n"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, kExitUsage);
  EXPECT_EQ(run({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--nu", "7"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--t1", "-1"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--samples", "3"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--chart", "torus"}).code, kExitUsage);
  EXPECT_EQ(run({"classify", "--config", "/nonexistent/twistor.cfg"}).code, kExitUsage);
  EXPECT_EQ(run({"verify", "--chart", "flat", "--clause", "no-such-clause"}).code, kExitUsage);
  EXPECT_EQ(run({"critical-t", "--nu", "1,2"}).code, kExitUsage);
}

TEST(Cli, PreconditionFailureExitsOne) {
  const Outcome r = run({"critical-t", "--chart", "s2xs2:a=1,b=2", "--nu", "2"});
  EXPECT_EQ(r.code, kExitFail);
  EXPECT_NE(r.err.find("Einstein"), std::string::npos) << r.err;
}

TEST(Cli, CriticalT) {
  const Outcome r = run({"critical-t", "--chart", "sphere", "--nu", "2", "--parameter", "t1", "--interval", "0.05,2"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("t* = 0.5"), std::string::npos) << r.out;
}

TEST(Cli, VerifySingleClause) {
  const Outcome r = run({"verify", "--chart", "flat", "--clause", "class-nu3"});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("theorem clauses pass"), std::string::npos);
}

TEST(Cli, FlagsOverrideConfigFile) {
  const fs::path dir = scratch_dir();
  write(dir / "run.cfg", "chart = flat\nt1 = 0.3\nnu = 1\n");
  const fs::path out = dir / "override.json";
  const Outcome r = run({"classify", "--config", (dir / "run.cfg").string(), "--t1", "0.6", "--out", out.string()});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  const Json j = Json::parse(slurp(out));
  EXPECT_EQ(j["config"]["t1"].get<double>(), 0.6);
  EXPECT_EQ(j["config"]["chart"].get<std::string>(), "flat");
  EXPECT_EQ(j["config"]["nu"], Json::array({1}));
}

TEST(Cli, UserChartFromConfig) {
  const fs::path dir = scratch_dir();
  std::string cfg = "chart = user\nlower = -0.8,-0.8,-0.8,-0.8\nupper = 0.8,0.8,0.8,0.8\n";
  for (int a = 1; a <= 4; ++a)
    for (int b = a; b <= 4; ++b)
      cfg += "g" + std::to_string(a) + std::to_string(b) + " = " +
             (a == b ? "4 / (1 + x1^2 + x2^2 + x3^2 + x4^2)^2" : "0") + "\n";
  write(dir / "user.cfg", cfg);
  const Outcome r = run({"decompose", "--config", (dir / "user.cfg").string()});
  EXPECT_EQ(r.code, kExitPass) << r.err;
  EXPECT_NE(r.out.find("einstein yes, self-dual yes, anti-self-dual yes"), std::string::npos) << r.out;
}

TEST(Cli, JsonIsByteStable) {
  const fs::path dir = scratch_dir();
  const std::vector<std::string> base{"classify", "--chart", "cp2", "--nu", "2,4", "--t2", "0.25"};
  auto with_out = [&](const fs::path& p) {
    auto a = base;
    a.insert(a.end(), {"--out", p.string()});
    return a;
  };
  ASSERT_EQ(run(with_out(dir / "a.json")).code, kExitPass);
  ASSERT_EQ(run(with_out(dir / "b.json")).code, kExitPass);
  const std::string a = slurp(dir / "a.json");
  EXPECT_EQ(a, slurp(dir / "b.json"));
  const Json j = Json::parse(a);
  for (const char* key : {"schema", "command", "config", "tolerance_tier", "tolerance", "catalog_verification", "result"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["tolerance_tier"].get<std::string>(), to_string(ToleranceTier::Analytic));
  EXPECT_TRUE(j["catalog_verification"]["ok"].get<bool>());
  EXPECT_EQ(j["result"]["reports"].size(), 2u);
  EXPECT_EQ(j["result"]["reports"][1]["label"].get<std::string>(), kLabelW145);
}
