#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/cli.hpp"
#include "fixtures.hpp"
#include "tbn/data/network_io.hpp"
#include "tbn/data/synthetic.hpp"

namespace tbn::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::path(TBN_TEST_TMPDIR) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

// Value after "<key> " on its own output line.
double value_of(const std::string& out, const std::string& key) {
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(key + " ", 0) == 0) return std::stod(line.substr(key.size() + 1));
  }
  ADD_FAILURE() << "no '" << key << "' in:\n" << out;
  return 0.0;
}

class CliChain : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = scratch("cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    data::save_spec(dir_ / "spec.txt", {testing::chain_xy(), {}, 3000, 4});
    data::save_network(dir_ / "chain.bn", testing::chain_xy());
  }
  fs::path dir_;
};

TEST_F(CliChain, CompileAndQuery) {
  const fs::path model = dir_ / "model";
  const Outcome c = call({"compile", "--network", (dir_ / "chain.bn").string(), "--out-dir", model.string()});
  ASSERT_EQ(c.code, kOk) << c.err;
  Outcome q = call({"query", "--model-dir", model.string(), "--target", "Y=1"});
  ASSERT_EQ(q.code, kOk) << q.err;
  EXPECT_NEAR(value_of(q.out, "probability"), 0.31, 1e-12);
  q = call({"query", "--model-dir", model.string(), "--target", "X=1", "--evidence", "X=1"});
  ASSERT_EQ(q.code, kOk) << q.err;
  EXPECT_DOUBLE_EQ(value_of(q.out, "probability"), 1.0);
  q = call({"query", "--model-dir", model.string(), "--target", "X=1", "--evidence", "Y=1"});
  EXPECT_NEAR(value_of(q.out, "probability"), 0.24 / 0.31, 1e-12);
  q = call({"query", "--model-dir", model.string(), "--target", "Y=1", "--evidence", "X=1,X=0"});
  EXPECT_EQ(q.code, kDataError);
  EXPECT_FALSE(q.err.empty());
  q = call({"query", "--model-dir", model.string(), "--target", "Q=1"});
  EXPECT_EQ(q.code, kDataError);
}

TEST_F(CliChain, GenLearnQuery) {
  Outcome g = call({"gen", "--spec", (dir_ / "spec.txt").string(), "--out-dir", (dir_ / "data").string()});
  ASSERT_EQ(g.code, kOk) << g.err;
  EXPECT_EQ(g.out, "rows 3000 train 2250 valid 300 test 450\n");
  for (const char* f : {"data.csv", "truth.bn", "spec.txt", "train.csv", "valid.csv", "test.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "data" / f)) << f;
  }
  const std::vector<std::string> learn_args{
      "learn", "--train", (dir_ / "data" / "train.csv").string(), "--valid",
      (dir_ / "data" / "valid.csv").string(), "--desk-scale", "--restarts", "2", "--max-swaps", "3",
      "--seed", "5"};
  auto with_out = [&](const fs::path& out) {
    auto a = learn_args;
    a.push_back("--out-dir");
    a.push_back(out.string());
    return a;
  };
  Outcome l1 = call(with_out(dir_ / "m1"));
  ASSERT_EQ(l1.code, kOk) << l1.err;
  Outcome l2 = call(with_out(dir_ / "m2"));
  ASSERT_EQ(l2.code, kOk) << l2.err;
  EXPECT_EQ(l1.out, l2.out);
  EXPECT_EQ(slurp(dir_ / "m1" / "trace.txt"), slurp(dir_ / "m2" / "trace.txt"));
  EXPECT_EQ(value_of(l1.out, "edges"), 1.0);
  const Outcome q = call({"query", "--model-dir", (dir_ / "m1").string(), "--target", "Y=1"});
  ASSERT_EQ(q.code, kOk) << q.err;
  EXPECT_NEAR(value_of(q.out, "probability"), 0.31, 0.03);
}

TEST_F(CliChain, SizeBoundExitCode) {
  Outcome c = call({"compile", "--network", (dir_ / "chain.bn").string(), "--out-dir",
                    (dir_ / "m").string(), "--max-sdd-size", "1"});
  EXPECT_EQ(c.code, kTractability);
  ASSERT_EQ(call({"gen", "--spec", (dir_ / "spec.txt").string(), "--out-dir", (dir_ / "d").string()}).code, kOk);
  const Outcome l = call({"learn", "--train", (dir_ / "d" / "train.csv").string(), "--valid",
                          (dir_ / "d" / "valid.csv").string(), "--desk-scale", "--restarts", "1",
                          "--max-sdd-size", "100", "--out-dir", (dir_ / "l").string()});
  ASSERT_EQ(l.code, kOk) << l.err;
  EXPECT_LE(value_of(l.out, "sdd_size"), 100.0);
}

TEST(Cli, UsageAndDataErrors) {
  EXPECT_EQ(call({}).code, kUsage);
  EXPECT_EQ(call({"frobnicate"}).code, kUsage);
  EXPECT_EQ(call({"learn", "--train", "x.csv"}).code, kUsage);
  EXPECT_EQ(call({"--help"}).code, kOk);
  const fs::path dir = scratch("cli_errors");
  EXPECT_EQ(call({"learn", "--train", (dir / "missing.csv").string(), "--valid",
                  (dir / "missing.csv").string(), "--out-dir", (dir / "o").string()})
                .code,
            kDataError);
  EXPECT_EQ(call({"gen", "--out-dir", (dir / "g").string()}).code, kUsage);
  EXPECT_EQ(call({"learn", "--train", "a.csv", "--valid", "b.csv", "--out-dir", "o", "--restarts", "0"}).code,
            kUsage);
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "a,b\n1,7\n";
  }
  const Outcome o = call({"learn", "--train", (dir / "bad.csv").string(), "--valid",
                          (dir / "bad.csv").string(), "--out-dir", (dir / "o").string()});
  EXPECT_EQ(o.code, kDataError);
  EXPECT_NE(o.err.find("line 2"), std::string::npos) << o.err;
}

TEST(Cli, CohortAnalyze) {
  const fs::path dir = scratch("cli_cohort");
  ASSERT_EQ(call({"gen", "--cohort", "--samples", "2000", "--seed", "3", "--out-dir", (dir / "d").string()}).code,
            kOk);
  EXPECT_TRUE(fs::exists(dir / "d" / "data.csv.meta"));
  const Outcome a = call({"analyze", "--network", (dir / "d" / "truth.bn").string(), "--meta",
                          (dir / "d" / "data.csv.meta").string(), "--format", "tsv", "--tsv",
                          (dir / "report.tsv").string()});
  ASSERT_EQ(a.code, kOk) << a.err;
  EXPECT_EQ(a.out.rfind("section\trow\tK\tL\n", 0), 0u);
  EXPECT_EQ(slurp(dir / "report.tsv"), a.out);
  EXPECT_EQ(call({"analyze", "--network", (dir / "d" / "truth.bn").string()}).code, kUsage);
}

}  // namespace
}  // namespace tbn::cli
