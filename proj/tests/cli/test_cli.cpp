#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "support/support.hpp"

using nacap::cli::run_cli;
using nacap::testing::fixture;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json json_of(const Run& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, TransitionReturnProbability) {
  const auto r = run({"transition", "--spec", fixture("ex4"), "--x", "0", "--y", "0", "--n", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = json_of(r);
  EXPECT_EQ(j["command"], "transition");
  EXPECT_EQ(j["outputs"]["P"]["value"], "1/2");
  EXPECT_TRUE(j["outputs"]["P"]["guarantee"].is_null());
  EXPECT_EQ(j["precision_audit"]["min_guarantee"], "exact");
}

TEST(Cli, OutputIsDeterministic) {
  const std::vector<std::string> args{"classify", "--spec", fixture("ex2")};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(json_of(a)["outputs"]["verdict"]["kind"], "positive");
}

TEST(Cli, ClassifiesNullExample) {
  const auto r = run({"classify", "--spec", fixture("ex1")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json_of(r)["outputs"]["verdict"]["kind"], "null");
}

TEST(Cli, HumanRendering) {
  const auto r = run({"transition", "--spec", fixture("ex4"), "--n", "2", "--human"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("precision_audit:"), std::string::npos);
  EXPECT_NE(r.out.find("1/2"), std::string::npos);
  EXPECT_EQ(r.out.find('{'), std::string::npos);
}

TEST(Cli, SuperharmonicFromSpec) {
  const auto r = run({"superharmonic", "--spec", fixture("ex7")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("e^(2)"), std::string::npos);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run({"frobnicate", "--spec", fixture("ex1")}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", "/nonexistent.json"}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", fixture("ex1"), "--no-such-flag"}).code, 2);
  EXPECT_EQ(run({"classify", "--spec", fixture("ex1"), "--json", "--human"}).code, 2);
  EXPECT_EQ(run({"superharmonic", "--spec", fixture("ex7"), "--construct"}).code, 2);
  EXPECT_EQ(run({"superharmonic", "--spec", fixture("ex3"), "--u", "1;1 - e"}).code, 2);
}

TEST(Cli, PrecisionBelowThresholdExitsThree) {
  const auto r = run({"classify", "--spec", fixture("ex2"), "--min-precision", "100"});
  EXPECT_EQ(r.code, 3);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, PreconditionFailuresExitFour) {
  EXPECT_EQ(run({"hardy", "--spec", fixture("ex1")}).code, 4);
  EXPECT_EQ(run({"real-sweep", "--spec", fixture("ex1")}).code, 4);
  EXPECT_EQ(run({"superharmonic", "--spec", fixture("ex7"), "--construct", "--c", "1", "--tau", "e^(1)"}).code, 4);
}
