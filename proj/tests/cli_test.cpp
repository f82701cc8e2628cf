#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <json.hpp>

namespace {

using nlohmann::json;

struct Outcome {
  int status = -1;
  std::string out;
};

// stdout only; stderr is folded in when `merge` is set.
Outcome run(const std::string& args, bool merge = false) {
  const std::string cmd = std::string(LINKCHARGE_CLI) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  Outcome r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int st = ::pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

const std::string kRegular =
    "'[[0,0],[1,0],[1.3090169943749475,0.9510565162951535],[0.5,1.5388417685876268],"
    "[-0.30901699437494745,0.9510565162951536]]'";

std::vector<double> csv_row(const std::string& text, std::size_t line) {
  std::istringstream in(text);
  std::string row;
  for (std::size_t i = 0; i <= line; ++i) std::getline(in, row);
  std::vector<double> v;
  std::istringstream cells(row);
  for (std::string c; std::getline(cells, c, ',');) v.push_back(std::stod(c));
  return v;
}

TEST(Cli, MinimizeEquilateral) {
  const Outcome r = run("minimize --linkage '[1,1,1,1,1]' --charges '[1,1,1,1,1]'");
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["E"].get<double>(), 3.0901699437494742, 1e-9);
  EXPECT_NEAR(j["b2"].get<double>(), 1.6180339887498949, 1e-9);
  EXPECT_EQ(j["configuration"].size(), 5u);
}

TEST(Cli, MalformedLinkageIsAStructuredError) {
  const Outcome r = run("minimize --linkage '[1,-1,1,1,1]' --charges '[1,1,1,1,1]'", true);
  EXPECT_NE(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["error"]["code"], "InvalidLinkage");
  EXPECT_FALSE(j["error"]["message"].get<std::string>().empty());

  const Outcome bad_json = run("minimize --linkage '[1,1,' --charges '[1,1,1,1,1]'", true);
  EXPECT_NE(bad_json.status, 0);
  EXPECT_TRUE(json::parse(bad_json.out).contains("error"));
}

TEST(Cli, CsvAndJsonCarryTheSameNumbers) {
  const std::string args = "minimize --linkage '[0.8,1,0.9,0.7,0.95]' --charges '[1,2,0.5,1.5,1]'";
  const json j = json::parse(run(args).out);
  const Outcome csv = run(args + " --format csv");
  ASSERT_EQ(csv.status, 0);
  const auto row = csv_row(csv.out, 1);
  ASSERT_EQ(row.size(), 14u);
  EXPECT_EQ(row[0], j["E"].get<double>());
  EXPECT_EQ(row[1], j["b2"].get<double>());
  EXPECT_EQ(row[2], j["b4"].get<double>());
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(row[4 + 2 * i], j["configuration"][i][0].get<double>());
    EXPECT_EQ(row[5 + 2 * i], j["configuration"][i][1].get<double>());
  }
}

TEST(Cli, StabilizeRegularPentagon) {
  const Outcome r = run("stabilize --config " + kRegular);
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_NEAR(j["s"].get<double>(), 1.0, 1e-9);
  EXPECT_NEAR(j["t"].get<double>(), 1.0, 1e-9);
  EXPECT_LE(j["residual"].get<double>(), 1e-8);
}

TEST(Cli, StabilizeRoundTripsThroughMinimize) {
  const std::string linkage = "'[0.8,1,0.9,0.7,0.95]'";
  const Outcome s = run("stabilize --linkage " + linkage + " --b2 1.4 --b4 1.3 --charges '[1,2,0.5]'");
  ASSERT_EQ(s.status, 0);
  const json charges = json::parse(s.out)["charges"];
  const json m = json::parse(run("minimize --linkage " + linkage + " --charges '" + charges.dump() + "'").out);
  EXPECT_NEAR(m["b2"].get<double>(), 1.4, 1e-6);
  EXPECT_NEAR(m["b4"].get<double>(), 1.3, 1e-6);
}

TEST(Cli, StabilizeRejectsNonconvexInput) {
  const Outcome r = run("stabilize --config '[[0,0],[1,0],[0.4,0.3],[0.5,1.5],[-0.3,0.95]]'", true);
  EXPECT_NE(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["error"]["code"], "NotConvex");
  EXPECT_EQ(j["error"]["message"], "configuration not strictly convex");
}

TEST(Cli, StabilizeSquare) {
  const json j = json::parse(run("stabilize --config '[[0,0],[1,0],[1,1],[0,1]]'").out);
  EXPECT_NEAR(j["t"].get<double>(), 1.0, 1e-9);
}

TEST(Cli, IdentityNavigationIsOneFrame) {
  const Outcome r = run("navigate --config " + kRegular + " --target " + kRegular);
  ASSERT_EQ(r.status, 0);
  const json j = json::parse(r.out);
  EXPECT_EQ(j["meta"]["steps"], 1);
  EXPECT_EQ(j["meta"]["endpoint_error"], 0.0);
  ASSERT_EQ(j["steps"].size(), 1u);
  EXPECT_EQ(j["steps"][0]["vertices"].size(), 5u);
}

TEST(Cli, NavigateWritesCsvAndSummary) {
  const Outcome r = run(
      "navigate --linkage '[1,1,1,1,1]' --b2 1.5 --b4 1.7 --target '{\"b2\":1.7,\"b4\":1.5}' --steps 20 --format csv",
      true);
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("step,s,t,E,x1,y1,x2,y2,x3,y3,x4,y4,x5,y5"), std::string::npos);
  EXPECT_NE(r.out.find("navigate: 21 frames"), std::string::npos);
}

TEST(Cli, ZeroStepsIsAValidationError) {
  const Outcome r = run("navigate --config " + kRegular + " --target " + kRegular + " --steps 0", true);
  EXPECT_NE(r.status, 0);
  EXPECT_EQ(json::parse(r.out)["error"]["code"], "InvalidArgument");
}

TEST(Cli, VerifySuiteIsDeterministic) {
  const Outcome a = run("verify --suite sign-table --seed 11");
  const Outcome b = run("verify --suite sign-table --seed 11");
  EXPECT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("criterion 3 sign-table: PASS"), std::string::npos);
  EXPECT_EQ(a.out.find("criterion 1"), std::string::npos);
}

TEST(Cli, UnknownSuiteOrFlagIsRejected) {
  EXPECT_NE(run("verify --suite nonsense").status, 0);
  EXPECT_NE(run("minimize --bogus 1").status, 0);
  EXPECT_NE(run("").status, 0);
}

}  // namespace
