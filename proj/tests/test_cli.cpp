#include <gtest/gtest.h>

#include <sstream>

#include "nilmult/cli.hpp"

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = nilmult::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Cli, ChiText) {
  auto r = run({"chi", "--weight", "4", "--letters", "3", "--format", "text"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "18\n");
}

TEST(Cli, ChiJson) {
  auto r = run({"chi", "--weight", "4", "--letters", "3"});
  EXPECT_EQ(r.out, "{\"weight\":4,\"letters\":\"3\",\"chi\":\"18\"}\n");
}

TEST(Cli, NilmultJson) {
  auto r = run({"nilmult", "--free-rank", "1", "--orders", "3", "--product-class", "2", "--class", "2", "--format", "json"});
  EXPECT_EQ(r.code, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["free_rank"], "0");
  EXPECT_EQ(j["torsion"][0]["order"], "3");
  EXPECT_EQ(j["torsion"][0]["multiplicity"], "5");
  EXPECT_EQ(r.out.rfind("{\"free_rank\":\"0\",\"torsion\":[{\"order\":\"3\",\"multiplicity\":\"5\"}]", 0), 0u);
}

TEST(Cli, CoprimalityFailureExitsTwo) {
  auto r = run({"nilmult", "--orders", "2", "--free-rank", "0", "--product-class", "2", "--class", "2"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("coprimality"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownFlagIsAnError) {
  EXPECT_EQ(run({"chi", "--weight", "2", "--letters", "2", "--verbose"}).code, 1);
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"nilmult", "--orders", "x", "--product-class", "2", "--class", "2"}).code, 2);
}

TEST(Cli, TwoRowAuditExitsThree) {
  auto r = run({"threefactor", "--orders", "3,3,3", "--product-class", "2", "--two-row", "2,1"});
  EXPECT_EQ(r.code, 3);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["audit"]["printed_total"], "385");
  EXPECT_EQ(j["audit"]["iterated_total"], "325");
  EXPECT_EQ(j["audit"]["e"][4], "-30");
  EXPECT_NE(r.err.find("e_5"), std::string::npos);
}

TEST(Cli, TwoRowVacuousPass) {
  auto r = run({"threefactor", "--orders", "3,5,7", "--product-class", "2", "--two-row", "2,1"});
  EXPECT_EQ(r.code, 0);
}

TEST(Cli, PolymultAndThreefactor) {
  EXPECT_EQ(run({"polymult", "--free-rank", "1", "--orders", "3", "--product-class", "2", "--class-row", "2,1",
                 "--format", "text"}).out,
            "Z_3^10\n");
  EXPECT_EQ(run({"threefactor", "--orders", "15,9,5", "--product-class", "2", "--class", "2", "--format", "text"}).out,
            "Z_15^5\n");
}

TEST(Cli, BasisAndCollect) {
  auto b = run({"basis", "--letters", "2", "--max-weight", "3"});
  auto j = nlohmann::json::parse(b.out);
  ASSERT_EQ(j["elements"].size(), 5u);
  EXPECT_EQ(j["elements"][3]["commutator"], "[[x2,x1],x1]");
  EXPECT_EQ(j["elements"][3]["brackets"].dump(), "[[2,1],1]");
  auto c = run({"collect", "--letters", "2", "--class", "2", "--left", "x2", "--right", "x1", "--format", "text"});
  EXPECT_EQ(c.out, "x1^1 x2^1 [x2,x1]^1\n");
}

TEST(Cli, VerifyIsByteStable) {
  std::vector<std::string> args = {"verify", "--free-rank", "1", "--orders", "3", "--product-class", "2", "--class", "2",
                                   "--omit-timing"};
  auto a = run(args), b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto j = nlohmann::json::parse(a.out);
  EXPECT_TRUE(j["equal"].get<bool>());
  EXPECT_EQ(j["runtime_ms"], 0.0);
}

TEST(Cli, BudgetExitsFour) {
  EXPECT_EQ(run({"--basis-cap", "10", "basis", "--letters", "3", "--max-weight", "4"}).code, 4);
  EXPECT_EQ(run({"basis", "--letters", "3", "--max-weight", "4", "--basis-cap", "10"}).code, 4);
}

TEST(Cli, HelpNamesTheResult) {
  for (const char* sub : {"chi", "basis", "collect", "nilmult", "polymult", "threefactor", "verify"}) {
    auto r = run({sub, "--help"});
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_FALSE(r.out.empty()) << sub;
  }
  EXPECT_NE(run({"nilmult", "--help"}).out.find("c-nilpotent multiplier"), std::string::npos);
  EXPECT_NE(run({"polymult", "--help"}).out.find("Polynilpotent multiplier"), std::string::npos);
  EXPECT_NE(run({"chi", "--help"}).out.find("Witt formula"), std::string::npos);
}
