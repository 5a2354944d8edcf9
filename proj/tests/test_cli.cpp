#include <gtest/gtest.h>

#include <sstream>
#include <string>
#include <vector>

#include "osieve/cli.hpp"

using namespace osieve;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "osieve");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(OSIEVE_FIXTURE_DIR) + "/" + name; }

}  // namespace

TEST(Cli, MinfuncCsv) {
  const auto r = invoke({"minfunc", "--system", "double", "--m-max", "16"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto tables = report::parse_csv(r.out);
  ASSERT_EQ(tables.size(), 1u);
  EXPECT_EQ(tables[0].columns, (std::vector<std::string>{"m", "p_m", "n_m1", "is_jump", "bound_exceeded"}));
  ASSERT_EQ(tables[0].rows.size(), 17u);
  const auto& last = tables[0].rows.back();
  EXPECT_EQ(last[0], report::Cell{std::uint64_t{16}});
  EXPECT_EQ(last[1], report::Cell{std::uint64_t{59}});
  EXPECT_EQ(last[2], report::Cell{std::uint64_t{71}});
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"minfunc", "--bogus"}).code, 2);
  EXPECT_EQ(invoke({"sieve", "--depth", "1"}).code, 2);
  EXPECT_EQ(invoke({"--format", "xml", "minfunc"}).code, 2);
  EXPECT_EQ(invoke({"minfunc", "--system", "0,1"}).code, 2);
  EXPECT_EQ(invoke({"sieve", "--depth", "1", "--lo", "0", "--hi", "10"}).code, 2);
  EXPECT_EQ(invoke({"lifespan", "--z", "13"}).code, 2);
  EXPECT_EQ(invoke({"reproduce", "min_table", "--fixture", "/nonexistent/file"}).code, 2);
  EXPECT_EQ(invoke({"reproduce", "gap_head", "--fixture", fixture("min_table.txt")}).code, 2);
}

TEST(Cli, ResourceErrorsExitThree) {
  EXPECT_EQ(invoke({"sieve", "--depth", "3", "--hi", "2000000000"}).code, 3);
  EXPECT_EQ(invoke({"period", "--system", "single", "--depth", "12", "--list"}).code, 3);
  EXPECT_EQ(invoke({"decades", "--from", "3", "--to", "9"}).code, 3);
}

TEST(Cli, AllowLargeLiftsTheCeiling) {
  const auto r = invoke({"--allow-large", "sieve", "--depth", "3", "--lo", "1999999990", "--hi", "2000000010"});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST(Cli, SieveAndPeriod) {
  auto r = invoke({"sieve", "--system", "quad", "--depth", "2", "--hi", "200"});
  ASSERT_EQ(r.code, 0);
  auto t = report::parse_csv(r.out);
  ASSERT_EQ(t[0].rows.size(), 7u);  // 11 41 71 101 131 161 191
  r = invoke({"--format", "json", "period", "--system", "quad", "--depth", "2", "--list"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["tables"]["period"][0]["period"], 30);
  EXPECT_EQ(j["tables"]["period"][0]["survivor_count"], 1);
  EXPECT_EQ(j["tables"]["elements"][0]["n"], 11);
  r = invoke({"--format", "json", "period", "--system", "double", "--depth", "30"});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out)["tables"]["period"][0]["period"].is_string());
}

TEST(Cli, VerifyTheorem71Json) {
  const auto r = invoke({"--format", "json", "verify", "theorem71", "--limit", "2000"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j["ok"].get<bool>());
  EXPECT_TRUE(j["summary"]["difference"]["jumps_not_quadruplets"].empty());
  EXPECT_TRUE(j["summary"]["difference"]["quadruplets_not_jumps"].empty());
  EXPECT_EQ(j["tables"]["jump_values"].size(), 7u);
}

TEST(Cli, VerifyOthers) {
  EXPECT_EQ(invoke({"verify", "assumption41", "--max-prime", "1000"}).code, 0);
  EXPECT_EQ(invoke({"verify", "effective", "--system", "quad", "--max-value", "100000"}).code, 0);
  EXPECT_EQ(invoke({"verify", "invariants", "--system", "double", "--m-max", "100"}).code, 0);
  EXPECT_EQ(invoke({"verify"}).code, 2);
}

TEST(Cli, BoundExceededIsVerificationFailure) {
  EXPECT_EQ(invoke({"minfunc", "--system", "0,2,6,8,12,18,20,26,30,32", "--m-max", "6"}).code, 1);
}

TEST(Cli, Reproduce) {
  auto r = invoke({"--format", "json", "reproduce", "gap_head", "--fixture", fixture("gap_head.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["summary"]["suspect"], 2);
  EXPECT_EQ(j["summary"]["mismatches"], 0);
  EXPECT_EQ(j["tables"]["diff"][0]["status"], "suspect");
  EXPECT_EQ(invoke({"reproduce", "min_table", "--fixture", fixture("min_table.txt")}).code, 0);
}

TEST(Cli, DecadesAndLifespan) {
  auto r = invoke({"decades", "--from", "3", "--to", "5"});
  ASSERT_EQ(r.code, 0);
  const auto t = report::parse_csv(r.out);
  ASSERT_EQ(t[0].rows.size(), 3u);
  EXPECT_EQ(t[0].rows[2][3], report::Cell{std::uint64_t{128}});
  r = invoke({"lifespan", "--z", "1481", "--z", "821"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("1481,37,41,true"), std::string::npos) << r.out;
  EXPECT_EQ(invoke({"lifespan", "--limit", "100000"}).code, 0);
  EXPECT_EQ(invoke({"lifespan"}).code, 2);
}

TEST(Cli, Help) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("minfunc"), std::string::npos);
}
