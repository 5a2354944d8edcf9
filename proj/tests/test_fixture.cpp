#include <gtest/gtest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "osieve/fixture.hpp"

using namespace osieve;

namespace {

Fixture load(const std::string& name) {
  const std::string path = std::string(OSIEVE_FIXTURE_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("missing fixture " + path);
  return parse_fixture(in, path);
}

Fixture parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_fixture(in, "inline");
}

std::size_t error_line(const std::string& text) {
  try {
    parse_text(text);
  } catch (const fixture_error& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(FixtureParse, CommentsAndTableLine) {
  const auto fx = parse_text("# heading\n\ntable: min_table  # trailing\n0 2 3\n  1 3 5 # note\n");
  EXPECT_EQ(fx.table_id, "min_table");
  ASSERT_EQ(fx.entries.size(), 2u);
  EXPECT_EQ(fx.entries[1].line, 5u);
  EXPECT_EQ(fx.entries[1].fields, (std::vector<std::string>{"1", "3", "5"}));
}

TEST(FixtureParse, ErrorsReportLine) {
  EXPECT_EQ(error_line("0 2 3\n"), 1u);
  EXPECT_EQ(error_line("# c\ntable: nope\n"), 2u);
  EXPECT_EQ(error_line("table: min_table\n0 2 3\n1 3\n"), 3u);
  EXPECT_EQ(error_line("table: min_table\n0 2 x\n"), 2u);
  EXPECT_EQ(error_line("table: gap_head\n3 2\n5 6 7\n"), 3u);
  EXPECT_EQ(error_line("table: n_listings\ntriple 0 prefix 1\n"), 2u);
  EXPECT_EQ(error_line("table: n_listings\nquad 0 some 1\n"), 2u);
  EXPECT_EQ(error_line("# only comments\n"), 1u);
}

TEST(FixtureReproduce, MinTable) {
  const auto d = reproduce(load("min_table.txt"));
  EXPECT_EQ(d.matches, 17u);
  EXPECT_TRUE(d.mismatches.empty());
  EXPECT_TRUE(d.suspect.empty());
}

TEST(FixtureReproduce, GapHeadFlagsTheMisprint) {
  const auto fx = load("gap_head.txt");
  const auto d = reproduce(fx);
  EXPECT_TRUE(d.ok());
  // 2459 + 2 = 23 * 107: a digit swap of 2549, as the neighbouring gaps confirm.
  ASSERT_EQ(d.suspect.size(), 2u);
  EXPECT_EQ(d.suspect[0].expected, "2459 42");
  EXPECT_EQ(d.suspect[0].computed, "2549 42");
  EXPECT_EQ(d.suspect[1].expected, "4648 72");
  EXPECT_EQ(d.suspect[1].computed, "4649 72");
  EXPECT_EQ(d.total(), fx.entries.size());
}

TEST(FixtureReproduce, GapTail) {
  const auto fx = load("gap_tail.txt");
  const auto d = reproduce(fx);
  EXPECT_TRUE(d.ok());
  ASSERT_EQ(d.suspect.size(), 2u);
  EXPECT_EQ(d.suspect[0].computed, "1287197 174");
  EXPECT_EQ(d.suspect[1].computed, "1294199 102");
  EXPECT_EQ(d.matches + 2, fx.entries.size());
  EXPECT_EQ(fx.entries.back().fields, (std::vector<std::string>{"1299449"}));
}

TEST(FixtureReproduce, LifespanAndListingsAndDecades) {
  for (const char* name : {"lifespan_table.txt", "n_listings.txt", "decade_counts.txt"}) {
    const auto fx = load(name);
    const auto d = reproduce(fx);
    EXPECT_EQ(d.matches, fx.entries.size()) << name;
    for (const auto& m : d.mismatches) ADD_FAILURE() << name << ":" << m.line << " " << m.expected << " vs " << m.computed;
  }
}

TEST(FixtureReproduce, DeliberateMismatchIsReported) {
  const auto d = reproduce(parse_text("table: min_table\n0 2 3\n1 3 11\n"));
  EXPECT_EQ(d.matches, 1u);
  ASSERT_EQ(d.mismatches.size(), 1u);
  EXPECT_EQ(d.mismatches[0].line, 3u);
  EXPECT_EQ(d.mismatches[0].computed, "1 3 5");
  EXPECT_FALSE(d.ok());

  const auto l = reproduce(parse_text("table: n_listings\nquad 3 contains 821 823\n"));
  ASSERT_EQ(l.mismatches.size(), 1u);
  EXPECT_EQ(l.mismatches[0].computed, "quad 3 contains 821");
}

TEST(FixtureReproduce, TotalCoversEveryEntry) {
  const auto d = reproduce(parse_text("table: gap_head\n3 2\n5 7\n12 6\n17 14\n"));
  EXPECT_EQ(d.total(), 4u);
  EXPECT_EQ(d.matches, 1u);
  EXPECT_EQ(d.suspect.size(), 2u);     // odd gap, even former
  EXPECT_EQ(d.mismatches.size(), 1u);  // plausible but wrong gap
}
