#include <sstream>

#include <gtest/gtest.h>

#include "mdc/csv.hpp"
#include "mdc/error.hpp"
#include "mdc/ingest.hpp"

using namespace mdc;

namespace {

OutputPanel parse(const std::string& text, const std::string& dim = "trade", Warnings* w = nullptr) {
  std::istringstream in(text);
  return parse_output_csv(in, DimensionId(dim), w);
}

AuxTable aux_of(const std::string& text) {
  std::istringstream in(text);
  return parse_aux_csv(in);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::Io;
}

}  // namespace

TEST(Csv, SplitsQuotedFields) {
  const auto f = csv::split_line(R"(a,"b,c","d""e",)");
  ASSERT_EQ(f.size(), 4u);
  EXPECT_EQ(f[1], "b,c");
  EXPECT_EQ(f[2], "d\"e");
  EXPECT_EQ(f[3], "");
}

TEST(Csv, FormatsRoundTrip) {
  const double x = 0.1 + 0.2;
  EXPECT_EQ(*csv::parse_double(csv::format_double(x)), x);
  EXPECT_FALSE(csv::parse_double("1.5x"));
  EXPECT_FALSE(csv::parse_double(""));
  EXPECT_EQ(csv::quote("a,b"), "\"a,b\"");
}

TEST(Csv, MissingColumnIsSchemaError) {
  EXPECT_EQ(kind_of([] { parse("economy,activity,year\nA,p,2000\n"); }), ErrorKind::Schema);
  try {
    parse("economy,activity,year\nA,p,2000\n");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("value"), std::string::npos);
  }
}

TEST(Ingest, ParsesAndSortsRecords) {
  const auto p = parse("economy,activity,year,value\nB,x,2001,2\nA,y,2000,1\nA,x,2000,3\n");
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p.records[0].economy, "A");
  EXPECT_EQ(p.records[0].activity, "x");
  EXPECT_EQ(p.records[2].year, 2001);
  EXPECT_EQ(p.kind, DimensionKind::Trade);
  EXPECT_EQ(p.years(), (std::vector<Year>{2000, 2001}));
}

TEST(Ingest, NegativeValueNamesRow) {
  try {
    parse("economy,activity,year,value\nA,x,2000,1\nA,y,2000,-5\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Validation);
    EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
  }
}

TEST(Ingest, DuplicatesAreSummedWithWarning) {
  Warnings w;
  const auto p = parse("economy,activity,year,value\nA,x,2000,1\nA,x,2000,2\n", "trade", &w);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_DOUBLE_EQ(p.records[0].value, 3.0);
  EXPECT_FALSE(w.empty());
}

TEST(Ingest, WriteParseRoundTrip) {
  const auto p = parse("economy,activity,year,value,citations_recent\nA,x,2000,1.25,10\nB,y,2000,2,\n", "research");
  std::ostringstream out;
  write_output_csv(out, p);
  const auto q = parse(out.str(), "research");
  ASSERT_EQ(q.size(), p.size());
  EXPECT_EQ(q.records[0].value, 1.25);
  EXPECT_EQ(*q.records[0].citations_recent, 10.0);
  EXPECT_FALSE(q.records[1].citations_recent);
}

TEST(Eligibility, SmallEconomyIsDropped) {
  const auto panel = parse("economy,activity,year,value\nBIG,x,2000,1e6\nTINY,x,2000,1e6\n");
  const auto aux = aux_of("economy,year,population,total_exports\nBIG,2000,5e6,2e9\nTINY,2000,5e5,2e9\n");
  const auto out = apply_eligibility(panel, aux, EligibilityRule{});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.records[0].economy, "BIG");
}

TEST(Eligibility, ThresholdsAreStrictForEconomies) {
  const auto panel = parse("economy,activity,year,value\nA,x,2000,1e6\n");
  const auto aux = aux_of("economy,year,population,total_exports\nA,2000,1e6,2e9\n");
  EXPECT_EQ(apply_eligibility(panel, aux, EligibilityRule{}).size(), 0u);
}

TEST(Eligibility, TradeActivityTotalKeepsAtThreshold) {
  auto rule = EligibilityRule::disabled();
  rule.min_world_product_exports = 5e5;
  const auto panel = parse("economy,activity,year,value\nA,x,2000,2.5e5\nB,x,2000,2.5e5\nA,y,2000,4e5\n");
  const auto aux = aux_of("economy,year,population,total_exports\nA,2000,1,1\nB,2000,1,1\n");
  const auto out = apply_eligibility(panel, aux, rule);
  ASSERT_EQ(out.size(), 2u);
  for (const auto& r : out.records) EXPECT_EQ(r.activity, "x");
}

TEST(Eligibility, ResearchPairFloors) {
  auto rule = EligibilityRule::disabled();
  rule.research_doc_floor = 3;
  rule.research_citation_floor = 400;
  const auto panel = parse(
      "economy,activity,year,value,citations_recent\nA,x,2000,2,1000\nA,y,2000,5,100\nA,z,2000,5,500\n", "research");
  const auto aux = aux_of("economy,year,population,total_exports\nA,2000,1,1\n");
  const auto out = apply_eligibility(panel, aux, rule);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.records[0].activity, "z");
}

TEST(Eligibility, MissingCitationColumnSkipsFloorWithWarning) {
  auto rule = EligibilityRule::disabled();
  rule.research_citation_floor = 400;
  const auto panel = parse("economy,activity,year,value\nA,x,2000,5\n", "research");
  const auto aux = aux_of("economy,year,population,total_exports\nA,2000,1,1\n");
  Warnings w;
  EXPECT_EQ(apply_eligibility(panel, aux, rule, &w).size(), 1u);
  EXPECT_TRUE(w.contains("citation"));
}

TEST(Eligibility, EmptyAuxIsConfigError) {
  const auto panel = parse("economy,activity,year,value\nA,x,2000,5\n");
  EXPECT_EQ(kind_of([&] { apply_eligibility(panel, AuxTable{}, EligibilityRule{}); }), ErrorKind::Config);
}

TEST(Eligibility, IsIdempotent) {
  const auto panel = parse(
      "economy,activity,year,value\nA,x,2000,6e5\nA,y,2000,1e5\nB,x,2000,4e5\nB,y,2000,3e5\nC,y,2000,9e5\n");
  const auto aux = aux_of(
      "economy,year,population,total_exports\nA,2000,2e6,2e9\nB,2000,2e6,2e9\nC,2000,5e5,2e9\n");
  const auto once = apply_eligibility(panel, aux, EligibilityRule{});
  const auto twice = apply_eligibility(once, aux, EligibilityRule{});
  ASSERT_EQ(once.size(), twice.size());
  for (std::size_t i = 0; i < once.size(); ++i) EXPECT_EQ(once.records[i].activity, twice.records[i].activity);
}

TEST(Eligibility, PatentTotalsFromTechnologyPanel) {
  const auto tech = parse("economy,activity,year,value\nA,c1,2000,3\nB,c1,2000,10\n", "technology");
  const auto aux = with_dimension_totals(
      aux_of("economy,year,population,total_exports\nA,2000,2e6,2e9\nB,2000,2e6,2e9\n"), tech);
  EXPECT_EQ(*aux.find("A", 2000)->patent_applications, 3.0);
  auto rule = EligibilityRule::disabled();
  rule.min_patent_applications = 4;
  const auto out = apply_eligibility(tech, aux, rule);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.records[0].economy, "B");
}

TEST(Eligibility, NegativeThresholdRejected) {
  auto rule = EligibilityRule::disabled();
  rule.min_population = -1;
  EXPECT_EQ(kind_of([&] { rule.validate(); }), ErrorKind::Config);
}
