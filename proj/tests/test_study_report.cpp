#include <fmt/format.h>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mdc/error.hpp"
#include "mdc/report.hpp"
#include "mdc/study.hpp"
#include "support/fixtures.hpp"

using namespace mdc;
using nlohmann::json;

namespace {

std::vector<std::string> term_names(const ModelSpec& m) {
  std::vector<std::string> out;
  for (const auto& t : m.terms) out.push_back(t.display());
  return out;
}

}  // namespace

TEST(StandardModels, ThreeDimensions) {
  const auto models = standard_models({"trade", "technology", "research"});
  ASSERT_EQ(models.size(), 12u);
  EXPECT_TRUE(models[0].terms.empty());
  EXPECT_EQ(models[0].id, "(1)");
  EXPECT_EQ(term_names(models[1]), (std::vector<std::string>{"ECI (trade)"}));
  EXPECT_EQ(models[4].terms.size(), 2u);
  EXPECT_EQ(models[7].terms.size(), 3u);
  EXPECT_EQ(term_names(models[8]),
            (std::vector<std::string>{"ECI (trade)", "ECI (technology)", "ECI (trade) x ECI (technology)"}));
  EXPECT_EQ(models[11].terms.size(), 7u);
  EXPECT_EQ(models[11].id, "(12)");
}

TEST(StandardModels, TwoDimensionsHaveNoFullModel) {
  const auto models = standard_models({"a", "b"}, "fitness");
  ASSERT_EQ(models.size(), 5u);
  EXPECT_EQ(models[1].terms[0].factors[0].metric, "fitness");
  EXPECT_EQ(models[4].terms.size(), 3u);
}

TEST(Presets, Periods) {
  const auto g = growth_study({"trade"});
  ASSERT_EQ(g.periods.size(), 2u);
  EXPECT_EQ(g.periods[0].start, 1999);
  EXPECT_EQ(g.periods[1].end, 2019);
  const auto i = inequality_study({"trade"});
  EXPECT_EQ(i.periods.size(), 5u);
  EXPECT_EQ(i.periods.front().start, 1996);
  EXPECT_EQ(i.periods.back().end, 2015);
  EXPECT_EQ(i.baseline.size(), 2u);
  const auto e = emissions_study({"trade"});
  EXPECT_EQ(e.periods.back().start, 2016);
  EXPECT_EQ(e.periods.back().end, 2018);
}

TEST(ParseStudy, PresetWithOverrides) {
  const auto s = parse_study(json::parse(R"({"preset": "growth", "alpha": 0.1,
      "periods": [[2000, 2010], {"label": "late", "start": 2010, "end": 2020}]})"),
                             {"trade", "technology"});
  EXPECT_EQ(s.name, "growth");
  EXPECT_EQ(s.alpha, 0.1);
  EXPECT_EQ(s.periods[0].label, "2000-2010");
  EXPECT_EQ(s.periods[1].label, "late");
  EXPECT_EQ(s.models.size(), 5u);
}

TEST(ParseStudy, CustomModelsGetBaseline) {
  const auto s = parse_study(json::parse(R"({"name": "custom", "depvar": {"kind": "panel_average", "series": "gini"},
      "periods": [[2000, 2003]], "baseline": ["gdp_pc", {"series": "gdp_pc", "transform": "log_squared"}],
      "models": [{"dimensions": ["trade"]}, {"id": "both", "dimensions": ["trade", "technology"],
                  "interactions": [["trade", "technology"]]}]})"),
                             {"trade", "technology"});
  ASSERT_EQ(s.models.size(), 3u);
  EXPECT_TRUE(s.models[0].terms.empty());
  EXPECT_EQ(s.models[2].id, "both");
  EXPECT_EQ(s.models[2].terms.size(), 3u);
  EXPECT_EQ(s.depvar.kind, DepvarKind::PanelAverage);
  EXPECT_EQ(s.baseline[1].transform, Transform::LogSquared);
}

TEST(ParseStudy, Errors) {
  const std::vector<std::string> dims{"trade"};
  const char* bad[] = {
      R"({"preset": "nope"})",
      R"({"preset": "growth", "colour": 1})",
      R"({"preset": "growth", "alpha": 1.5})",
      R"({"name": "x", "periods": [[2000, 2010]]})",
      R"({"preset": "growth", "periods": [[2010, 2000]]})",
      R"({"preset": "growth", "models": [{"dimensions": ["research"]}]})",
      R"({"preset": "growth", "models": [{"id": "a", "dimensions": ["trade"]}, {"id": "a"}]})",
      R"({"preset": "growth", "baseline": [{"series": "gdp_pc", "transform": "sqrt"}]})",
      R"({"preset": "growth", "depvar": {"kind": "level"}})",
  };
  for (const char* text : bad) {
    try {
      parse_study(json::parse(text), dims);
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config) << text;
    }
  }
}

TEST(Report, Stars) {
  EXPECT_EQ(stars(0.005), "***");
  EXPECT_EQ(stars(0.01), "**");
  EXPECT_EQ(stars(0.049), "**");
  EXPECT_EQ(stars(0.05), "*");
  EXPECT_EQ(stars(0.1), "");
}

TEST(Report, RendersTableLayout) {
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd x = fixtures::normal_matrix(rng, 40, 1);
  const Eigen::VectorXd y = 0.8 * x.col(0) + 0.5 * fixtures::normal_matrix(rng, 40, 1).col(0);
  auto p = fixtures::panel(x, y, {"ECI (trade)"});
  Eigen::VectorXd d = Eigen::VectorXd::Zero(40);
  d.tail(20).setOnes();
  p = p.with_column("Period b", RegressorRole::PeriodEffect, d);
  const auto fit = ols(p);
  RegressionTable t;
  t.title = "Title";
  t.depvar_label = "Growth";
  t.columns = {{"(1)", fit}};
  t.f_rows = {{"F vs baseline", {WaldResult{12.5, 1, 37, 0.001, false}}}};
  const auto text = render_text(t);
  EXPECT_NE(text.find("Dependent variable: Growth"), std::string::npos);
  EXPECT_NE(text.find(fmt::format("{:.3f}***", fit.coef[1])), std::string::npos);
  EXPECT_NE(text.find("12.500***"), std::string::npos);
  EXPECT_LT(text.find("ECI (trade)"), text.find("Period b"));
  EXPECT_LT(text.find("Period b"), text.find("Intercept"));
  EXPECT_NE(text.find("Observations"), std::string::npos);
  EXPECT_NE(text.find("Adjusted R2"), std::string::npos);
  EXPECT_NE(text.find(t.notes), std::string::npos);

  const auto csv = render_csv(t);
  EXPECT_EQ(csv.rfind("model,term,statistic,value\n", 0), 0u);
  EXPECT_NE(csv.find("(1),ECI (trade),coef,"), std::string::npos);
  EXPECT_NE(csv.find("(1),F vs baseline,f,12.5"), std::string::npos);
}

TEST(Report, EmptyTableIsAnError) {
  EXPECT_THROW(render_text(RegressionTable{}), Error);
  EXPECT_THROW(render_csv(RegressionTable{}), Error);
}

TEST(Report, StudyTableHasOneColumnPerModel) {
  const auto study = fixtures::two_period_growth({"trade", "technology"});
  const auto result = run_study(study, fixtures::planted_growth(21));
  const auto t = study_table(result);
  EXPECT_EQ(t.columns.size(), study.models.size());
  EXPECT_EQ(t.columns[0].header, "(1)");
  ASSERT_FALSE(t.f_rows.empty());
  EXPECT_FALSE(t.f_rows[0].cells[0].has_value());
  EXPECT_TRUE(t.f_rows[0].cells[1].has_value());
}
