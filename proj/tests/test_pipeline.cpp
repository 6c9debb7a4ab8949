#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "mdc/config.hpp"
#include "mdc/csv.hpp"
#include "mdc/error.hpp"
#include "mdc/pipeline.hpp"
#include "mdc/synthetic.hpp"

namespace fs = std::filesystem;
using namespace mdc;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("mdc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path small_fixture(const std::string& name) {
  SyntheticOptions o;
  o.economies = 40;
  o.activities = 60;
  o.filters = false;
  o.seed = 7;
  return write_synthetic_fixture(scratch(name), o);
}

}  // namespace

TEST(Pipeline, RunsAllStagesOnSmallFixture) {
  const auto config_path = small_fixture("all");
  const auto config = load_run_config(config_path);
  const auto report = run_pipeline(config);
  EXPECT_EQ(report.stages.size(), 5u);
  for (const char* study : {"growth", "inequality", "emissions"}) {
    EXPECT_TRUE(fs::exists(config.output_dir / "regress" / study / "table.txt")) << study;
    EXPECT_TRUE(fs::exists(config.output_dir / "regress" / study / "table.csv")) << study;
    EXPECT_TRUE(report.selected_models.count(study));
  }
  EXPECT_TRUE(fs::exists(config.output_dir / "metrics" / "scores.csv"));
  EXPECT_TRUE(fs::exists(config.output_dir / "manifest.json"));
}

TEST(Pipeline, SelectionCsvIsConsistent) {
  const auto config = load_run_config(small_fixture("selection"));
  run_pipeline(config);
  std::ifstream in(config.output_dir / "regress" / "growth" / "selection.csv");
  csv::Reader reader(in);
  const auto model = reader.require("model"), r2 = reader.require("r2"), passes = reader.require("passes"),
             chosen = reader.require("chosen");
  std::vector<std::string> row;
  std::string best, marked;
  double best_r2 = -1.0;
  while (reader.next(row)) {
    const double v = *csv::parse_double(row[r2]);
    if (row[passes] == "true" && v > best_r2) {
      best_r2 = v;
      best = row[model];
    }
    if (row[chosen] == "true") marked = row[model];
  }
  EXPECT_EQ(marked, best);
}

TEST(Pipeline, Deterministic) {
  const auto config = load_run_config(small_fixture("det"));
  auto first = run_pipeline(config);
  std::map<std::string, std::string> contents;
  for (const auto& f : first.files) contents[f.generic_string()] = slurp(config.output_dir / f);
  auto second = run_pipeline(config);
  ASSERT_EQ(first.files, second.files);
  for (const auto& f : second.files) EXPECT_EQ(contents[f.generic_string()], slurp(config.output_dir / f)) << f;
}

TEST(Pipeline, MetricsOnlyStopsBeforeRegressions) {
  auto config = load_run_config(small_fixture("metrics_only"));
  config.stages = {Stage::Ingest, Stage::Specialize, Stage::Metrics};
  const auto report = run_pipeline(config);
  EXPECT_TRUE(fs::exists(config.output_dir / "metrics" / "scores.csv"));
  EXPECT_FALSE(fs::exists(config.output_dir / "regress"));
  EXPECT_FALSE(fs::exists(config.output_dir / "instrument"));
  EXPECT_EQ(report.stages.size(), 3u);
}

TEST(Pipeline, MissingInputFailsBeforeWriting) {
  auto config = load_run_config(small_fixture("missing"));
  config.dimensions[0].path = config.dimensions[0].path.parent_path() / "absent.csv";
  try {
    run_pipeline(config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Io);
  }
  EXPECT_FALSE(fs::exists(config.output_dir / "metrics"));
}

TEST(Pipeline, ManifestHashesEveryOutput) {
  const auto config = load_run_config(small_fixture("manifest"));
  const auto report = run_pipeline(config);
  const auto manifest = nlohmann::json::parse(slurp(config.output_dir / "manifest.json"));
  const auto& outputs = manifest.at("outputs");
  for (const auto& f : report.files) {
    if (f == "manifest.json") continue;
    ASSERT_TRUE(outputs.contains(f.generic_string())) << f;
    EXPECT_EQ(outputs.at(f.generic_string()).get<std::string>(), sha256_file(config.output_dir / f));
  }
  EXPECT_TRUE(manifest.at("inputs").contains("dimension:trade"));
  EXPECT_EQ(manifest.at("selected_models").size(), 3u);
}

TEST(Pipeline, Sha256KnownVector) {
  const auto dir = scratch("sha");
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  EXPECT_EQ(sha256_file(dir / "abc.txt"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Config, RejectsUnknownKeysAndBadTypes) {
  const auto dir = scratch("config");
  auto check = [&](const std::string& text) {
    std::ofstream(dir / "c.json") << text;
    try {
      load_run_config(dir / "c.json");
      ADD_FAILURE() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config) << text;
    }
  };
  check(R"({"dimensions": [{"name": "trade", "path": "t.csv"}], "colour": 1})");
  check(R"({"dimensions": []})");
  check(R"({"dimensions": [{"name": "trade", "path": "t.csv"}], "rca_threshold": "one"})");
  check(R"({"dimensions": [{"name": "trade", "path": "t.csv"}], "stages": ["ingest", "cook"]})");
  check(R"({"dimensions": [{"name": "trade", "path": "t.csv"}], "studies": [{"preset": "growth", "periods": [["a", 1]]}]})");
  check("{not json");
}
