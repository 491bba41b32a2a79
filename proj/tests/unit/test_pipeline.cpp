#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <map>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "openness/config.hpp"
#include "openness/error.hpp"
#include "openness/pipeline.hpp"
#include "openness/table.hpp"
#include "temp_dir.hpp"

using namespace openness;
namespace fs = std::filesystem;

namespace {

std::map<std::string, std::string> snapshot(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::recursive_directory_iterator(dir)) {
    if (entry.is_regular_file()) files[fs::relative(entry.path(), dir).generic_string()] = csv::read_text_file(entry.path());
  }
  return files;
}

RunConfig fixture_config(const fs::path& cfg, const fs::path& out, unsigned workers = 1) {
  auto config = load_config(cfg);
  config.out_dir = out.string();
  config.workers = workers;
  return config;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(OPENNESS_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesKeysListsAndComments) {
  const auto c = parse_config(
      "metadata = m.csv  # trailing comment\n"
      "regions = Chiyoda, Chuo ,Minato\n"
      "grid_interval_m=0.25\n"
      "\n"
      "workers = 3\n"
      "analytics = trends\n");
  EXPECT_EQ(c.metadata, "m.csv");
  EXPECT_EQ(c.regions, (std::vector<std::string>{"Chiyoda", "Chuo", "Minato"}));
  EXPECT_EQ(c.grid_interval_m, 0.25);
  EXPECT_EQ(c.workers, 3u);
  EXPECT_EQ(c.analytics, (std::vector<std::string>{"trends"}));
  EXPECT_EQ(c.min_year, 1960);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("colour = blue\n"), ConfigError);
  EXPECT_THROW(parse_config("workers = many\n"), ConfigError);
  EXPECT_THROW(parse_config("just text\n"), ConfigError);
  RunConfig c;
  c.grid_interval_m = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.workers = 0;
  EXPECT_THROW(validate_config(c), ConfigError);
  c = RunConfig{};
  c.analytics = {"maps"};
  EXPECT_THROW(validate_config(c), ConfigError);
}

TEST(Config, CanonicalFormIgnoresOutputAndWorkers) {
  RunConfig a, b;
  b.out_dir = "elsewhere";
  b.workers = 8;
  EXPECT_EQ(canonical_config(a), canonical_config(b));
  b.grid_interval_m = 0.3;
  EXPECT_NE(canonical_config(a), canonical_config(b));
}

TEST(Pipeline, ThreePropertyFixture) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  const auto summary = run_compute(fixture_config(cfg, dir.path() / "out"));
  EXPECT_EQ(summary.funnel.original, 4u);
  EXPECT_EQ(summary.funnel.final_count(), 3u);
  EXPECT_EQ(summary.computed, 3u);
  EXPECT_EQ(summary.failed, 0u);

  const auto metrics = csv::parse(csv::read_text_file(dir.path() / "out" / "metrics.csv"));
  ASSERT_EQ(metrics.size(), 4u);
  EXPECT_EQ(metrics[0].size(), kMetricsColumns.size());
  EXPECT_EQ(metrics[1][0], "p001");
  EXPECT_EQ(metrics[3][0], "p003");
  EXPECT_EQ(csv::parse(csv::read_text_file(dir.path() / "out" / "errors.csv")).size(), 1u);
  for (const auto* id : {"p001", "p002", "p003"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "out" / "heatmaps" / (std::string(id) + ".png"))) << id;
  }

  // p001: 42x32 px box at 0.05 m/px -> 4 px cells, 11x8 grid, 9x6 interior nodes
  EXPECT_EQ(metrics[1][7], "0.050000");
  EXPECT_EQ(metrics[1][8], "11");
  EXPECT_EQ(metrics[1][9], "8");
  EXPECT_EQ(metrics[1][10], "54");
  EXPECT_EQ(metrics[1][11], "53.000000");
  EXPECT_EQ(metrics[1][16], "1.000000");

  const auto manifest = nlohmann::json::parse(csv::read_text_file(dir.path() / "out" / "manifest.json"));
  EXPECT_EQ(manifest["counts"]["computed"], 3);
  EXPECT_EQ(manifest["counts"]["failed"], 0);
  EXPECT_EQ(manifest["config_sha256"].get<std::string>().size(), 64u);
}

TEST(Pipeline, HeatmapMatchesSinglePropertyRender) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  const auto config = fixture_config(cfg, dir.path() / "out");
  run_compute(config);
  render_property(config, "p002", dir.path() / "single.png");
  EXPECT_EQ(csv::read_text_file(dir.path() / "single.png"),
            csv::read_text_file(dir.path() / "out" / "heatmaps" / "p002.png"));
  EXPECT_THROW(render_property(config, "p999", dir.path() / "x.png"), ConfigError);
}

TEST(Pipeline, AllWallPlanIsIsolated) {
  testkit::TempDir good, bad;
  run_compute(fixture_config(testkit::write_three_property_fixture(good.path()), good.path() / "out"));
  const auto summary =
      run_compute(fixture_config(testkit::write_three_property_fixture(bad.path(), true), bad.path() / "out"));
  EXPECT_EQ(summary.computed, 2u);
  EXPECT_EQ(summary.failed, 1u);
  const auto metrics = csv::parse(csv::read_text_file(bad.path() / "out" / "metrics.csv"));
  ASSERT_EQ(metrics.size(), 3u);
  const auto errors = csv::parse(csv::read_text_file(bad.path() / "out" / "errors.csv"));
  ASSERT_EQ(errors.size(), 2u);
  EXPECT_EQ(errors[1][0], "p003");
  EXPECT_EQ(errors[1][1], "floorplan");
  EXPECT_NE(errors[1][2].find("no interior"), std::string::npos);
  EXPECT_FALSE(fs::exists(bad.path() / "out" / "heatmaps" / "p003.png"));

  // The other rows and heatmaps are untouched by the broken plan.
  const auto good_metrics = csv::parse(csv::read_text_file(good.path() / "out" / "metrics.csv"));
  EXPECT_EQ(metrics[1], good_metrics[1]);
  EXPECT_EQ(metrics[2], good_metrics[2]);
  for (const auto* id : {"p001.png", "p002.png"}) {
    EXPECT_EQ(csv::read_text_file(bad.path() / "out" / "heatmaps" / id),
              csv::read_text_file(good.path() / "out" / "heatmaps" / id));
  }
}

TEST(Pipeline, RerunsAreByteIdenticalForAnyWorkerCount) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  for (const auto& [name, workers] : std::vector<std::pair<std::string, unsigned>>{{"a", 1}, {"b", 1}, {"c", 4}}) {
    const auto config = fixture_config(cfg, dir.path() / name, workers);
    run_compute(config);
    run_analytics(config, dir.path() / name / "metrics.csv");
  }
  const auto a = snapshot(dir.path() / "a");
  EXPECT_EQ(a, snapshot(dir.path() / "b"));
  EXPECT_EQ(a, snapshot(dir.path() / "c"));
  EXPECT_TRUE(a.contains("trends.csv"));
  EXPECT_TRUE(a.contains("correlation_pearson.csv"));
}

TEST(Pipeline, AnalyticsOnFixtureMarksSmallSampleCellsMissing) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  const auto config = fixture_config(cfg, dir.path() / "out");
  run_compute(config);
  const auto summary = run_analytics(config, dir.path() / "out" / "metrics.csv");
  for (const auto* name : {"trends.csv", "trend_summary.csv", "regions.csv", "correlation_pearson.csv",
                           "correlation_spearman.csv", "correlation_pearson_matrix.csv",
                           "correlation_spearman_matrix.csv"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "out" / name)) << name;
  }
  EXPECT_EQ(summary.written.size(), 7u);
  const auto rows = csv::parse(csv::read_text_file(dir.path() / "out" / "correlation_pearson.csv"));
  bool saw_latitude = false;
  for (const auto& row : rows) {
    if (row[0] == "mean_visibility" && row[1] == "latitude") {
      saw_latitude = true;
      EXPECT_EQ(row[2], "2");
      EXPECT_EQ(row[3], "");
    }
    if (row[0] == "mean_visibility" && row[1] == "rent") {
      EXPECT_EQ(row[2], "3");
      EXPECT_NE(row[3], "");
    }
  }
  EXPECT_TRUE(saw_latitude);
}

TEST(Pipeline, AnalyticsFailures) {
  testkit::TempDir dir;
  RunConfig config;
  config.out_dir = (dir.path() / "out").string();
  csv::write_text_file(dir.path() / "empty.csv", "");
  EXPECT_THROW(run_analytics(config, dir.path() / "empty.csv"), Error);
  csv::write_text_file(dir.path() / "header.csv", "property_id,region_key,mean_visibility\n");
  EXPECT_THROW(run_analytics(config, dir.path() / "header.csv"), Error);
  try {
    run_analytics(config, dir.path() / "header.csv");
  } catch (const Error& e) {
    // either missing columns or no rows; the message must say which
    EXPECT_FALSE(std::string(e.what()).empty());
  }
  csv::write_text_file(dir.path() / "narrow.csv", "property_id,region_key,mean_visibility\np,X,1\n");
  try {
    run_analytics(config, dir.path() / "narrow.csv");
    FAIL();
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("construction_year"), std::string::npos) << e.what();
  }
  EXPECT_THROW(run_analytics(config, dir.path() / "absent.csv"), IoError);
}

TEST(Pipeline, UnreadableMetadataAborts) {
  testkit::TempDir dir;
  RunConfig config;
  config.base_dir = dir.path();
  config.metadata = "missing.csv";
  config.out_dir = "out";
  EXPECT_THROW(run_compute(config), IoError);
}

TEST(Pipeline, SanitizeAndHash) {
  EXPECT_EQ(sanitize_id("a/b c:d"), "a_b_c_d");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Cli, ExitCodes) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  const auto out = (dir.path() / "cli_out").string();
  EXPECT_EQ(run_cli("compute --config " + cfg.string() + " --out " + out), 0);
  EXPECT_TRUE(fs::exists(fs::path(out) / "metrics.csv"));
  EXPECT_EQ(run_cli("analyze --config " + cfg.string() + " --out " + out), 0);
  EXPECT_EQ(run_cli("funnel --config " + cfg.string() + " --out " + out), 0);
  EXPECT_EQ(run_cli("render --config " + cfg.string() + " --property p001 --out " + out), 0);
  EXPECT_EQ(run_cli("render --mask " + (dir.path() / "plans" / "p002.txt").string() +
                    " --area-m2 1.5 --output " + (dir.path() / "m.png").string()),
            0);

  EXPECT_EQ(run_cli(""), 1);
  EXPECT_EQ(run_cli("compute"), 1);
  EXPECT_EQ(run_cli("compute --bogus"), 1);
  EXPECT_EQ(run_cli("compute --config " + cfg.string() + " --workers 0"), 1);
  EXPECT_EQ(run_cli("compute --config " + (dir.path() / "nope.cfg").string()), 1);

  csv::write_text_file(dir.path() / "bad_meta.cfg", "metadata = missing.csv\n");
  EXPECT_EQ(run_cli("compute --config " + (dir.path() / "bad_meta.cfg").string() + " --out " + out), 2);
  csv::write_text_file(dir.path() / "empty.csv", "");
  EXPECT_NE(run_cli("analyze --metrics " + (dir.path() / "empty.csv").string() + " --out " + out), 0);
}

TEST(Cli, OutputDirectoryFromEnvironment) {
  testkit::TempDir dir;
  const auto cfg = testkit::write_three_property_fixture(dir.path());
  const auto env_out = dir.path() / "env_out";
  const std::string cmd = std::string("OPENNESS_OUT_DIR=") + env_out.string() + " " + OPENNESS_CLI +
                          " funnel --config " + cfg.string() + " >/dev/null 2>&1";
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(env_out / "funnel.csv"));
  EXPECT_FALSE(fs::exists(dir.path() / "out" / "funnel.csv"));
}
