#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <hollowpca/experiments/harness.hpp>

using namespace hollowpca;
using namespace hollowpca::experiments;

namespace {

json base(const std::string& experiment) {
  return json{{"schema_version", 1}, {"experiment", experiment}, {"seed", 7}, {"replicates", 2}};
}

// Small, fast configuration of every experiment.
std::vector<json> small_configs() {
  std::vector<json> out;
  json h = base("hollowing-demo");
  h["params"] = {{"n", 40}, {"d", 60}};
  out.push_back(h);
  json c = base("csbm-phase");
  c["params"] = {{"n", 60}, {"d", 60}};
  c["grid"] = {{"a", {6, 8}}};
  out.push_back(c);
  json s = base("csbm-modified-sparse");
  s["params"] = {{"n", 80}, {"d", 80}, {"a", 6}};
  out.push_back(s);
  json g = base("gmm-rate");
  g["params"] = {{"n", 120}, {"d", 120}};
  g["grid"] = {{"snr", {2, 4}}};
  out.push_back(g);
  json l = base("lp-approx");
  l["params"] = {{"n", 80}, {"d", 40}};
  l["options"] = {{"model", "identity"}, {"p_strategy", "log"}};
  out.push_back(l);
  json k = base("kmeans-mixture");
  k["params"] = {{"n", 60}, {"d", 30}};
  k["options"] = {{"geometry", "simplex"}};
  out.push_back(k);
  return out;
}

std::string expect_config_error(const json& doc) {
  try {
    validate(parse_config(doc));
  } catch (const ConfigError& e) {
    return e.what();
  }
  ADD_FAILURE() << "accepted: " << doc.dump();
  return {};
}

}  // namespace

TEST(Config, KindNamesRoundTrip) {
  for (const auto& spec : catalog()) EXPECT_EQ(parse_kind(to_string(spec.kind)), spec.kind);
  EXPECT_FALSE(parse_kind("nope").has_value());
  EXPECT_EQ(catalog().size(), 6u);
}

TEST(Config, SchemaErrors) {
  json doc = base("hollowing-demo");
  doc.erase("seed");
  EXPECT_NE(expect_config_error(doc).find("seed"), std::string::npos);

  doc = base("hollowing-demo");
  doc["schema_version"] = 2;
  EXPECT_NE(expect_config_error(doc).find("schema_version"), std::string::npos);

  doc = base("hollowing-demo");
  doc["bogus"] = 1;
  EXPECT_NE(expect_config_error(doc).find("bogus"), std::string::npos);

  doc = base("no-such-experiment");
  EXPECT_NE(expect_config_error(doc).find("no-such-experiment"), std::string::npos);

  doc = base("hollowing-demo");
  doc["replicates"] = 0;
  expect_config_error(doc);

  doc = base("hollowing-demo");
  doc["params"] = {{"q_exponent", 1}};
  EXPECT_NE(expect_config_error(doc).find("q_exponent"), std::string::npos);

  doc = base("hollowing-demo");
  doc["params"] = {{"d", 5}};
  doc["grid"] = {{"d", {1, 2}}};
  expect_config_error(doc);

  doc = base("gmm-rate");
  doc["options"] = {{"eigensolver", "magic"}};
  expect_config_error(doc);

  doc = base("hollowing-demo");
  doc["grid"] = {{"d", {{"from", 5}, {"to", 1}, {"step", 1}}}};
  expect_config_error(doc);

  doc = base("hollowing-demo");
  doc["name"] = "../escape";
  expect_config_error(doc);
}

TEST(Config, ModelInvariantsReportedWithPoint) {
  json doc = base("csbm-phase");
  doc["params"] = {{"n", 20}};
  doc["grid"] = {{"a", {1, 50}}};
  const auto msg = expect_config_error(doc);
  EXPECT_NE(msg.find("grid point 1"), std::string::npos) << msg;
}

TEST(Config, RangeAxisAndOrdering) {
  json doc = base("csbm-phase");
  doc["grid"] = {{"a", {{"from", 0.5}, {"to", 2}, {"step", 0.5}}}, {"b", {1, 2}}};
  const auto cfg = parse_config(doc);
  const auto pts = expand_grid(cfg);
  ASSERT_EQ(pts.size(), 8u);
  // last axis varies fastest
  EXPECT_EQ(pts[0]["a"], 0.5);
  EXPECT_EQ(pts[0]["b"], 1.0);
  EXPECT_EQ(pts[1]["b"], 2.0);
  EXPECT_EQ(pts[7]["a"], 2.0);
  EXPECT_EQ(pts[3]["c"], 1.5);  // default
  EXPECT_EQ(pts[0].option("estimator"), "aggregated");
  for (std::size_t i = 0; i < pts.size(); ++i) EXPECT_EQ(pts[i].stream, static_cast<Index>(i));
}

TEST(Config, PointsCrossAxesAndPairedAxesShareStreams) {
  json doc = base("kmeans-mixture");
  doc["points"] = {{{"n", 60}}, {{"n", 90}}};
  doc["grid"] = {{"r", {2, 3}}};
  doc["paired_axes"] = {"r"};
  const auto pts = expand_grid(parse_config(doc));
  ASSERT_EQ(pts.size(), 4u);
  EXPECT_EQ(pts[0].stream, pts[1].stream);
  EXPECT_EQ(pts[2].stream, pts[3].stream);
  EXPECT_NE(pts[0].stream, pts[2].stream);
  EXPECT_EQ(pts[2]["n"], 90.0);

  doc["paired_axes"] = {"d"};
  EXPECT_THROW(parse_config(doc), ConfigError);
}

TEST(Config, ResolvedConfigReparses) {
  json doc = base("lp-approx");
  doc["grid"] = {{"n", {100, 200}}};
  const auto cfg = parse_config(doc);
  const json resolved = resolved_config(cfg);
  EXPECT_EQ(resolved["params"]["d"], 200.0);
  EXPECT_EQ(resolved["options"]["model"], "gmm");
  const auto again = parse_config(resolved);
  const auto a = expand_grid(cfg), b = expand_grid(again);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].values, b[i].values);
}

TEST(Harness, EveryExperimentRunsAndIsDeterministicAcrossWorkers) {
  for (const auto& doc : small_configs()) {
    const auto cfg = parse_config(doc);
    const auto serial = run_experiment(cfg, {1});
    const auto parallel = run_experiment(cfg, {4});
    EXPECT_EQ(format_csv(serial, false), format_csv(parallel, false)) << cfg.name;
    EXPECT_EQ(serial.failures(), 0) << cfg.name;
    for (const auto& rec : serial.records)
      for (double m : rec.metrics) EXPECT_FALSE(std::isinf(m)) << cfg.name;
  }
}

TEST(Harness, SeedStreamsAndRecordOrder) {
  auto doc = small_configs()[3];
  const auto cfg = parse_config(doc);
  const auto res = run_experiment(cfg, {1});
  ASSERT_EQ(res.records.size(), 4u);
  EXPECT_EQ(res.records[1].grid_index, 0);
  EXPECT_EQ(res.records[1].replicate, 1);
  EXPECT_EQ(res.records[2].seed_stream, "7:1/0");
  EXPECT_EQ(res.records[2].seed_stream, replicate_seed(cfg, res.points[1], 0).to_string());
}

TEST(Harness, DifferentSeedChangesResults) {
  auto doc = small_configs()[0];
  const auto a = run_experiment(parse_config(doc), {1});
  doc["seed"] = 8;
  const auto b = run_experiment(parse_config(doc), {1});
  EXPECT_NE(a.records[0].metrics, b.records[0].metrics);
}

TEST(Harness, CsvLayout) {
  const auto res = run_experiment(parse_config(small_configs()[0]), {1});
  std::istringstream csv(format_csv(res));
  std::string first, header, row;
  std::getline(csv, first);
  std::getline(csv, header);
  std::getline(csv, row);
  EXPECT_EQ(first, "# hollowpca-results v1 experiment=hollowing-demo");
  EXPECT_EQ(header.rfind("experiment,grid_index,n,d,mu_norm,outlier_variance,base_variance,replicate,seed_stream,status,", 0),
            0u);
  EXPECT_EQ(header.substr(header.size() - 10), ",wall_time");
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), std::count(row.begin(), row.end(), ','));
  EXPECT_EQ(res.artifacts[0].rows(), 40);
}

TEST(Harness, WriteOutputs) {
  const auto dir = std::filesystem::temp_directory_path() / "hollowpca_test_outputs";
  std::filesystem::remove_all(dir);
  const auto res = run_experiment(parse_config(small_configs()[3]), {1});
  const auto files = write_outputs(res, dir.string());
  EXPECT_EQ(files.size(), 4u);  // no artifacts for gmm-rate
  std::ifstream summary(dir / "gmm-rate_summary.json");
  const json j = json::parse(summary);
  EXPECT_EQ(j["records"], 4);
  EXPECT_EQ(j["failures"], 0);
  std::filesystem::remove_all(dir);
}

TEST(Harness, Statistics) {
  EXPECT_DOUBLE_EQ(median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(median({4, 1, 2, 3}), 2.5);
  EXPECT_TRUE(std::isnan(mean({})));
  EXPECT_NEAR(fit_slope({1, 2, 3, 4}, {1, -1, -3, -5}), -2.0, 1e-14);
  EXPECT_TRUE(std::isnan(fit_slope({1}, {1})));
}
