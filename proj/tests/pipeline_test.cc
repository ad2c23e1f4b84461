// tests/pipeline_test.cc

// Copyright 2026 The artikit Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <regex>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "artikit/error.h"
#include "artikit/pipeline.h"
#include "artikit/report.h"
#include "artikit/synth.h"
#include "cli.h"
#include "test_util.h"

namespace artikit {
namespace {

namespace fs = std::filesystem;
using testing::code_of;
using testing::TempDir;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (std::size_t at = text.find(needle); at != std::string::npos; at = text.find(needle, at + 1)) ++n;
  return n;
}

// Configuration ------------------------------------------------------------------

TEST(RunConfigTest, JsonRoundTrip) {
  RunConfig cfg;
  cfg.manifest_path = "data/manifest.json";
  cfg.feature_sources = {"a-layer1", "a-layer2"};
  cfg.lowpass_hz = 8;
  cfg.n_folds = 4;
  cfg.normalization_order = NormalizationOrder::kNormalizeThenFilter;
  cfg.alignment_target = AlignmentTarget::kToGroundTruth;
  cfg.correlation = CorrelationMode::kPerUtterance;
  cfg.paired_test = PairedTestKind::kWilcoxonSignedRank;
  cfg.preference = {"a-layer1", "a-layer2"};
  const nlohmann::json j = cfg;
  const RunConfig back = j.get<RunConfig>();
  EXPECT_EQ(nlohmann::json(back), j);
  EXPECT_EQ(config_hash(back), config_hash(cfg));
}

TEST(RunConfigTest, UnknownKeysRejected) {
  nlohmann::json j = RunConfig{};
  j["lowpas_hz"] = 6;
  EXPECT_EQ(code_of([&] { (void)j.get<RunConfig>(); }), ErrorCode::kInvalidConfig);
}

TEST(RunConfigTest, HashChangesWithEveryField) {
  const RunConfig base;
  const std::string h = config_hash(base);
  EXPECT_EQ(h.size(), 16u);
  std::vector<RunConfig> variants(12, base);
  variants[0].manifest_path = "x.json";
  variants[1].feature_sources = {"s"};
  variants[2].lowpass_hz = 5.5;
  variants[3].n_folds = 4;
  variants[4].lasso_alpha = 0.02;
  variants[5].min_corr = 0.7;
  variants[6].seed = 18;
  variants[7].output_dir = "elsewhere";
  variants[8].normalization_order = NormalizationOrder::kNormalizeThenFilter;
  variants[9].transfer_source = "mfcc";
  variants[10].train_fraction = 0.7;
  variants[11].dialect_corpus = "";
  for (std::size_t i = 0; i < variants.size(); ++i) {
    EXPECT_NE(config_hash(variants[i]), h) << "variant " << i;
  }
}

TEST(RunConfigTest, Validation) {
  RunConfig cfg;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::kInvalidConfig);  // no manifest
  cfg.manifest_path = "manifest.json";
  EXPECT_NO_THROW(cfg.validate());
  cfg.n_folds = 1;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::kInvalidConfig);
  cfg = RunConfig{};
  cfg.manifest_path = "manifest.json";
  cfg.lasso_alpha = -0.1;
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::kInvalidConfig);
  cfg = RunConfig{};
  cfg.manifest_path = "manifest.json";
  cfg.preference = {"only-one"};
  EXPECT_EQ(code_of([&] { cfg.validate(); }), ErrorCode::kInvalidConfig);
}

TEST(RunConfigTest, LoadResolvesRelativePaths) {
  TempDir dir;
  fs::create_directories(dir / "cfg");
  {
    std::ofstream f(dir / "cfg" / "run.json");
    f << R"({"manifest_path": "../data/manifest.json", "output_dir": "out", "seed": 3})";
  }
  const RunConfig cfg = load_run_config(dir / "cfg" / "run.json");
  EXPECT_EQ(fs::weakly_canonical(cfg.manifest_path),
            fs::weakly_canonical(dir / "data" / "manifest.json"));
  EXPECT_EQ(fs::weakly_canonical(cfg.output_dir), fs::weakly_canonical(dir / "cfg" / "out"));
  EXPECT_EQ(cfg.seed, 3u);
  EXPECT_EQ(cfg.n_folds, 5);
}

TEST(Names, RoundTrips) {
  for (auto o : {NormalizationOrder::kFilterThenNormalize, NormalizationOrder::kNormalizeThenFilter}) {
    EXPECT_EQ(parse_normalization_order(normalization_order_name(o)), o);
  }
  for (auto t : {AlignmentTarget::kToPredictions, AlignmentTarget::kToGroundTruth}) {
    EXPECT_EQ(parse_alignment_target(alignment_target_name(t)), t);
  }
  for (auto m : {CorrelationMode::kFoldConcat, CorrelationMode::kPerUtterance}) {
    EXPECT_EQ(parse_correlation_mode(correlation_mode_name(m)), m);
  }
  for (auto k : {PairedTestKind::kPairedT, PairedTestKind::kWilcoxonSignedRank}) {
    EXPECT_EQ(parse_paired_test(paired_test_name(k)), k);
  }
  EXPECT_EQ(code_of([] { parse_paired_test("anova"); }), ErrorCode::kInvalidConfig);
}

TEST(Registry, Hprc) {
  const auto rows = corpus_lookup("HPRC");
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].group, Group::kEnUS);
  EXPECT_EQ(rows[0].speakers, 8);
  EXPECT_DOUBLE_EQ(rows[0].minutes_per_speaker, 59);
  EXPECT_EQ(corpus_lookup("EMA-MAE").size(), 3u);
  EXPECT_EQ(code_of([] { corpus_lookup("NOPE"); }), ErrorCode::kInvalidConfig);
}

TEST(NaturalSort, NumericSuffixes) {
  EXPECT_TRUE(natural_less("xlsr-layer2", "xlsr-layer10"));
  EXPECT_FALSE(natural_less("xlsr-layer10", "xlsr-layer2"));
  EXPECT_TRUE(natural_less("hubert-layer24", "xlsr-layer1"));
  EXPECT_TRUE(natural_less("fbank", "mfcc"));
  EXPECT_FALSE(natural_less("a1", "a1"));
}

// Reports ------------------------------------------------------------------------

TEST(Csv, FloatFormatAndRoundTrip) {
  EXPECT_EQ(format_float(0.123456789), "0.123457");
  EXPECT_EQ(format_float(1.0), "1");
  EXPECT_EQ(format_float(std::numeric_limits<double>::quiet_NaN()), "nan");
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"x", "1"}, {"y", "2.5"}};
  const CsvTable back = parse_csv(to_csv(t));
  EXPECT_EQ(back.header, t.header);
  EXPECT_EQ(back.rows, t.rows);
  EXPECT_EQ(back.column("b"), 1u);
  EXPECT_EQ(code_of([&] { back.column("zzz"); }), ErrorCode::kInvalidReport);
  t.rows[0][0] = "has,comma";
  EXPECT_EQ(code_of([&] { to_csv(t); }), ErrorCode::kInvalidReport);
}

TEST(Csv, MatrixTableRoundTrip) {
  Matrix m(2, 2);
  m << 0.5, std::numeric_limits<double>::quiet_NaN(), 0.25, 1;
  const CsvTable t = matrix_table("speaker", {"a", "b"}, m);
  EXPECT_EQ(t.header, (std::vector<std::string>{"speaker", "a", "b"}));
  std::vector<std::string> labels;
  Matrix back;
  read_matrix_table(parse_csv(to_csv(t)), labels, back);
  EXPECT_EQ(labels, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(back(0, 0), 0.5);
  EXPECT_TRUE(std::isnan(back(0, 1)));
}

TEST(Charts, HeatmapCellsAndLabels) {
  Matrix m(2, 2);
  m << 0.91, 0.5, 0.25, 1.0;
  const std::string svg = svg_heatmap(m, {"a", "b"}, {"a", "b"}, "test");
  EXPECT_EQ(count(svg, "class=\"cell\""), 4);
  EXPECT_EQ(count(svg, "class=\"value\""), 4);
  for (const char* v : {">0.910<", ">0.500<", ">0.250<", ">1.000<"}) {
    EXPECT_NE(svg.find(v), std::string::npos) << v;
  }
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
}

TEST(Charts, EmptyBarChartRejected) {
  EXPECT_EQ(code_of([] { svg_bar_chart({}, Vector(), "empty"); }), ErrorCode::kInvalidReport);
  const std::string svg = svg_bar_chart({"LI.X", "LI.Y"}, Vector::Ones(2), "bars");
  EXPECT_EQ(count(svg, "class=\"bar\""), 2);
}

TEST(Charts, DiagonalPointsSitOnIdentityLine) {
  std::vector<ScatterPoint> points;
  for (int i = 0; i < 9; ++i) {
    const double v = 0.7 + 0.031 * i;
    points.push_back({"s" + std::to_string(i), v, v});
  }
  const std::string svg = svg_scatter(points, "model A", "model B", "pref");
  const ScatterFrame frame = ScatterFrame::fit(points);
  const std::regex circle(R"re(<circle class="point" cx="([-0-9.]+)" cy="([-0-9.]+)")re");
  int seen = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), circle); it != std::sregex_iterator();
       ++it) {
    const double cx = std::stod((*it)[1]), cy = std::stod((*it)[2]);
    // On y = x the pixel coordinates satisfy cy = top + size - (cx - left).
    EXPECT_NEAR(cy, frame.top + frame.size - (cx - frame.left), 0.5);
    ++seen;
  }
  EXPECT_EQ(seen, 9);
  EXPECT_NE(svg.find("class=\"identity\""), std::string::npos);
}

// End to end ---------------------------------------------------------------------

SynthSpec pipeline_spec() {
  SynthSpec spec;
  spec.n_speakers = 6;
  spec.groups = {SynthGroup{}, SynthGroup{Group::kEnBJ, 2, 1.0, {}}};
  spec.frames_per_utt = 200;
  spec.utts_per_speaker = 6;
  spec.feature_dim = 24;
  spec.noise_sigma = 0.3;
  spec.n_layers = 2;
  spec.informative_layer = 1;
  return spec;
}

RunConfig pipeline_config(const fs::path& data, const fs::path& out) {
  RunConfig cfg;
  cfg.manifest_path = data / "manifest.json";
  cfg.output_dir = out;
  cfg.transfer_source = "synth-layer1";
  cfg.dialect_corpus = "";
  cfg.gender_corpus = "";
  cfg.preference = {"synth-layer0", "synth-layer1"};
  cfg.threads = 2;
  return cfg;
}

class EndToEnd : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("artikit-e2e");
    write_cohort(generate(pipeline_spec()), dir_->path() / "data");
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }
  static TempDir* dir_;
};
TempDir* EndToEnd::dir_ = nullptr;

TEST_F(EndToEnd, WritesEveryReport) {
  const fs::path out = dir_->path() / "run1";
  const RunSummary s = run_full_pipeline(pipeline_config(dir_->path() / "data", out));
  EXPECT_EQ(s.speakers.size(), 6u);
  EXPECT_EQ(s.retained.size(), 6u);
  EXPECT_EQ(s.transfer_source, "synth-layer1");
  for (const char* rel :
       {"run_meta.json", "speakers.csv", "preference.csv", "probes/probe_report.json",
        "probes/probe_summary.csv", "probes/layer_sweep.csv", "probes/synth-layer0/spk000.map.json",
        "transfer/matrix.csv", "transfer/group_matrix.csv", "transfer/coef_matrix.csv",
        "transfer/coef_articulators.csv", "transfer/articulator_scores.csv",
        "transfer/pairs/spk000__spk001.map.json", "stats/dialect.json", "stats/gender.json",
        "stats/preference.json", "charts/transfer_matrix.svg", "charts/group_matrix.svg",
        "charts/articulator_scores.svg", "charts/preference.svg"}) {
    EXPECT_TRUE(fs::exists(out / rel)) << rel;
  }
  const CsvTable speakers = read_csv(out / "speakers.csv");
  EXPECT_EQ(speakers.header,
            (std::vector<std::string>{"speaker_id", "corpus", "group", "gender", "minutes",
                                      "best_source", "best_corr", "retained"}));
  const CsvTable scores = read_csv(out / "transfer" / "articulator_scores.csv");
  EXPECT_EQ(scores.header, (std::vector<std::string>{"channel", "score"}));
  EXPECT_EQ(scores.rows.size(), 12u);
  const CsvTable summary = read_csv(out / "probes" / "probe_summary.csv");
  EXPECT_EQ(summary.header, (std::vector<std::string>{"speaker_id", "group", "source", "mean_corr"}));
  // Floats are written with six significant digits, so reformatting is a no-op.
  for (const auto& row : summary.rows) EXPECT_EQ(row[3], format_float(std::stod(row[3])));
  const auto meta = nlohmann::json::parse(slurp(out / "run_meta.json"));
  for (const char* key : {"artikit_version", "config", "config_hash", "versions", "timings_s", "outputs"}) {
    EXPECT_TRUE(meta.contains(key)) << key;
  }
  const auto dialect = nlohmann::json::parse(slurp(out / "stats" / "dialect.json"));
  EXPECT_GT(dialect.at("within_mean").get<double>(), dialect.at("across_mean").get<double>());
}

TEST_F(EndToEnd, RerunIsByteIdentical) {
  const fs::path a = dir_->path() / "rerun_a", b = dir_->path() / "rerun_b";
  RunConfig ca = pipeline_config(dir_->path() / "data", a);
  RunConfig cb = pipeline_config(dir_->path() / "data", b);
  cb.threads = 1;
  run_full_pipeline(ca);
  run_full_pipeline(cb);
  int compared = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    const fs::path rel = fs::relative(entry.path(), a);
    EXPECT_EQ(slurp(entry.path()), slurp(b / rel)) << rel;
    ++compared;
  }
  EXPECT_GE(compared, 9);
}

TEST_F(EndToEnd, MissingTransferSourceFallsBackWithWarning) {
  RunConfig cfg = pipeline_config(dir_->path() / "data", dir_->path() / "fallback");
  cfg.transfer_source = "xlsr-layer17";
  const RunSummary s = run_full_pipeline(cfg);
  EXPECT_EQ(s.transfer_source, "synth-layer1");
  EXPECT_FALSE(s.warnings.empty());
}

TEST_F(EndToEnd, ReportRegeneratesCharts) {
  const fs::path out = dir_->path() / "report";
  run_full_pipeline(pipeline_config(dir_->path() / "data", out));
  fs::remove_all(out / "charts");
  const auto files = emit_charts(read_report_bundle(out), out);
  EXPECT_EQ(files.size(), 4u);
  EXPECT_TRUE(fs::exists(out / "charts" / "group_matrix.svg"));
}

// CLI ----------------------------------------------------------------------------

int cli_run(std::vector<std::string> args, std::string* err_text = nullptr) {
  args.insert(args.begin(), "artikit");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

TEST_F(EndToEnd, CliExitCodes) {
  EXPECT_EQ(cli_run({"--help"}), 0);
  EXPECT_EQ(cli_run({"no-such-command"}), 2);
  EXPECT_EQ(cli_run({"probe", "--manifest"}), 2);
  std::string err;
  EXPECT_EQ(cli_run({"probe", "--manifest", (dir_->path() / "missing.json").string(), "--source",
                     "x", "--out", (dir_->path() / "p").string()},
                    &err),
            3);
  EXPECT_NE(err.find("missing.json"), std::string::npos) << err;
  const fs::path cfg_path = dir_->path() / "bad.json";
  {
    std::ofstream f(cfg_path);
    f << R"({"n_folds": 1})";
  }
  EXPECT_EQ(cli_run({"run", "--config", cfg_path.string()}), 2);
}

TEST_F(EndToEnd, CliProbeTransferCompare) {
  const fs::path data = dir_->path() / "data";
  const fs::path probes = dir_->path() / "cli_probes";
  const fs::path transfer = dir_->path() / "cli_transfer";
  ASSERT_EQ(cli_run({"probe", "--manifest", (data / "manifest.json").string(), "--source",
                     "synth-layer1", "--out", probes.string()}),
            0);
  EXPECT_TRUE(fs::exists(probes / "spk000.map.json"));
  EXPECT_TRUE(fs::exists(probes / "probe_report.json"));
  ASSERT_EQ(cli_run({"transfer", "--probes", probes.string(), "--manifest",
                     (data / "manifest.json").string(), "--out", transfer.string()}),
            0);
  EXPECT_TRUE(fs::exists(transfer / "matrix.csv"));
  const fs::path sweep = dir_->path() / "sweep.csv";
  ASSERT_EQ(cli_run({"layer-sweep", "--manifest", (data / "manifest.json").string(), "--sources",
                     "synth-layer0,synth-layer1", "--out", sweep.string()}),
            0);
  const CsvTable t = read_csv(sweep);
  EXPECT_EQ(t.rows.size(), 12u);
}

}  // namespace
}  // namespace artikit
