// tests/synth_test.cc

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

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "artikit/alignment.h"
#include "artikit/dataset.h"
#include "artikit/error.h"
#include "artikit/filter.h"
#include "artikit/preprocess.h"
#include "artikit/probing.h"
#include "artikit/stats.h"
#include "artikit/synth.h"
#include "test_util.h"

namespace artikit {
namespace {

using testing::code_of;
using testing::TempDir;

SynthSpec small_spec() {
  SynthSpec spec;
  spec.n_speakers = 4;
  spec.frames_per_utt = 200;
  spec.utts_per_speaker = 6;
  spec.feature_dim = 24;
  return spec;
}

std::vector<InversionProbe> probes_for(const std::vector<SpeakerData>& data) {
  std::vector<InversionProbe> out;
  for (const auto& d : data) {
    out.push_back(fit_probe(d, CvPlan::make(d.utterance_ids(), 5, 17), ProbeConfig{}));
  }
  return out;
}

TEST(SynthSpecTest, Validation) {
  SynthSpec spec = small_spec();
  EXPECT_NO_THROW(spec.validate());
  spec.feature_dim = 11;
  EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::kInvalidSpec);
  spec = small_spec();
  spec.max_latent_hz = 30.0;  // above Nyquist at 50 Hz
  EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::kInvalidSpec);
  spec = small_spec();
  spec.noise_sigma = -1;
  EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::kInvalidSpec);
  spec = small_spec();
  spec.informative_layer = 1;
  EXPECT_EQ(code_of([&] { spec.validate(); }), ErrorCode::kInvalidSpec);
}

TEST(SynthSpecTest, JsonRoundTripAndUnknownFields) {
  SynthSpec spec = small_spec();
  spec.groups = {SynthGroup{Group::kEnUS, 0, 1.0, {}}, SynthGroup{Group::kEnBJ, 2, 0.5, {}}};
  spec.noise_sigma = 0.25;
  spec.n_layers = 3;
  spec.informative_layer = 2;
  const nlohmann::json j = spec;
  const SynthSpec back = j.get<SynthSpec>();
  EXPECT_EQ(nlohmann::json(back), j);
  nlohmann::json bad = j;
  bad["mystery"] = 1;
  EXPECT_EQ(code_of([&] { (void)bad.get<SynthSpec>(); }), ErrorCode::kInvalidSpec);
  // A misspelt group key must not silently leave the distortion at zero.
  bad = j;
  bad["groups"][1]["rank"] = 2;
  EXPECT_EQ(code_of([&] { (void)bad.get<SynthSpec>(); }), ErrorCode::kInvalidSpec);
}

TEST(Generate, Shapes) {
  const SynthCohort c = generate(small_spec());
  ASSERT_EQ(c.speakers.size(), 4u);
  EXPECT_EQ(c.lift.rows(), 24);
  EXPECT_EQ(c.lift.cols(), 12);
  for (const auto& s : c.speakers) {
    ASSERT_EQ(s.ema.size(), 6u);
    EXPECT_EQ(s.ema[0].samples.rows(), 200);
    EXPECT_EQ(s.ema[0].samples.cols(), 12);
    EXPECT_EQ(s.features.size(), 1u);
    EXPECT_EQ(s.features[0][0].values.cols(), 24);
    EXPECT_EQ(s.features[0][0].values.rows(), 200);
    // Anatomy must stay well conditioned.
    Eigen::JacobiSVD<Matrix> svd(s.anatomy);
    const auto& sv = svd.singularValues();
    EXPECT_LE(sv(0) / sv(sv.size() - 1), 100.0);
  }
}

TEST(Generate, LatentIsUnitVarianceAndOrthogonal) {
  const SynthCohort c = generate(small_spec());
  for (const auto& z : c.speakers[0].latent) {
    const Matrix zc = z.rowwise() - z.colwise().mean();
    const Matrix cov = zc.transpose() * zc / static_cast<double>(z.rows());
    EXPECT_LT((cov - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Generate, BitIdenticalRegenerationAndThreadIndependence) {
  SynthSpec spec = small_spec();
  spec.noise_sigma = 0.3;
  const SynthCohort a = generate(spec, 1);
  const SynthCohort b = generate(spec, 1);
  const SynthCohort t = generate(spec, 3);
  for (std::size_t s = 0; s < a.speakers.size(); ++s) {
    for (std::size_t u = 0; u < a.speakers[s].ema.size(); ++u) {
      EXPECT_EQ(a.speakers[s].ema[u].samples, b.speakers[s].ema[u].samples);
      EXPECT_EQ(a.speakers[s].ema[u].samples, t.speakers[s].ema[u].samples);
      EXPECT_EQ(a.speakers[s].features[0][u].values, t.speakers[s].features[0][u].values);
    }
  }
  spec.seed = 2;
  EXPECT_NE(generate(spec).speakers[0].ema[0].samples, a.speakers[0].ema[0].samples);
}

TEST(Generate, SignalsAreInBand) {
  const SynthCohort c = generate(small_spec());
  for (const auto& s : c.speakers) {
    for (const auto& e : s.ema) {
      const EmaTrajectory f = lowpass_filter(e, 6.0);
      // Edge transients are a property of the filter, not the signal.
      const Eigen::Index n = e.samples.rows() - 40;
      const Matrix inner = e.samples.middleRows(20, n);
      const Matrix centred = inner.rowwise() - inner.colwise().mean();
      EXPECT_LT((f.samples.middleRows(20, n) - inner).norm() / centred.norm(), 0.01);
    }
  }
}

TEST(Generate, NoiselessProbesAreNearPerfect) {
  const SynthCohort c = generate(small_spec());
  for (const auto& p : probes_for(c.speaker_data(0))) EXPECT_GE(p.mean_corr, 0.999) << p.speaker_id;
}

TEST(Generate, NoiseLevelHitsTargetCorrelation) {
  SynthSpec spec = small_spec();
  spec.utts_per_speaker = 10;
  spec.frames_per_utt = 500;
  spec.feature_dim = 64;
  const double gain = lowpass_noise_gain(6.0, spec.ema_rate);
  spec.noise_sigma = noise_sigma_for_corr(0.9, gain);
  EXPECT_NEAR(theoretical_corr(spec.noise_sigma, gain), 0.9, 1e-12);
  const SynthCohort c = generate(spec);
  for (const auto& p : probes_for(c.speaker_data(0))) {
    EXPECT_NEAR(p.mean_corr, 0.9, 0.03) << p.speaker_id;
  }
}

TEST(Generate, NoiseGainMatchesFilter) {
  EXPECT_NEAR(lowpass_noise_gain(6.0, 50.0),
              white_noise_variance_gain(ButterworthLowpass(5, 6.0, 50.0)), 1e-12);
  EXPECT_NEAR(theoretical_corr(0.0), 1.0, 1e-15);
  EXPECT_NEAR(theoretical_corr(1.0), 1.0 / std::sqrt(2.0), 1e-15);
}

TEST(Generate, InformativeLayerWinsSweep) {
  SynthSpec spec = small_spec();
  spec.n_speakers = 2;
  spec.n_layers = 4;
  spec.informative_layer = 2;
  const SynthCohort c = generate(spec);
  std::vector<std::vector<SpeakerData>> layers;
  for (int l = 0; l < spec.n_layers; ++l) layers.push_back(c.speaker_data(l));
  for (std::size_t s = 0; s < 2; ++s) {
    std::vector<SpeakerData> per_speaker;
    for (const auto& l : layers) per_speaker.push_back(l[s]);
    const auto r = layer_sweep(per_speaker, CvPlan::make(per_speaker[0].utterance_ids(), 5, 17),
                               ProbeConfig{});
    EXPECT_EQ(r.best_layer, 2u);
    EXPECT_EQ(r.probes[2].source, spec.layer_source(2));
  }
}

TEST(Generate, IdealAlignmentIsCompetitive) {
  SynthSpec spec = small_spec();
  spec.noise_sigma = 0.2;
  const SynthCohort c = generate(spec);
  const auto data = c.speaker_data(0);
  const auto probes = probes_for(data);
  const AlignmentConfig cfg;
  for (std::size_t a = 0; a < 2; ++a) {
    const std::size_t b = a + 1;
    const AffineAlignment fitted = fit_alignment(probes[a], probes[b], data[b], cfg);
    const auto [train, test] =
        split_utterances(data[b].utterance_ids(), cfg.train_fraction, cfg.split_seed);
    const Matrix x = stack_features(data[b], test);
    AffineMap ideal;
    ideal.weights = ideal_alignment(c, a, b);
    ideal.bias = Vector::Zero(12);
    const Matrix pred = apply(ideal, apply(probes[a].map, x));
    const Matrix ref = apply(probes[b].map, x);
    double mean = 0.0;
    for (Eigen::Index k = 0; k < 12; ++k) mean += pearson(pred.col(k), ref.col(k)) / 12.0;
    EXPECT_GE(mean, fitted.mean_corr - 0.01);
  }
}

TEST(Generate, IdealAlignmentNeedsSharedDistortion) {
  SynthSpec spec = small_spec();
  spec.groups = {SynthGroup{}, SynthGroup{Group::kEnBJ, 2, 1.0, {}}};
  const SynthCohort c = generate(spec);
  ASSERT_NE(c.speakers[0].group_index, c.speakers[1].group_index);
  EXPECT_EQ(code_of([&] { ideal_alignment(c, 0, 1); }), ErrorCode::kInvalidSpec);
}

double dialect_gap(int rank) {
  SynthSpec spec = small_spec();
  spec.n_speakers = 6;
  spec.noise_sigma = 0.2;
  spec.groups = {SynthGroup{}, SynthGroup{Group::kEnBJ, rank, 1.0, {}}};
  const SynthCohort c = generate(spec);
  const auto data = c.speaker_data(0);
  const auto probes = probes_for(data);
  const TransferResult r = transferability_matrix(probes, data, AlignmentConfig{}, 1);
  std::vector<std::string> cells;
  for (const auto& s : c.speakers) cells.emplace_back(group_name(s.meta.group));
  const WithinAcross w = within_across(r.matrix, cells, std::vector<bool>(cells.size(), true));
  return w.within_mean - w.across_mean;
}

TEST(Generate, DialectGapGrowsWithDistortion) {
  const double g1 = dialect_gap(1), g2 = dialect_gap(2), g3 = dialect_gap(3);
  EXPECT_GT(g1, 0.0);
  EXPECT_GT(g2, g1);
  EXPECT_GT(g3, g2);
}

TEST(WriteCohort, FilesAndManifestLoad) {
  SynthSpec spec = small_spec();
  spec.n_speakers = 2;
  spec.n_layers = 2;
  spec.informative_layer = 1;
  const SynthCohort c = generate(spec);
  TempDir dir;
  const auto entries = write_cohort(c, dir.path());
  EXPECT_EQ(entries.size(), 2u * 6u * 2u);
  EXPECT_TRUE(std::filesystem::exists(dir / "manifest.json"));
  EXPECT_TRUE(std::filesystem::exists(dir / "ground_truth.json"));
  const std::vector<std::string> sources{spec.layer_source(1)};
  const Dataset ds = load_dataset(dir / "manifest.json", sources, PreprocessConfig{}, 1);
  ASSERT_EQ(ds.speakers.size(), 2u);
  EXPECT_EQ(ds.speakers[0].corpus, "SYNTH");
  const auto direct = c.speaker_data(1);
  const auto& loaded = ds.source(spec.layer_source(1));
  // AKF stores f32, so values agree to single precision.
  for (std::size_t s = 0; s < 2; ++s) {
    ASSERT_EQ(loaded[s].utterances.size(), direct[s].utterances.size());
    for (std::size_t u = 0; u < loaded[s].utterances.size(); ++u) {
      EXPECT_LT((loaded[s].utterances[u].ema - direct[s].utterances[u].ema).cwiseAbs().maxCoeff(),
                1e-4);
    }
  }
  const auto truth = nlohmann::json::parse(std::ifstream(dir / "ground_truth.json"));
  EXPECT_EQ(truth.at("speakers").size(), 2u);
}

}  // namespace
}  // namespace artikit
