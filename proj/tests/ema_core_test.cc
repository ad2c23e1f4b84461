// tests/ema_core_test.cc

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
#include <cstring>
#include <numeric>

#include <gtest/gtest.h>

#include "artikit/akf.h"
#include "artikit/error.h"
#include "artikit/filter.h"
#include "artikit/preprocess.h"
#include "artikit/rng.h"
#include "artikit/types.h"
#include "oracles.h"
#include "test_util.h"

namespace artikit {
namespace {

using testing::code_of;
using testing::TempDir;

EmaTrajectory make_ema(const Matrix& samples, double rate) {
  EmaTrajectory e;
  e.speaker_id = "s1";
  e.utterance_id = "u1";
  e.frame_rate = rate;
  e.samples = samples;
  return e;
}

FeatureMatrix make_features(Eigen::Index frames, Eigen::Index dim, double hop) {
  FeatureMatrix f;
  f.speaker_id = "s1";
  f.utterance_id = "u1";
  f.source = "test";
  f.frame_hop = hop;
  f.values = Matrix::Zero(frames, dim);
  for (Eigen::Index t = 0; t < frames; ++t) f.values(t, 0) = static_cast<double>(t);
  return f;
}

// Channels --------------------------------------------------------------------

TEST(Channels, CanonicalOrder) {
  const char* expected[] = {"LI.X", "LI.Y", "UL.X", "UL.Y", "LL.X", "LL.Y",
                            "TT.X", "TT.Y", "TB.X", "TB.Y", "TD.X", "TD.Y"};
  const auto& channels = canonical_channels();
  ASSERT_EQ(channels.size(), 12u);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(channel_name(channels[i]), expected[i]);
    EXPECT_EQ(canonical_index(channels[i]), i);
    EXPECT_EQ(parse_channel(expected[i]), channels[i]);
  }
}

TEST(Channels, ParseAcceptsCommonSpellings) {
  const ArticulatorChannel tty{Articulator::kTT, Axis::kY};
  EXPECT_EQ(parse_channel("TT_Y"), tty);
  EXPECT_EQ(parse_channel("tty"), tty);
  EXPECT_EQ(code_of([] { parse_channel("XX.Y"); }), ErrorCode::kMalformedMetadata);
}

TEST(Channels, ToCanonicalOrderPermutesColumns) {
  Rng rng(3);
  EmaTrajectory e = make_ema(testing::random_normal(rng, 5, 12), 100);
  std::vector<ArticulatorChannel> order = canonical_channel_order();
  std::reverse(order.begin(), order.end());
  e.channel_order = order;
  const EmaTrajectory c = e.to_canonical_order();
  for (int j = 0; j < 12; ++j) EXPECT_EQ(c.samples.col(j), e.samples.col(11 - j));
}

TEST(Channels, ValidateRejectsDuplicatedChannel) {
  EmaTrajectory e = make_ema(Matrix::Zero(4, 12), 100);
  e.channel_order[1] = e.channel_order[0];
  EXPECT_THROW(e.validate(), Error);
}

// normalize_ema -------------------------------------------------------------------

TEST(Normalize, TwoSampleClip) {
  Matrix m = Matrix::Ones(2, 12);
  m.col(0) << 1, 3;
  m.rightCols(11).row(1).setConstant(2.0);
  const auto out = normalize_ema(make_ema(m, 100));
  EXPECT_DOUBLE_EQ(out.samples(0, 0), -1.0);
  EXPECT_DOUBLE_EQ(out.samples(1, 0), 1.0);
}

TEST(Normalize, MomentsOfRandomClip) {
  Rng rng(11);
  Matrix m = 3.0 * testing::random_normal(rng, 100, 12);
  m.rowwise() += RowVector::LinSpaced(12, -50, 50);
  const auto out = normalize_ema(make_ema(m, 100));
  for (int c = 0; c < 12; ++c) {
    const double mean = out.samples.col(c).mean();
    const double var = (out.samples.col(c).array() - mean).square().mean();
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_LT(std::abs(var - 1.0), 1e-6);
  }
}

TEST(Normalize, Idempotent) {
  Rng rng(12);
  const auto once = normalize_ema(make_ema(testing::random_normal(rng, 50, 12), 100));
  const auto twice = normalize_ema(once);
  EXPECT_LT((once.samples - twice.samples).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Normalize, Errors) {
  Rng rng(13);
  Matrix m = testing::random_normal(rng, 10, 12);
  m.col(7).setConstant(4.0);
  try {
    normalize_ema(make_ema(m, 100));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kZeroVarianceChannel);
    EXPECT_NE(std::string(e.what()).find("TT.Y"), std::string::npos);
  }
  EXPECT_EQ(code_of([&] { normalize_ema(make_ema(m.topRows(1), 100)); }),
            ErrorCode::kDegenerateClip);
}

// Filter ---------------------------------------------------------------------------

TEST(Filter, PassbandSineMatchesResponseOracle) {
  const auto x = testing::sine(500, 1.0, 50.0);
  ButterworthLowpass f(5, 6.0, 50.0);
  const auto y = f.filtfilt(x);
  const double ratio = testing::rms(y, 50) / testing::rms(x, 50);
  const double expected = oracle::zero_phase_butterworth_gain(1.0, 6.0, 50.0, 5);
  EXPECT_NEAR(ratio, expected, 2e-3);
  EXPECT_NEAR(ratio, 1.0, 0.02);
}

TEST(Filter, StopbandSineIsRemoved) {
  const auto x = testing::sine(500, 20.0, 50.0);
  ButterworthLowpass f(5, 6.0, 50.0);
  const auto y = f.filtfilt(x);
  EXPECT_LT(testing::rms(y, 50) / testing::rms(x, 50), 0.01);
}

TEST(Filter, SinglePassResponseMatchesAnalyticMagnitude) {
  ButterworthLowpass f(5, 6.0, 50.0);
  for (double hz : {0.0, 1.0, 3.0, 6.0, 9.0, 15.0, 24.0}) {
    const double h2 = std::norm(f.response(hz));
    EXPECT_NEAR(h2, oracle::zero_phase_butterworth_gain(hz, 6.0, 50.0, 5), 1e-9) << hz;
  }
}

TEST(Filter, ZeroPhaseCrossCorrelationPeaksAtLagZero) {
  const auto x = testing::sine(400, 2.3, 50.0, 1.0, 0.4);
  const auto y = ButterworthLowpass(5, 6.0, 50.0).filtfilt(x);
  int best_lag = 99;
  double best = -1e300;
  for (int lag = -10; lag <= 10; ++lag) {
    double s = 0.0;
    for (int i = 50; i < 350; ++i) s += x[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i + lag)];
    if (s > best) {
      best = s;
      best_lag = lag;
    }
  }
  EXPECT_EQ(best_lag, 0);
}

TEST(Filter, ZerosStayZeroAndLinearity) {
  ButterworthLowpass f(5, 6.0, 50.0);
  const std::vector<double> zeros(100, 0.0);
  for (double v : f.filtfilt(zeros)) EXPECT_EQ(v, 0.0);

  Rng rng(5);
  std::vector<double> a(200), b(200), mix(200);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    mix[i] = 2.5 * a[i] - 0.75 * b[i];
  }
  const auto fa = f.filtfilt(a), fb = f.filtfilt(b), fm = f.filtfilt(mix);
  double scale = 0.0;
  for (double v : fm) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(fm[i], 2.5 * fa[i] - 0.75 * fb[i], 1e-9 * scale);
  }
}

TEST(Filter, ConstantSignalPassesUnchanged) {
  const std::vector<double> x(80, 3.25);
  for (double v : ButterworthLowpass(5, 6.0, 50.0).filtfilt(x)) EXPECT_NEAR(v, 3.25, 1e-9);
}

TEST(Filter, Preconditions) {
  EXPECT_EQ(code_of([] { ButterworthLowpass(5, 25.0, 50.0); }), ErrorCode::kCutoffAboveNyquist);
  EXPECT_EQ(code_of([] { ButterworthLowpass(5, 30.0, 50.0); }), ErrorCode::kCutoffAboveNyquist);
  Rng rng(1);
  const auto short_clip = make_ema(testing::random_normal(rng, 15, 12), 50);
  EXPECT_EQ(code_of([&] { lowpass_filter(short_clip, 6.0); }), ErrorCode::kClipTooShortForFilter);
  const auto ok_clip = make_ema(testing::random_normal(rng, 16, 12), 50);
  EXPECT_EQ(lowpass_filter(ok_clip, 6.0).frames(), 16);
}

TEST(Filter, WhiteNoiseGainMatchesSimulation) {
  ButterworthLowpass f(5, 6.0, 50.0);
  Rng rng(99);
  std::vector<double> x(200000);
  for (double& v : x) v = rng.normal();
  const auto y = f.filtfilt(x);
  const double sim = std::pow(testing::rms(y, 100), 2) / std::pow(testing::rms(x, 100), 2);
  EXPECT_NEAR(white_noise_variance_gain(f), sim, 0.01);
}

// align_frames -------------------------------------------------------------------------

TEST(Align, MatchingRatesAreIdentity) {
  Rng rng(2);
  const auto ema = make_ema(testing::random_normal(rng, 100, 12), 50.0);
  const auto feat = make_features(100, 3, 0.02);
  const auto [e, f] = align_frames(ema, feat);
  ASSERT_EQ(e.frames(), 100);
  ASSERT_EQ(f.frames(), 100);
  EXPECT_LT((e.samples - ema.samples).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Align, LinearRampStaysLinear) {
  Matrix m(100, 12);
  for (int t = 0; t < 100; ++t) m.row(t).setConstant(t / 99.0);
  const auto [e, f] = align_frames(make_ema(m, 100.0), make_features(50, 2, 0.02));
  ASSERT_GE(e.frames(), 2);
  const double slope = e.samples(1, 0) - e.samples(0, 0);
  for (Eigen::Index t = 0; t < e.frames(); ++t) {
    EXPECT_NEAR(e.samples(t, 3), e.samples(0, 3) + slope * static_cast<double>(t), 1e-9);
  }
  EXPECT_NEAR(slope, 2.0 / 99.0, 1e-12);
}

TEST(Align, OverlapArithmetic) {
  Rng rng(4);
  const auto ema = make_ema(testing::random_normal(rng, 200, 12), 100.0);
  const auto feat = make_features(120, 4, 0.02);
  const auto [e, f] = align_frames(ema, feat);
  EXPECT_EQ(e.frames(), 100);
  EXPECT_EQ(f.frames(), 100);
  EXPECT_DOUBLE_EQ(e.frame_rate, 50.0);
  // Swapping which stream is longer gives the same aligned length.
  const auto [e2, f2] = align_frames(make_ema(testing::random_normal(rng, 240, 12), 100.0),
                                     make_features(100, 4, 0.02));
  EXPECT_EQ(e2.frames(), 100);
  EXPECT_EQ(f2.frames(), 100);
}

TEST(Align, EmptyOverlap) {
  Rng rng(4);
  const auto ema = make_ema(testing::random_normal(rng, 1, 12), 1000.0);
  const auto feat = make_features(10, 4, 0.02);
  EXPECT_EQ(code_of([&] { align_frames(ema, feat); }), ErrorCode::kEmptyOverlap);
}

TEST(Preprocess, OrderFlagChangesPipelineOrder) {
  Rng rng(8);
  Matrix m = testing::random_normal(rng, 200, 12);
  const auto ema = make_ema(m, 50.0);
  const auto feat = make_features(200, 3, 0.02);
  PreprocessConfig a, b;
  b.order = NormalizationOrder::kNormalizeThenFilter;
  const auto pa = preprocess_pair(ema, feat, a).first;
  const auto pb = preprocess_pair(ema, feat, b).first;
  // Filter-then-normalize leaves unit variance; the reverse order does not.
  const double var_a = (pa.samples.col(0).array() - pa.samples.col(0).mean()).square().mean();
  const double var_b = (pb.samples.col(0).array() - pb.samples.col(0).mean()).square().mean();
  EXPECT_NEAR(var_a, 1.0, 1e-6);
  EXPECT_LT(var_b, 0.9);
}

// AKF -----------------------------------------------------------------------------------

TEST(Akf, RoundTripEma) {
  TempDir dir;
  Rng rng(21);
  EmaTrajectory e = make_ema(testing::random_normal(rng, 3, 12).cast<float>().cast<double>(), 200);
  write_akf(e, dir / "a.akf");
  const auto back = read_ema(dir / "a.akf");
  EXPECT_EQ(back.samples, e.samples);
  EXPECT_EQ(back.speaker_id, "s1");
  EXPECT_EQ(back.utterance_id, "u1");
  EXPECT_EQ(back.frame_rate, 200);
  EXPECT_EQ(back.channel_order, e.channel_order);
}

TEST(Akf, RoundTripFeatures) {
  Rng rng(22);
  FeatureMatrix f = make_features(7, 5, 0.02);
  f.values = testing::random_normal(rng, 7, 5).cast<float>().cast<double>();
  const auto bytes = encode_akf(f);
  const auto back = std::get<FeatureMatrix>(decode_akf(bytes));
  EXPECT_EQ(back.values, f.values);
  EXPECT_EQ(back.source, "test");
  EXPECT_EQ(back.frame_hop, 0.02);
}

TEST(Akf, CorruptionTaxonomy) {
  const FeatureMatrix f = make_features(3, 2, 0.02);
  const auto good = encode_akf(f);

  auto bytes = good;
  bytes[0] = 'X';
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kBadMagic);

  bytes = good;
  bytes[3] = '2';
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kUnsupportedVersion);

  bytes = good;
  bytes[4] = 7;
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kUnsupportedVersion);

  bytes = good;
  bytes.resize(bytes.size() - 1);
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kTruncatedPayload);

  bytes = good;
  bytes.resize(10);
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kTruncatedPayload);

  EXPECT_EQ(code_of([&] { decode_akf(std::vector<std::uint8_t>{}); }),
            ErrorCode::kTruncatedPayload);

  bytes = good;
  std::memset(bytes.data() + 9, 0, 4);  // D = 0
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kDimensionMismatch);

  bytes = good;
  bytes.push_back(0);
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kDimensionMismatch);

  bytes = good;
  bytes[25] = '[';  // metadata no longer parses as an object
  EXPECT_NE(code_of([&] { decode_akf(bytes); }), ErrorCode::kIo);

  bytes = good;
  const float nan = std::numeric_limits<float>::quiet_NaN();
  std::memcpy(bytes.data() + bytes.size() - 4, &nan, 4);
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kNonFiniteValue);
}

TEST(Akf, EmaNeedsTwelveColumns) {
  FeatureMatrix f = make_features(3, 11, 0.02);
  auto bytes = encode_akf(f);
  bytes[4] = 1;  // relabel as EMA
  EXPECT_EQ(code_of([&] { decode_akf(bytes); }), ErrorCode::kDimensionMismatch);
}

TEST(EmaCsv, RoundTripWithSidecar) {
  TempDir dir;
  Rng rng(23);
  const auto e = make_ema(testing::random_normal(rng, 6, 12), 100);
  write_ema_csv(e, dir / "clip.csv");
  EXPECT_TRUE(std::filesystem::exists(dir / "clip.json"));
  const auto back = read_ema(dir / "clip.csv");
  EXPECT_EQ(back.samples, e.samples);
  EXPECT_EQ(back.frame_rate, 100);
}

TEST(Manifest, RelativePathsResolveAgainstManifest) {
  TempDir dir;
  ManifestEntry m;
  m.speaker_id = "s1";
  m.group = Group::kEnBJ;
  m.gender = Gender::kFemale;
  m.utterance_id = "u1";
  m.feature_path = "feats/u1.akf";
  m.ema_path = "ema/u1.akf";
  m.corpus = "EMA-MAE";
  write_manifest({m}, dir / "sub" / "manifest.json");
  const auto back = read_manifest(dir / "sub" / "manifest.json");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].group, Group::kEnBJ);
  EXPECT_EQ(back[0].gender, Gender::kFemale);
  EXPECT_EQ(back[0].feature_path, dir / "sub" / "feats/u1.akf");
  EXPECT_EQ(back[0].corpus, "EMA-MAE");
  write_text_file(dir / "bad.json", "{\"not\": \"an array\"}");
  EXPECT_EQ(code_of([&] { read_manifest(dir / "bad.json"); }), ErrorCode::kInvalidManifest);
}

TEST(Groups, NamesRoundTrip) {
  for (Group g : all_groups()) EXPECT_EQ(parse_group(group_name(g)), g);
  EXPECT_EQ(group_name(Group::kMandarin), "MAN");
  EXPECT_EQ(code_of([] { parse_group("EN.AU"); }), ErrorCode::kInvalidManifest);
}

}  // namespace
}  // namespace artikit
