// core/src/synth.cc

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

#include "artikit/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include <Eigen/QR>

#include "artikit/error.h"
#include "artikit/filter.h"
#include "artikit/parallel.h"
#include "artikit/rng.h"

namespace artikit {

namespace {

using nlohmann::json;

constexpr int kChannels = static_cast<int>(kNumChannels);
constexpr int kArticulators = static_cast<int>(kNumArticulators);

// Substream indices for cohort-wide draws; speakers use their own index.
constexpr std::uint64_t kLiftStream = 1ull << 40;
constexpr std::uint64_t kGroupStream = 2ull << 40;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(ErrorCode::kInvalidSpec, "distortion must be a non-empty array of rows");
  }
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (j[r].size() != j[0].size()) fail(ErrorCode::kInvalidSpec, "ragged distortion matrix");
    for (std::size_t c = 0; c < j[r].size(); ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = j[r][c].get<double>();
    }
  }
  return m;
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s%03zu", prefix, i);
  return buf;
}

Matrix random_orthonormal(Rng& rng, int rows, int cols) {
  Matrix g(rows, cols);
  for (Eigen::Index c = 0; c < g.cols(); ++c) {
    for (Eigen::Index r = 0; r < g.rows(); ++r) g(r, c) = rng.normal();
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(rows, cols);
}

struct Sinusoid {
  double freq_hz;
  double amplitude;
  double phase;
};

// Draws channel frequencies as distinct integer cycle counts so that every
// channel has zero mean and the channels are orthogonal over the utterance.
std::vector<std::vector<Sinusoid>> draw_latent(const SynthSpec& spec, Rng& rng) {
  const double duration = spec.frames_per_utt / spec.ema_rate;
  const auto k_lo = static_cast<long>(std::ceil(spec.min_latent_hz * duration));
  const auto k_hi = std::min(static_cast<long>(std::floor(spec.max_latent_hz * duration)),
                             static_cast<long>((spec.frames_per_utt - 1) / 2));
  std::vector<long> ks;
  for (long k = std::max(1L, k_lo); k <= k_hi; ++k) ks.push_back(k);
  const int per_channel =
      std::min(spec.max_sinusoids, static_cast<int>(ks.size()) / kChannels);
  // validate() guarantees per_channel >= 1.
  std::vector<std::vector<Sinusoid>> channels(kChannels);
  std::size_t taken = 0;
  for (int c = 0; c < kChannels; ++c) {
    double power = 0.0;
    for (int i = 0; i < per_channel; ++i, ++taken) {
      const std::size_t pick = taken + rng.below(ks.size() - taken);
      std::swap(ks[taken], ks[pick]);
      Sinusoid s;
      s.freq_hz = static_cast<double>(ks[taken]) / duration;
      s.amplitude = rng.uniform(0.5, 1.5);
      s.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      power += 0.5 * s.amplitude * s.amplitude;
      channels[static_cast<std::size_t>(c)].push_back(s);
    }
    for (auto& s : channels[static_cast<std::size_t>(c)]) s.amplitude /= std::sqrt(power);
  }
  return channels;
}

Matrix sample_latent(const std::vector<std::vector<Sinusoid>>& channels, Eigen::Index n,
                     double period, double offset) {
  Matrix z = Matrix::Zero(n, kChannels);
  for (std::size_t c = 0; c < channels.size(); ++c) {
    for (const auto& s : channels[c]) {
      for (Eigen::Index t = 0; t < n; ++t) {
        const double time = static_cast<double>(t) * period + offset;
        z(t, static_cast<Eigen::Index>(c)) +=
            s.amplitude * std::sin(2.0 * std::numbers::pi * s.freq_hz * time + s.phase);
      }
    }
  }
  return z;
}

Matrix draw_anatomy(const SynthSpec& spec, Gender gender, Rng& rng) {
  Matrix m = Matrix::Zero(kChannels, kChannels);
  const double factor = gender == Gender::kMale ? spec.male_scale : 1.0;
  for (int a = 0; a < kArticulators; ++a) {
    const double scale =
        factor * rng.uniform(spec.anatomy_scale_range.first, spec.anatomy_scale_range.second);
    const double theta = rng.uniform(-spec.max_rotation, spec.max_rotation);
    const int i = 2 * a;
    m(i, i) = scale * std::cos(theta);
    m(i, i + 1) = -scale * std::sin(theta);
    m(i + 1, i) = scale * std::sin(theta);
    m(i + 1, i + 1) = scale * std::cos(theta);
  }
  return m;
}

SynthSpeaker generate_speaker(const SynthSpec& spec, const SynthCohort& cohort, std::size_t index) {
  Rng rng = Rng(spec.seed).substream(index);
  SynthSpeaker sp;
  sp.group_index = index % spec.groups.size();
  sp.meta.speaker_id = numbered("spk", index);
  sp.meta.corpus = spec.corpus;
  sp.meta.group = spec.groups[sp.group_index].group;
  sp.meta.gender = index % 2 == 0 ? Gender::kMale : Gender::kFemale;
  sp.meta.minutes = spec.utts_per_speaker * spec.frames_per_utt / spec.ema_rate / 60.0;
  sp.anatomy = draw_anatomy(spec, sp.meta.gender, rng);
  sp.offset.resize(kChannels);
  for (Eigen::Index c = 0; c < kChannels; ++c) {
    sp.offset(c) = rng.uniform(-spec.offset_range, spec.offset_range);
  }
  const Matrix mix = sp.anatomy * cohort.distortions[sp.group_index];  // 12 x 12
  sp.signal_std = mix.rowwise().norm();

  const Eigen::Index n_ema = spec.frames_per_utt;
  const double duration = n_ema / spec.ema_rate;
  const auto n_feat = static_cast<Eigen::Index>(std::floor(duration / spec.frame_hop + 1e-9));
  sp.features.assign(static_cast<std::size_t>(spec.n_layers), {});

  for (int u = 0; u < spec.utts_per_speaker; ++u) {
    Rng urng = rng.substream(static_cast<std::uint64_t>(u));
    const auto channels = draw_latent(spec, urng);
    Matrix z = sample_latent(channels, n_ema, 1.0 / spec.ema_rate, 0.5 / spec.ema_rate);
    const Matrix z_feat =
        sample_latent(channels, n_feat, spec.frame_hop, 0.5 * spec.frame_hop);

    EmaTrajectory ema;
    ema.speaker_id = sp.meta.speaker_id;
    ema.utterance_id = numbered("utt", static_cast<std::size_t>(u));
    ema.frame_rate = spec.ema_rate;
    ema.channel_order = canonical_channel_order();
    ema.samples = z * mix.transpose();
    ema.samples.rowwise() += sp.offset.transpose();
    if (spec.noise_sigma > 0.0) {
      for (Eigen::Index c = 0; c < kChannels; ++c) {
        const double sd = spec.noise_sigma * sp.signal_std(c);
        for (Eigen::Index t = 0; t < n_ema; ++t) ema.samples(t, c) += sd * urng.normal();
      }
    }

    for (int layer = 0; layer < spec.n_layers; ++layer) {
      FeatureMatrix f;
      f.speaker_id = sp.meta.speaker_id;
      f.utterance_id = ema.utterance_id;
      f.source = spec.layer_source(layer);
      f.frame_hop = spec.frame_hop;
      if (layer == spec.informative_layer) {
        f.values = z_feat * cohort.lift.transpose();
        if (spec.feature_noise > 0.0) {
          for (Eigen::Index d = 0; d < f.values.cols(); ++d) {
            for (Eigen::Index t = 0; t < f.values.rows(); ++t) {
              f.values(t, d) += spec.feature_noise * urng.normal();
            }
          }
        }
      } else {
        f.values.resize(n_feat, spec.feature_dim);
        for (Eigen::Index d = 0; d < f.values.cols(); ++d) {
          for (Eigen::Index t = 0; t < f.values.rows(); ++t) f.values(t, d) = urng.normal();
        }
      }
      sp.features[static_cast<std::size_t>(layer)].push_back(std::move(f));
    }
    sp.latent.push_back(std::move(z));
    sp.ema.push_back(std::move(ema));
  }
  return sp;
}

}  // namespace

void SynthSpec::validate() const {
  auto bad = [](const std::string& msg) { fail(ErrorCode::kInvalidSpec, msg); };
  if (n_speakers < 1) bad("n_speakers must be positive");
  if (groups.empty()) bad("at least one group is required");
  if (utts_per_speaker < 1) bad("utts_per_speaker must be positive");
  if (frames_per_utt < 2) bad("frames_per_utt must be at least 2");
  if (latent_dim != kChannels) bad("latent_dim must be 12");
  if (feature_dim < latent_dim) bad("feature_dim must be at least latent_dim");
  if (!(noise_sigma >= 0.0) || !(feature_noise >= 0.0)) bad("noise levels must be nonnegative");
  const auto [lo, hi] = anatomy_scale_range;
  if (!(lo > 0.0) || !(hi >= lo)) bad("anatomy_scale_range must satisfy 0 < lo <= hi");
  if (!(male_scale > 0.0)) bad("male_scale must be positive");
  const double cond = hi * std::max(1.0, male_scale) / (lo * std::min(1.0, male_scale));
  if (cond > 100.0) bad("anatomy condition number bound exceeds 100");
  if (!(ema_rate > 0.0) || !(frame_hop > 0.0)) bad("ema_rate and frame_hop must be positive");
  if (!(min_latent_hz > 0.0) || !(max_latent_hz > min_latent_hz)) bad("bad latent band");
  if (max_latent_hz >= 0.5 * ema_rate) bad("latent band must stay below Nyquist");
  if (max_sinusoids < 1) bad("max_sinusoids must be positive");
  const double duration = frames_per_utt / ema_rate;
  const long k_lo = std::max(1L, static_cast<long>(std::ceil(min_latent_hz * duration)));
  const long k_hi = std::min(static_cast<long>(std::floor(max_latent_hz * duration)),
                             static_cast<long>((frames_per_utt - 1) / 2));
  if (k_hi - k_lo + 1 < kChannels) {
    bad("utterances too short for 12 distinct latent frequencies in the latent band");
  }
  if (std::floor(duration / frame_hop + 1e-9) < 1) bad("utterance shorter than one feature frame");
  if (n_layers < 1) bad("n_layers must be positive");
  if (informative_layer < 0 || informative_layer >= n_layers) bad("informative_layer out of range");
  for (const auto& g : groups) {
    if (g.distortion) {
      if (g.distortion->rows() != kChannels || g.distortion->cols() != kChannels) {
        bad("explicit distortion must be 12 x 12");
      }
      if (!g.distortion->allFinite()) bad("distortion has non-finite entries");
    } else {
      if (g.distortion_rank < 0 || g.distortion_rank > kChannels) {
        bad("distortion_rank must lie in [0, 12]");
      }
      if (!(g.distortion_strength >= 0.0 && g.distortion_strength <= 1.0)) {
        bad("distortion_strength must lie in [0, 1]");
      }
    }
  }
}

std::string SynthSpec::layer_source(int layer) const {
  return source_prefix + "-layer" + std::to_string(layer);
}

void to_json(json& j, const SynthSpec& s) {
  json groups = json::array();
  for (const auto& g : s.groups) {
    json jg = {{"group", std::string(group_name(g.group))},
               {"distortion_rank", g.distortion_rank},
               {"distortion_strength", g.distortion_strength}};
    if (g.distortion) jg["distortion"] = matrix_to_json(*g.distortion);
    groups.push_back(std::move(jg));
  }
  j = json{{"n_speakers", s.n_speakers},
           {"groups", std::move(groups)},
           {"frames_per_utt", s.frames_per_utt},
           {"utts_per_speaker", s.utts_per_speaker},
           {"latent_dim", s.latent_dim},
           {"feature_dim", s.feature_dim},
           {"noise_sigma", s.noise_sigma},
           {"feature_noise", s.feature_noise},
           {"anatomy_scale_range", {s.anatomy_scale_range.first, s.anatomy_scale_range.second}},
           {"male_scale", s.male_scale},
           {"max_rotation", s.max_rotation},
           {"offset_range", s.offset_range},
           {"ema_rate", s.ema_rate},
           {"frame_hop", s.frame_hop},
           {"min_latent_hz", s.min_latent_hz},
           {"max_latent_hz", s.max_latent_hz},
           {"max_sinusoids", s.max_sinusoids},
           {"n_layers", s.n_layers},
           {"informative_layer", s.informative_layer},
           {"source_prefix", s.source_prefix},
           {"corpus", s.corpus},
           {"seed", s.seed}};
}

void from_json(const json& j, SynthSpec& s) {
  if (!j.is_object()) fail(ErrorCode::kInvalidSpec, "synth spec must be a JSON object");
  static const std::set<std::string> known = {
      "n_speakers", "groups", "frames_per_utt", "utts_per_speaker", "latent_dim",
      "feature_dim", "noise_sigma", "feature_noise", "anatomy_scale_range", "male_scale",
      "max_rotation", "offset_range", "ema_rate", "frame_hop", "min_latent_hz",
      "max_latent_hz", "max_sinusoids", "n_layers", "informative_layer", "source_prefix",
      "corpus", "seed"};
  for (const auto& [key, value] : j.items()) {
    if (!known.count(key)) fail(ErrorCode::kInvalidSpec, "unknown synth spec field '" + key + "'");
  }
  try {
    SynthSpec d;
    s.n_speakers = j.value("n_speakers", d.n_speakers);
    s.frames_per_utt = j.value("frames_per_utt", d.frames_per_utt);
    s.utts_per_speaker = j.value("utts_per_speaker", d.utts_per_speaker);
    s.latent_dim = j.value("latent_dim", d.latent_dim);
    s.feature_dim = j.value("feature_dim", d.feature_dim);
    s.noise_sigma = j.value("noise_sigma", d.noise_sigma);
    s.feature_noise = j.value("feature_noise", d.feature_noise);
    if (j.contains("anatomy_scale_range")) {
      const auto& r = j.at("anatomy_scale_range");
      if (!r.is_array() || r.size() != 2) {
        fail(ErrorCode::kInvalidSpec, "anatomy_scale_range must be [lo, hi]");
      }
      s.anatomy_scale_range = {r[0].get<double>(), r[1].get<double>()};
    } else {
      s.anatomy_scale_range = d.anatomy_scale_range;
    }
    s.male_scale = j.value("male_scale", d.male_scale);
    s.max_rotation = j.value("max_rotation", d.max_rotation);
    s.offset_range = j.value("offset_range", d.offset_range);
    s.ema_rate = j.value("ema_rate", d.ema_rate);
    s.frame_hop = j.value("frame_hop", d.frame_hop);
    s.min_latent_hz = j.value("min_latent_hz", d.min_latent_hz);
    s.max_latent_hz = j.value("max_latent_hz", d.max_latent_hz);
    s.max_sinusoids = j.value("max_sinusoids", d.max_sinusoids);
    s.n_layers = j.value("n_layers", d.n_layers);
    s.informative_layer = j.value("informative_layer", d.informative_layer);
    s.source_prefix = j.value("source_prefix", d.source_prefix);
    s.corpus = j.value("corpus", d.corpus);
    s.seed = j.value("seed", d.seed);
    if (j.contains("groups")) {
      s.groups.clear();
      static const std::set<std::string> group_keys = {"group", "distortion_rank",
                                                       "distortion_strength", "distortion"};
      for (const auto& jg : j.at("groups")) {
        for (const auto& [key, value] : jg.items()) {
          if (!group_keys.count(key)) {
            fail(ErrorCode::kInvalidSpec, "unknown synth group field '" + key + "'");
          }
        }
        SynthGroup g;
        g.group = parse_group(jg.at("group").get<std::string>());
        g.distortion_rank = jg.value("distortion_rank", 0);
        g.distortion_strength = jg.value("distortion_strength", 1.0);
        if (jg.contains("distortion")) g.distortion = matrix_from_json(jg.at("distortion"));
        s.groups.push_back(std::move(g));
      }
    } else {
      s.groups = d.groups;
    }
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidSpec, e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kInvalidSpec) throw;
    fail(ErrorCode::kInvalidSpec, e.what());
  }
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidSpec, path.string() + ": " + e.what());
  }
  SynthSpec spec = j.get<SynthSpec>();
  spec.validate();
  return spec;
}

std::vector<SpeakerMeta> SynthCohort::metas() const {
  std::vector<SpeakerMeta> out;
  for (const auto& sp : speakers) out.push_back(sp.meta);
  return out;
}

std::vector<SpeakerData> SynthCohort::speaker_data(int layer, const PreprocessConfig& cfg) const {
  if (layer < 0 || layer >= spec.n_layers) fail(ErrorCode::kInvalidConfig, "layer out of range");
  std::vector<SpeakerData> out;
  for (const auto& sp : speakers) {
    SpeakerData data;
    data.speaker_id = sp.meta.speaker_id;
    data.source = spec.layer_source(layer);
    for (std::size_t u = 0; u < sp.ema.size(); ++u) {
      auto [ema, feat] =
          preprocess_pair(sp.ema[u], sp.features[static_cast<std::size_t>(layer)][u], cfg);
      data.utterances.push_back({ema.utterance_id, std::move(feat.values), std::move(ema.samples)});
    }
    out.push_back(std::move(data));
  }
  return out;
}

SynthCohort generate(const SynthSpec& spec, unsigned threads) {
  spec.validate();
  SynthCohort cohort;
  cohort.spec = spec;

  Rng lift_rng = Rng(spec.seed).substream(kLiftStream);
  cohort.lift.resize(spec.feature_dim, kChannels);
  const double lift_scale = 1.0 / std::sqrt(static_cast<double>(kChannels));
  for (Eigen::Index c = 0; c < cohort.lift.cols(); ++c) {
    for (Eigen::Index r = 0; r < cohort.lift.rows(); ++r) {
      cohort.lift(r, c) = lift_scale * lift_rng.normal();
    }
  }

  for (std::size_t g = 0; g < spec.groups.size(); ++g) {
    const auto& group = spec.groups[g];
    if (group.distortion) {
      cohort.distortions.push_back(*group.distortion);
    } else if (group.distortion_rank == 0) {
      cohort.distortions.push_back(Matrix::Identity(kChannels, kChannels));
    } else {
      Rng grng = Rng(spec.seed).substream(kGroupStream + g);
      const Matrix u = random_orthonormal(grng, kChannels, group.distortion_rank);
      cohort.distortions.push_back(Matrix::Identity(kChannels, kChannels) -
                                   group.distortion_strength * u * u.transpose());
    }
  }

  cohort.speakers.resize(static_cast<std::size_t>(spec.n_speakers));
  parallel_for(cohort.speakers.size(), threads == 0 ? default_thread_count() : threads,
               [&](std::size_t i) { cohort.speakers[i] = generate_speaker(spec, cohort, i); });
  return cohort;
}

json ground_truth_json(const SynthCohort& cohort) {
  json distortions = json::array();
  for (std::size_t g = 0; g < cohort.distortions.size(); ++g) {
    distortions.push_back({{"group", std::string(group_name(cohort.spec.groups[g].group))},
                           {"matrix", matrix_to_json(cohort.distortions[g])}});
  }
  json speakers = json::array();
  for (const auto& sp : cohort.speakers) {
    json utts = json::array();
    for (const auto& e : sp.ema) utts.push_back(e.utterance_id);
    speakers.push_back({{"speaker_id", sp.meta.speaker_id},
                        {"group", std::string(group_name(sp.meta.group))},
                        {"gender", std::string(gender_name(sp.meta.gender))},
                        {"anatomy", matrix_to_json(sp.anatomy)},
                        {"offset", vector_to_json(sp.offset)},
                        {"signal_std", vector_to_json(sp.signal_std)},
                        {"utterances", std::move(utts)}});
  }
  json channels = json::array();
  for (const auto& ch : canonical_channels()) channels.push_back(channel_name(ch));
  const double gain = lowpass_noise_gain(kDefaultLowpassHz, cohort.spec.ema_rate);
  return json{{"spec", json(cohort.spec)},
              {"channel_order", std::move(channels)},
              {"lift", matrix_to_json(cohort.lift)},
              {"distortions", std::move(distortions)},
              {"speakers", std::move(speakers)},
              {"lowpass_noise_gain", gain},
              {"theoretical_corr", theoretical_corr(cohort.spec.noise_sigma, gain)}};
}

std::vector<ManifestEntry> write_cohort(const SynthCohort& cohort, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  std::vector<ManifestEntry> entries;
  for (const auto& sp : cohort.speakers) {
    for (std::size_t u = 0; u < sp.ema.size(); ++u) {
      const std::string utt = sp.ema[u].utterance_id;
      const fs::path ema_rel = fs::path("ema") / sp.meta.speaker_id / (utt + ".akf");
      write_akf(sp.ema[u], dir / ema_rel);

      FeatureMatrix latent;
      latent.speaker_id = sp.meta.speaker_id;
      latent.utterance_id = utt;
      latent.source = "latent";
      latent.frame_hop = 1.0 / cohort.spec.ema_rate;
      latent.values = sp.latent[u];
      write_akf(latent, dir / "latent" / sp.meta.speaker_id / (utt + ".akf"));

      for (int layer = 0; layer < cohort.spec.n_layers; ++layer) {
        const auto& f = sp.features[static_cast<std::size_t>(layer)][u];
        const fs::path feat_rel = fs::path("features") / f.source / sp.meta.speaker_id / (utt + ".akf");
        write_akf(f, dir / feat_rel);
        ManifestEntry e;
        e.speaker_id = sp.meta.speaker_id;
        e.group = sp.meta.group;
        e.gender = sp.meta.gender;
        e.utterance_id = utt;
        e.feature_path = feat_rel;
        e.ema_path = ema_rel;
        e.source = f.source;
        e.corpus = sp.meta.corpus;
        entries.push_back(std::move(e));
      }
    }
  }
  write_manifest(entries, dir / "manifest.json");
  write_text_file(dir / "ground_truth.json", ground_truth_json(cohort).dump(1) + "\n");
  return entries;
}

double theoretical_corr(double noise_sigma, double noise_gain) {
  return 1.0 / std::sqrt(1.0 + noise_sigma * noise_sigma * noise_gain);
}

double noise_sigma_for_corr(double corr, double noise_gain) {
  if (!(corr > 0.0 && corr <= 1.0) || !(noise_gain > 0.0)) {
    fail(ErrorCode::kInvalidSpec, "target correlation must lie in (0, 1]");
  }
  return std::sqrt((1.0 / (corr * corr) - 1.0) / noise_gain);
}

double lowpass_noise_gain(double cutoff_hz, double sample_rate, int order) {
  return white_noise_variance_gain(ButterworthLowpass(order, cutoff_hz, sample_rate));
}

Matrix ideal_alignment(const SynthCohort& cohort, std::size_t a, std::size_t b) {
  const auto& sa = cohort.speakers.at(a);
  const auto& sb = cohort.speakers.at(b);
  if (cohort.distortions[sa.group_index] != cohort.distortions[sb.group_index]) {
    fail(ErrorCode::kInvalidSpec, "ideal alignment needs speakers sharing a distortion");
  }
  const Matrix g = sb.signal_std.cwiseInverse().asDiagonal() * sb.anatomy *
                   sa.anatomy.inverse() * sa.signal_std.asDiagonal();
  return g.transpose();
}

}  // namespace artikit
