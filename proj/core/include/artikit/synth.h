// core/include/artikit/synth.h

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

#ifndef ARTIKIT_SYNTH_H_
#define ARTIKIT_SYNTH_H_

// Synthetic articulatory/acoustic cohorts with known generating maps.
//
// Every utterance has a 12-channel latent trajectory z, a sum of sinusoids
// completing an integer number of cycles over the utterance, each channel
// with unit variance and all channels mutually orthogonal. For speaker s in
// group g:
//
//   ema      = M_s D_g z + c_s + eps,   eps_c ~ N(0, (noise_sigma * std_c)^2)
//   features = P z + eta,               eta ~ N(0, feature_noise^2)
//
// where M_s is block diagonal with one scaled rotation per articulator, D_g is
// the group's distortion and std_c is the noiseless standard deviation of
// channel c. P is shared across speakers.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "artikit/akf.h"
#include "artikit/preprocess.h"
#include "artikit/probing.h"
#include "artikit/types.h"

namespace artikit {

struct SynthGroup {
  Group group = Group::kEnUS;
  /// D = I - strength * U U^T for a random orthonormal U with this many
  /// columns. Rank 0 is the identity; strength 1 removes the directions.
  int distortion_rank = 0;
  double distortion_strength = 1.0;
  std::optional<Matrix> distortion;  // explicit 12 x 12, overrides the above
};

struct SynthSpec {
  int n_speakers = 6;
  std::vector<SynthGroup> groups{SynthGroup{}};
  int frames_per_utt = 500;  // EMA samples per utterance
  int utts_per_speaker = 10;
  int latent_dim = kNumChannels;
  int feature_dim = 64;
  double noise_sigma = 0.0;
  double feature_noise = 0.01;
  std::pair<double, double> anatomy_scale_range{0.8, 1.25};
  double male_scale = 1.0;      // extra anatomy scale for male speakers
  double max_rotation = 0.35;   // radians
  double offset_range = 5.0;
  double ema_rate = 50.0;
  double frame_hop = 0.02;
  double min_latent_hz = 0.25;
  double max_latent_hz = 3.5;
  int max_sinusoids = 6;
  int n_layers = 1;
  int informative_layer = 0;
  std::string source_prefix = "synth";
  std::string corpus = "SYNTH";
  std::uint64_t seed = 1;

  /// Throws InvalidSpec.
  void validate() const;
  std::string layer_source(int layer) const;
};

void to_json(nlohmann::json& j, const SynthSpec& spec);
void from_json(const nlohmann::json& j, SynthSpec& spec);
SynthSpec load_synth_spec(const std::filesystem::path& path);

struct SynthSpeaker {
  SpeakerMeta meta;
  std::size_t group_index = 0;
  Matrix anatomy;      // M_s, 12 x 12
  Vector offset;       // c_s
  Vector signal_std;   // noiseless std per channel, rows norms of M_s D_g
  std::vector<Matrix> latent;             // per utterance, EMA rate, T x 12
  std::vector<EmaTrajectory> ema;         // per utterance
  std::vector<std::vector<FeatureMatrix>> features;  // [layer][utterance]
};

struct SynthCohort {
  SynthSpec spec;
  Matrix lift;                           // P, feature_dim x 12
  std::vector<Matrix> distortions;       // D_g, parallel to spec.groups
  std::vector<SynthSpeaker> speakers;

  std::vector<SpeakerMeta> metas() const;
  /// Preprocessed, frame-aligned data for one layer, one entry per speaker.
  std::vector<SpeakerData> speaker_data(int layer, const PreprocessConfig& cfg = {}) const;
};

/// Deterministic in spec.seed; speakers use independent substreams so the
/// result does not depend on `threads`.
SynthCohort generate(const SynthSpec& spec, unsigned threads = 1);

/// Writes ema/, features/<source>/, latent/, manifest.json and
/// ground_truth.json under `dir`. Returns the manifest entries.
std::vector<ManifestEntry> write_cohort(const SynthCohort& cohort,
                                        const std::filesystem::path& dir);
nlohmann::json ground_truth_json(const SynthCohort& cohort);

/// Correlation between a clean prediction and its noisy, low-passed target
/// when the noise std is `noise_sigma` times the signal std and the filter
/// passes `noise_gain` of white-noise variance.
double theoretical_corr(double noise_sigma, double noise_gain = 1.0);
double noise_sigma_for_corr(double corr, double noise_gain = 1.0);
/// White-noise variance gain of the zero-phase low-pass used in preprocessing.
double lowpass_noise_gain(double cutoff_hz, double sample_rate, int order = kDefaultFilterOrder);

/// Row-convention weights of the ideal map from speaker a's normalized EMA to
/// speaker b's, i.e. (S_b^-1 M_b M_a^-1 S_a)^T. Requires a and b to share a
/// distortion.
Matrix ideal_alignment(const SynthCohort& cohort, std::size_t a, std::size_t b);

}  // namespace artikit

#endif  // ARTIKIT_SYNTH_H_
