// core/include/artikit/acoustic.h

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

#ifndef ARTIKIT_ACOUSTIC_H_
#define ARTIKIT_ACOUSTIC_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "artikit/types.h"

namespace artikit {

struct AudioClip {
  std::vector<double> samples;  // mono, [-1, 1]
  double sample_rate = 16000.0;
};

/// Front-end settings for the filter bank, mel spectrogram and MFCC baselines.
struct MelConfig {
  int sample_rate = 16000;
  int n_fft = 400;  // 25 ms
  int hop = 320;    // 20 ms, the SSL frame rate
  int n_mels = 80;
  int n_mfcc = 13;
  double fmin = 0.0;
  double fmax = 8000.0;
  bool append_deltas = true;  // MFCC gets delta and delta-delta (D = 39)

  /// Throws InvalidConfig.
  void validate() const;
  double frame_hop_seconds() const { return static_cast<double>(hop) / sample_rate; }
};

void to_json(nlohmann::json& j, const MelConfig& cfg);
void from_json(const nlohmann::json& j, MelConfig& cfg);

enum class BaselineType { kFilterBank, kMelSpectrogram, kMfcc };
std::string_view baseline_name(BaselineType type);  // "fbank", "mel", "mfcc"
BaselineType parse_baseline(std::string_view name);

double hz_to_mel(double hz);  // HTK: 2595 * log10(1 + f / 700)
double mel_to_hz(double mel);

/// Triangular HTK-scale filters between fmin and fmax, each scaled to unit
/// area (peak height 2 / (upper - lower) in Hz).
class MelFilterBank {
 public:
  explicit MelFilterBank(const MelConfig& cfg);

  int size() const { return static_cast<int>(edges_.size()) - 2; }
  double lower_hz(int m) const { return edges_[static_cast<std::size_t>(m)]; }
  double center_hz(int m) const { return edges_[static_cast<std::size_t>(m) + 1]; }
  double upper_hz(int m) const { return edges_[static_cast<std::size_t>(m) + 2]; }

  /// Continuous response of filter m at frequency hz.
  double response(int m, double hz) const;

  /// n_mels x (n_fft / 2 + 1) weights sampled at the FFT bin frequencies.
  const Matrix& weights() const { return weights_; }

 private:
  std::vector<double> edges_;
  Matrix weights_;
};

/// Hann-windowed power spectrogram, T = 1 + floor((len - n_fft) / hop),
/// D = n_fft / 2 + 1. Throws ClipTooShort.
FeatureMatrix stft_power(const AudioClip& clip, const MelConfig& cfg);
FeatureMatrix mel_spectrogram(const AudioClip& clip, const MelConfig& cfg);
/// Natural log of mel energies floored at 1e-10.
FeatureMatrix log_filter_bank(const AudioClip& clip, const MelConfig& cfg);
/// Orthonormal DCT-II of the log filter bank, first n_mfcc coefficients,
/// optionally followed by deltas and delta-deltas.
FeatureMatrix mfcc(const AudioClip& clip, const MelConfig& cfg);
FeatureMatrix compute_baseline(BaselineType type, const AudioClip& clip, const MelConfig& cfg);

/// Row-wise orthonormal DCT-II.
Matrix dct_ii(const Matrix& rows);
/// Regression deltas over +-2 frames with edge replication.
Matrix delta_features(const Matrix& x);

/// 16-bit PCM or 32-bit float mono WAV. Throws UnsupportedAudio / Io.
AudioClip read_wav(const std::filesystem::path& path);
void write_wav_pcm16(const AudioClip& clip, const std::filesystem::path& path);

}  // namespace artikit

#endif  // ARTIKIT_ACOUSTIC_H_
