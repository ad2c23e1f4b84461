// core/src/acoustic.cc

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

#include "artikit/acoustic.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>

#include <nlohmann/json.hpp>

#include "artikit/akf.h"
#include "artikit/error.h"

namespace artikit {

namespace {

constexpr double kLogFloor = 1e-10;

std::vector<double> hann_window(int n) {
  // Periodic Hann, the usual choice for spectral analysis.
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[static_cast<std::size_t>(i)] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / n);
  }
  return w;
}

FeatureMatrix make_features(const MelConfig& cfg, std::string source, Matrix values) {
  FeatureMatrix f;
  f.source = std::move(source);
  f.frame_hop = cfg.frame_hop_seconds();
  f.values = std::move(values);
  return f;
}

Matrix mel_energies(const AudioClip& clip, const MelConfig& cfg) {
  const FeatureMatrix power = stft_power(clip, cfg);
  const MelFilterBank bank(cfg);
  return power.values * bank.weights().transpose();
}

}  // namespace

void MelConfig::validate() const {
  if (sample_rate <= 0) fail(ErrorCode::kInvalidConfig, "sample_rate must be positive");
  if (n_fft < 2) fail(ErrorCode::kInvalidConfig, "n_fft must be >= 2");
  if (hop <= 0) fail(ErrorCode::kInvalidConfig, "hop must be positive");
  if (std::abs(static_cast<double>(hop) / sample_rate - 0.02) > 1e-9) {
    fail(ErrorCode::kInvalidConfig, "hop must correspond to 20 ms (" +
                                        std::to_string(sample_rate / 50) + " samples)");
  }
  if (n_mels < 1) fail(ErrorCode::kInvalidConfig, "n_mels must be >= 1");
  if (n_mfcc < 1 || n_mfcc > n_mels) fail(ErrorCode::kInvalidConfig, "need 1 <= n_mfcc <= n_mels");
  if (!(fmin >= 0.0 && fmin < fmax && fmax <= sample_rate / 2.0)) {
    fail(ErrorCode::kInvalidConfig, "need 0 <= fmin < fmax <= sample_rate / 2");
  }
}

void to_json(nlohmann::json& j, const MelConfig& cfg) {
  j = {{"sample_rate", cfg.sample_rate}, {"n_fft", cfg.n_fft},   {"hop", cfg.hop},
       {"n_mels", cfg.n_mels},           {"n_mfcc", cfg.n_mfcc}, {"fmin", cfg.fmin},
       {"fmax", cfg.fmax},               {"append_deltas", cfg.append_deltas}};
}

void from_json(const nlohmann::json& j, MelConfig& cfg) {
  MelConfig d;
  cfg.sample_rate = j.value("sample_rate", d.sample_rate);
  cfg.n_fft = j.value("n_fft", d.n_fft);
  cfg.hop = j.value("hop", d.hop);
  cfg.n_mels = j.value("n_mels", d.n_mels);
  cfg.n_mfcc = j.value("n_mfcc", d.n_mfcc);
  cfg.fmin = j.value("fmin", d.fmin);
  cfg.fmax = j.value("fmax", d.fmax);
  cfg.append_deltas = j.value("append_deltas", d.append_deltas);
}

std::string_view baseline_name(BaselineType type) {
  switch (type) {
    case BaselineType::kFilterBank: return "fbank";
    case BaselineType::kMelSpectrogram: return "mel";
    case BaselineType::kMfcc: return "mfcc";
  }
  return "?";
}

BaselineType parse_baseline(std::string_view name) {
  if (name == "fbank") return BaselineType::kFilterBank;
  if (name == "mel") return BaselineType::kMelSpectrogram;
  if (name == "mfcc") return BaselineType::kMfcc;
  fail(ErrorCode::kInvalidConfig, "unknown baseline type '" + std::string(name) + "'");
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

MelFilterBank::MelFilterBank(const MelConfig& cfg) {
  cfg.validate();
  const double lo = hz_to_mel(cfg.fmin);
  const double hi = hz_to_mel(cfg.fmax);
  edges_.resize(static_cast<std::size_t>(cfg.n_mels) + 2);
  for (std::size_t i = 0; i < edges_.size(); ++i) {
    edges_[i] = mel_to_hz(lo + (hi - lo) * static_cast<double>(i) / (cfg.n_mels + 1));
  }
  const int bins = cfg.n_fft / 2 + 1;
  weights_ = Matrix::Zero(cfg.n_mels, bins);
  for (int m = 0; m < cfg.n_mels; ++m) {
    for (int k = 0; k < bins; ++k) {
      weights_(m, k) = response(m, static_cast<double>(k) * cfg.sample_rate / cfg.n_fft);
    }
  }
}

double MelFilterBank::response(int m, double hz) const {
  const double l = lower_hz(m), c = center_hz(m), u = upper_hz(m);
  const double height = 2.0 / (u - l);
  if (hz <= l || hz >= u) return 0.0;
  if (hz <= c) return height * (hz - l) / (c - l);
  return height * (u - hz) / (u - c);
}

FeatureMatrix stft_power(const AudioClip& clip, const MelConfig& cfg) {
  cfg.validate();
  if (std::abs(clip.sample_rate - cfg.sample_rate) > 1e-9) {
    fail(ErrorCode::kUnsupportedAudio,
         "audio is " + std::to_string(clip.sample_rate) + " Hz, configuration expects " +
             std::to_string(cfg.sample_rate) + " Hz");
  }
  const auto len = static_cast<long>(clip.samples.size());
  if (len < cfg.n_fft) {
    fail(ErrorCode::kClipTooShort, "clip has " + std::to_string(len) + " samples, n_fft is " +
                                       std::to_string(cfg.n_fft));
  }
  const long frames = 1 + (len - cfg.n_fft) / cfg.hop;
  const int n = cfg.n_fft;
  const int bins = n / 2 + 1;
  const std::vector<double> window = hann_window(n);
  std::vector<double> cos_table(static_cast<std::size_t>(n)), sin_table(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    cos_table[static_cast<std::size_t>(i)] = std::cos(a);
    sin_table[static_cast<std::size_t>(i)] = std::sin(a);
  }

  Matrix power(frames, bins);
  std::vector<double> frame(static_cast<std::size_t>(n));
  for (long t = 0; t < frames; ++t) {
    const std::size_t offset = static_cast<std::size_t>(t) * static_cast<std::size_t>(cfg.hop);
    for (int i = 0; i < n; ++i) {
      frame[static_cast<std::size_t>(i)] =
          clip.samples[offset + static_cast<std::size_t>(i)] * window[static_cast<std::size_t>(i)];
    }
    for (int k = 0; k < bins; ++k) {
      double re = 0.0, im = 0.0;
      long idx = 0;
      for (int i = 0; i < n; ++i) {
        re += frame[static_cast<std::size_t>(i)] * cos_table[static_cast<std::size_t>(idx)];
        im -= frame[static_cast<std::size_t>(i)] * sin_table[static_cast<std::size_t>(idx)];
        idx += k;
        if (idx >= n) idx -= n;
      }
      power(t, k) = re * re + im * im;
    }
  }
  return make_features(cfg, "stft", std::move(power));
}

FeatureMatrix mel_spectrogram(const AudioClip& clip, const MelConfig& cfg) {
  return make_features(cfg, "mel", mel_energies(clip, cfg));
}

FeatureMatrix log_filter_bank(const AudioClip& clip, const MelConfig& cfg) {
  Matrix e = mel_energies(clip, cfg);
  e = e.array().max(kLogFloor).log().matrix();
  return make_features(cfg, "fbank", std::move(e));
}

FeatureMatrix mfcc(const AudioClip& clip, const MelConfig& cfg) {
  FeatureMatrix fbank = log_filter_bank(clip, cfg);
  Matrix coeffs = dct_ii(fbank.values).leftCols(cfg.n_mfcc);
  if (cfg.append_deltas) {
    const Matrix d1 = delta_features(coeffs);
    const Matrix d2 = delta_features(d1);
    Matrix full(coeffs.rows(), 3 * coeffs.cols());
    full << coeffs, d1, d2;
    coeffs = std::move(full);
  }
  return make_features(cfg, "mfcc", std::move(coeffs));
}

FeatureMatrix compute_baseline(BaselineType type, const AudioClip& clip, const MelConfig& cfg) {
  switch (type) {
    case BaselineType::kFilterBank: return log_filter_bank(clip, cfg);
    case BaselineType::kMelSpectrogram: return mel_spectrogram(clip, cfg);
    case BaselineType::kMfcc: return mfcc(clip, cfg);
  }
  fail(ErrorCode::kInvalidConfig, "unknown baseline");
}

Matrix dct_ii(const Matrix& rows) {
  const Eigen::Index n = rows.cols();
  Matrix basis(n, n);  // basis(i, k) = s_k cos(pi (i + 0.5) k / n)
  for (Eigen::Index k = 0; k < n; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (Eigen::Index i = 0; i < n; ++i) {
      basis(i, k) = scale * std::cos(std::numbers::pi * (i + 0.5) * k / n);
    }
  }
  return rows * basis;
}

Matrix delta_features(const Matrix& x) {
  constexpr int kWindow = 2;
  const double denom = 2.0 * (1 * 1 + 2 * 2);
  const Eigen::Index t = x.rows();
  Matrix d = Matrix::Zero(t, x.cols());
  for (Eigen::Index i = 0; i < t; ++i) {
    for (int n = 1; n <= kWindow; ++n) {
      const Eigen::Index ahead = std::min(i + n, t - 1);
      const Eigen::Index behind = std::max<Eigen::Index>(i - n, 0);
      d.row(i) += n * (x.row(ahead) - x.row(behind));
    }
  }
  return d / denom;
}

namespace {

std::uint32_t u32_at(const std::vector<std::uint8_t>& b, std::size_t p) {
  return static_cast<std::uint32_t>(b[p]) | (static_cast<std::uint32_t>(b[p + 1]) << 8) |
         (static_cast<std::uint32_t>(b[p + 2]) << 16) | (static_cast<std::uint32_t>(b[p + 3]) << 24);
}
std::uint16_t u16_at(const std::vector<std::uint8_t>& b, std::size_t p) {
  return static_cast<std::uint16_t>(b[p] | (b[p + 1] << 8));
}

}  // namespace

AudioClip read_wav(const std::filesystem::path& path) {
  const auto b = read_file_bytes(path);
  if (b.size() < 12 || std::memcmp(b.data(), "RIFF", 4) != 0 ||
      std::memcmp(b.data() + 8, "WAVE", 4) != 0) {
    fail(ErrorCode::kUnsupportedAudio, path.string() + " is not a RIFF/WAVE file");
  }
  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_len = 0;
  std::size_t p = 12;
  while (p + 8 <= b.size()) {
    const std::uint32_t len = u32_at(b, p + 4);
    const std::size_t body = p + 8;
    if (body + len > b.size()) fail(ErrorCode::kTruncatedPayload, path.string() + ": chunk overruns file");
    if (std::memcmp(b.data() + p, "fmt ", 4) == 0 && len >= 16) {
      format = u16_at(b, body);
      channels = u16_at(b, body + 2);
      rate = u32_at(b, body + 4);
      bits = u16_at(b, body + 14);
      if (format == 0xFFFE && len >= 26) format = u16_at(b, body + 24);  // extensible
    } else if (std::memcmp(b.data() + p, "data", 4) == 0) {
      data = b.data() + body;
      data_len = len;
    }
    p = body + len + (len & 1u);
  }
  if (data == nullptr || channels == 0) fail(ErrorCode::kUnsupportedAudio, path.string() + ": missing fmt/data");
  if (channels != 1) fail(ErrorCode::kUnsupportedAudio, path.string() + ": only mono audio is supported");

  AudioClip clip;
  clip.sample_rate = rate;
  if (format == 1 && bits == 16) {
    clip.samples.resize(data_len / 2);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
      std::int16_t v;
      std::memcpy(&v, data + 2 * i, 2);
      clip.samples[i] = v / 32768.0;
    }
  } else if (format == 3 && bits == 32) {
    clip.samples.resize(data_len / 4);
    for (std::size_t i = 0; i < clip.samples.size(); ++i) {
      float v;
      std::memcpy(&v, data + 4 * i, 4);
      if (!std::isfinite(v)) fail(ErrorCode::kNonFiniteValue, path.string() + ": non-finite sample");
      clip.samples[i] = v;
    }
  } else {
    fail(ErrorCode::kUnsupportedAudio,
         path.string() + ": need 16-bit PCM or 32-bit float, got format " + std::to_string(format) +
             " with " + std::to_string(bits) + " bits");
  }
  return clip;
}

void write_wav_pcm16(const AudioClip& clip, const std::filesystem::path& path) {
  std::vector<std::uint8_t> out;
  auto put = [&out](std::uint32_t v, int bytes) {
    for (int i = 0; i < bytes; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
  };
  auto tag = [&out](const char* s) { out.insert(out.end(), s, s + 4); };
  const auto n = static_cast<std::uint32_t>(clip.samples.size());
  const auto rate = static_cast<std::uint32_t>(clip.sample_rate);
  tag("RIFF");
  put(36 + 2 * n, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(1, 2);
  put(1, 2);
  put(rate, 4);
  put(rate * 2, 4);
  put(2, 2);
  put(16, 2);
  tag("data");
  put(2 * n, 4);
  for (double s : clip.samples) {
    const double c = std::clamp(s, -1.0, 32767.0 / 32768.0);
    put(static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32768.0))), 2);
  }
  write_file_bytes(path, out);
}

}  // namespace artikit
