// core/src/filter.cc

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

#include "artikit/filter.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "artikit/error.h"

namespace artikit {

ButterworthLowpass::ButterworthLowpass(int order, double cutoff_hz, double sample_rate)
    : order_(order), cutoff_hz_(cutoff_hz), sample_rate_(sample_rate) {
  if (order < 1) fail(ErrorCode::kInvalidConfig, "filter order must be >= 1");
  if (!(sample_rate > 0.0)) fail(ErrorCode::kInvalidConfig, "sample rate must be positive");
  if (!(cutoff_hz > 0.0) || cutoff_hz >= sample_rate / 2.0) {
    fail(ErrorCode::kCutoffAboveNyquist,
         "cutoff " + std::to_string(cutoff_hz) + " Hz must lie in (0, " +
             std::to_string(sample_rate / 2.0) + ") Hz");
  }
  using std::numbers::pi;
  // Prewarped analog cutoff with the bilinear constant 2*fs folded to 1.
  const double c = std::tan(pi * cutoff_hz / sample_rate);
  const double c2 = c * c;

  // Conjugate pole pairs of the normalised prototype, p_k = exp(j*theta_k).
  for (int k = 0; k < order / 2; ++k) {
    const double theta = pi * (2.0 * k + order + 1) / (2.0 * order);
    const double a = -2.0 * std::cos(theta) * c;  // > 0 in the left half-plane
    const double d0 = 1.0 + a + c2;
    Biquad s;
    s.b0 = c2 / d0;
    s.b1 = 2.0 * c2 / d0;
    s.b2 = c2 / d0;
    s.a1 = (2.0 * c2 - 2.0) / d0;
    s.a2 = (1.0 - a + c2) / d0;
    sections_.push_back(s);
  }
  if (order % 2 == 1) {
    const double d0 = 1.0 + c;
    Biquad s;
    s.b0 = c / d0;
    s.b1 = c / d0;
    s.a1 = (c - 1.0) / d0;
    sections_.push_back(s);
  }

  // Steady state of each DF2T section under a constant input u with output
  // G*u: z1 = (G - b0) u, z2 = (b2 - a2 G) u.
  double level = 1.0;
  for (const Biquad& s : sections_) {
    const double gain = (s.b0 + s.b1 + s.b2) / (1.0 + s.a1 + s.a2);
    zi_.push_back((gain - s.b0) * level);
    zi_.push_back((s.b2 - s.a2 * gain) * level);
    level *= gain;
  }
}

std::complex<double> ButterworthLowpass::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_;
  const std::complex<double> z1 = std::polar(1.0, -w);
  const std::complex<double> z2 = z1 * z1;
  std::complex<double> h = 1.0;
  for (const Biquad& s : sections_) {
    h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  }
  return h;
}

void ButterworthLowpass::run(std::vector<double>& x) const {
  if (x.empty()) return;
  const double x0 = x.front();
  for (std::size_t k = 0; k < sections_.size(); ++k) {
    const Biquad& s = sections_[k];
    double z1 = zi_[2 * k] * x0;
    double z2 = zi_[2 * k + 1] * x0;
    for (double& v : x) {
      const double in = v;
      const double out = s.b0 * in + z1;
      z1 = s.b1 * in - s.a1 * out + z2;
      z2 = s.b2 * in - s.a2 * out;
      v = out;
    }
  }
}

std::vector<double> ButterworthLowpass::filter(std::span<const double> x) const {
  std::vector<double> y(x.begin(), x.end());
  run(y);
  return y;
}

std::vector<double> ButterworthLowpass::filtfilt(std::span<const double> x) const {
  const std::size_t n = x.size();
  if (n == 0) return {};
  // Padding cannot exceed n - 1 samples of odd reflection.
  const std::size_t pad = std::min<std::size_t>(static_cast<std::size_t>(pad_length()),
                                                n > 1 ? n - 1 : 0);
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * x[0] - x[i]);
  ext.insert(ext.end(), x.begin(), x.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * x[n - 1] - x[n - 1 - i]);

  run(ext);
  std::reverse(ext.begin(), ext.end());
  run(ext);
  std::reverse(ext.begin(), ext.end());
  return {ext.begin() + static_cast<std::ptrdiff_t>(pad),
          ext.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

double white_noise_variance_gain(const ButterworthLowpass& filter) {
  constexpr int kIntervals = 20000;  // even
  const double nyquist = filter.sample_rate() / 2.0;
  const double h = nyquist / kIntervals;
  double sum = 0.0;
  for (int i = 0; i <= kIntervals; ++i) {
    const double mag2 = std::norm(filter.response(i * h));
    const double f = mag2 * mag2;
    const double weight = (i == 0 || i == kIntervals) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += weight * f;
  }
  return sum * h / 3.0 / nyquist;
}

}  // namespace artikit
