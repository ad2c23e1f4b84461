// core/include/artikit/filter.h

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

#ifndef ARTIKIT_FILTER_H_
#define ARTIKIT_FILTER_H_

#include <complex>
#include <span>
#include <vector>

namespace artikit {

/// Direct-form II transposed biquad, a0 normalised to 1. First-order sections
/// use b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

/// Digital Butterworth low-pass obtained from the analog prototype by the
/// prewarped bilinear transform, stored as cascaded second-order sections.
class ButterworthLowpass {
 public:
  ButterworthLowpass(int order, double cutoff_hz, double sample_rate);

  int order() const { return order_; }
  double cutoff_hz() const { return cutoff_hz_; }
  double sample_rate() const { return sample_rate_; }
  const std::vector<Biquad>& sections() const { return sections_; }

  /// Edge padding used by filtfilt: 3 * (order + 1) samples.
  int pad_length() const { return 3 * (order_ + 1); }

  /// Single-pass frequency response H(e^{jw}) at the given frequency.
  std::complex<double> response(double freq_hz) const;

  /// Causal single pass with steady-state initial conditions scaled by x[0].
  std::vector<double> filter(std::span<const double> x) const;

  /// Zero-phase forward-backward filtering with odd reflective padding. The
  /// effective magnitude response is |H|^2 and the phase is zero.
  std::vector<double> filtfilt(std::span<const double> x) const;

 private:
  void run(std::vector<double>& x) const;

  int order_;
  double cutoff_hz_;
  double sample_rate_;
  std::vector<Biquad> sections_;
  std::vector<double> zi_;  // two states per section for a unit step
};

/// Variance ratio of filtfilt output to input for white noise,
/// (1/pi) * integral_0^pi |H(e^{jw})|^4 dw, by composite Simpson quadrature.
double white_noise_variance_gain(const ButterworthLowpass& filter);

}  // namespace artikit

#endif  // ARTIKIT_FILTER_H_
