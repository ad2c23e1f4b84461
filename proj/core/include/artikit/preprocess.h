// core/include/artikit/preprocess.h

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

#ifndef ARTIKIT_PREPROCESS_H_
#define ARTIKIT_PREPROCESS_H_

#include <utility>

#include "artikit/types.h"

namespace artikit {

inline constexpr int kDefaultFilterOrder = 5;
inline constexpr double kDefaultLowpassHz = 6.0;

/// Per-channel, per-clip standardisation with the population standard
/// deviation (divide by T).
/// Throws DegenerateClip for T < 2 and ZeroVarianceChannel naming the channel.
EmaTrajectory normalize_ema(const EmaTrajectory& traj);

/// Zero-phase order-`order` Butterworth low-pass applied to each channel.
/// Throws CutoffAboveNyquist or ClipTooShortForFilter (T <= 3 * order).
EmaTrajectory lowpass_filter(const EmaTrajectory& traj, double cutoff_hz,
                             int order = kDefaultFilterOrder);

/// Resamples the EMA stream onto the feature frame centres
/// t_k = k * hop + hop / 2 by linear interpolation. Only feature frames whose
/// centres fall inside the EMA support are kept, so both outputs have the same
/// number of rows. Throws EmptyOverlap.
std::pair<EmaTrajectory, FeatureMatrix> align_frames(const EmaTrajectory& traj,
                                                     const FeatureMatrix& feat);

enum class NormalizationOrder { kFilterThenNormalize, kNormalizeThenFilter };

struct PreprocessConfig {
  double lowpass_hz = kDefaultLowpassHz;  // <= 0 disables filtering
  int filter_order = kDefaultFilterOrder;
  NormalizationOrder order = NormalizationOrder::kFilterThenNormalize;
};

/// Filter and normalise (in the configured order) the EMA targets at their
/// native rate, then align them with the features.
std::pair<EmaTrajectory, FeatureMatrix> preprocess_pair(const EmaTrajectory& traj,
                                                        const FeatureMatrix& feat,
                                                        const PreprocessConfig& cfg);

}  // namespace artikit

#endif  // ARTIKIT_PREPROCESS_H_
