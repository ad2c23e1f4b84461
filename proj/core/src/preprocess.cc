// core/src/preprocess.cc

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

#include "artikit/preprocess.h"

#include <algorithm>
#include <cmath>
#include <vector>

#include "artikit/error.h"
#include "artikit/filter.h"

namespace artikit {

EmaTrajectory normalize_ema(const EmaTrajectory& traj) {
  const Eigen::Index t = traj.frames();
  if (t < 2) {
    fail(ErrorCode::kDegenerateClip,
         "clip " + traj.utterance_id + " has " + std::to_string(t) + " frame(s); need >= 2");
  }
  EmaTrajectory out = traj;
  for (Eigen::Index c = 0; c < traj.samples.cols(); ++c) {
    const auto col = traj.samples.col(c);
    const double mean = col.mean();
    const double var = (col.array() - mean).square().mean();
    if (!(var > 0.0) || col.maxCoeff() == col.minCoeff()) {
      const std::string name = static_cast<std::size_t>(c) < traj.channel_order.size()
                                   ? channel_name(traj.channel_order[static_cast<std::size_t>(c)])
                                   : std::to_string(c);
      fail(ErrorCode::kZeroVarianceChannel,
           "channel " + name + " is constant within clip " + traj.utterance_id);
    }
    out.samples.col(c) = (col.array() - mean) / std::sqrt(var);
  }
  return out;
}

EmaTrajectory lowpass_filter(const EmaTrajectory& traj, double cutoff_hz, int order) {
  const ButterworthLowpass filter(order, cutoff_hz, traj.frame_rate);
  if (traj.frames() <= 3 * order) {
    fail(ErrorCode::kClipTooShortForFilter,
         "clip " + traj.utterance_id + " has " + std::to_string(traj.frames()) +
             " frames; order-" + std::to_string(order) + " filtering needs more than " +
             std::to_string(3 * order));
  }
  EmaTrajectory out = traj;
  std::vector<double> column(static_cast<std::size_t>(traj.frames()));
  for (Eigen::Index c = 0; c < traj.samples.cols(); ++c) {
    Eigen::Map<Vector>(column.data(), traj.frames()) = traj.samples.col(c);
    const std::vector<double> y = filter.filtfilt(column);
    out.samples.col(c) = Eigen::Map<const Vector>(y.data(), traj.frames());
  }
  return out;
}

std::pair<EmaTrajectory, FeatureMatrix> align_frames(const EmaTrajectory& traj,
                                                     const FeatureMatrix& feat) {
  if (!(traj.frame_rate > 0.0) || !(feat.frame_hop > 0.0)) {
    fail(ErrorCode::kInvalidConfig, "frame rate and frame hop must be positive");
  }
  const double ema_period = 1.0 / traj.frame_rate;
  const double first = 0.5 * ema_period;
  const double last = (static_cast<double>(traj.frames()) - 0.5) * ema_period;
  // Half a nanosecond of slack absorbs rounding in k * hop.
  constexpr double kSlack = 1e-9;

  Eigen::Index begin = -1;
  Eigen::Index end = -1;
  for (Eigen::Index k = 0; k < feat.frames(); ++k) {
    const double t = (static_cast<double>(k) + 0.5) * feat.frame_hop;
    const bool inside = traj.frames() > 0 && t >= first - kSlack && t <= last + kSlack;
    if (inside) {
      if (begin < 0) begin = k;
      end = k + 1;
    } else if (begin >= 0) {
      break;
    }
  }
  if (begin < 0) {
    fail(ErrorCode::kEmptyOverlap,
         "EMA and feature streams of " + traj.utterance_id + " share no time support");
  }
  const Eigen::Index n = end - begin;

  EmaTrajectory ema = traj;
  ema.frame_rate = 1.0 / feat.frame_hop;
  ema.samples.resize(n, traj.samples.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = (static_cast<double>(begin + i) + 0.5) * feat.frame_hop;
    // Fractional EMA sample index of time t.
    double pos = t * traj.frame_rate - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(traj.frames() - 1));
    const auto lo = static_cast<Eigen::Index>(std::floor(pos));
    const Eigen::Index hi = std::min(lo + 1, traj.frames() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || hi == lo) {
      ema.samples.row(i) = traj.samples.row(lo);
    } else {
      ema.samples.row(i) = (1.0 - frac) * traj.samples.row(lo) + frac * traj.samples.row(hi);
    }
  }

  FeatureMatrix features = feat;
  features.values = feat.values.middleRows(begin, n);
  return {std::move(ema), std::move(features)};
}

std::pair<EmaTrajectory, FeatureMatrix> preprocess_pair(const EmaTrajectory& traj,
                                                        const FeatureMatrix& feat,
                                                        const PreprocessConfig& cfg) {
  EmaTrajectory ema = traj.to_canonical_order();
  const bool filtering = cfg.lowpass_hz > 0.0;
  if (cfg.order == NormalizationOrder::kFilterThenNormalize) {
    if (filtering) ema = lowpass_filter(ema, cfg.lowpass_hz, cfg.filter_order);
    ema = normalize_ema(ema);
  } else {
    ema = normalize_ema(ema);
    if (filtering) ema = lowpass_filter(ema, cfg.lowpass_hz, cfg.filter_order);
  }
  return align_frames(ema, feat);
}

}  // namespace artikit
