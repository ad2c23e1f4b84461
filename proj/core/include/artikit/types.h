// core/include/artikit/types.h

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

#ifndef ARTIKIT_TYPES_H_
#define ARTIKIT_TYPES_H_

#include <Eigen/Dense>

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace artikit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr std::size_t kNumArticulators = 6;
inline constexpr std::size_t kNumChannels = 12;

enum class Articulator : std::uint8_t { kLI, kUL, kLL, kTT, kTB, kTD };
enum class Axis : std::uint8_t { kX, kY };

/// One midsagittal coordinate of one EMA sensor.
struct ArticulatorChannel {
  Articulator articulator;
  Axis axis;

  auto operator<=>(const ArticulatorChannel&) const = default;
};

/// LI.X, LI.Y, UL.X, UL.Y, LL.X, LL.Y, TT.X, TT.Y, TB.X, TB.Y, TD.X, TD.Y.
const std::array<ArticulatorChannel, kNumChannels>& canonical_channels();
std::vector<ArticulatorChannel> canonical_channel_order();
std::size_t canonical_index(ArticulatorChannel channel);

std::string_view articulator_name(Articulator a);
std::string channel_name(ArticulatorChannel channel);  // "TT.Y"
/// Accepts "TT.Y", "TT_Y", "TTY" (case-insensitive).
ArticulatorChannel parse_channel(std::string_view name);

/// Articulatory trajectories of one utterance. Sample j sits at time
/// (j + 0.5) / frame_rate, the same frame-centre convention as features.
struct EmaTrajectory {
  std::string speaker_id;
  std::string utterance_id;
  double frame_rate = 0.0;
  Matrix samples;  // T x 12
  std::vector<ArticulatorChannel> channel_order = canonical_channel_order();

  Eigen::Index frames() const { return samples.rows(); }

  /// Throws DimensionMismatch / NonFiniteValue / InvalidConfig on violated
  /// invariants (T >= 1, 12 columns, permutation order, finite values).
  void validate() const;

  /// Copy with columns permuted into canonical order.
  EmaTrajectory to_canonical_order() const;
};

/// Frame-level representation of one utterance from a single source, e.g.
/// "xlsr-layer17" or "mfcc".
struct FeatureMatrix {
  std::string speaker_id;
  std::string utterance_id;
  std::string source;
  double frame_hop = 0.0;  // seconds
  Matrix values;           // T x D

  Eigen::Index frames() const { return values.rows(); }
  Eigen::Index dim() const { return values.cols(); }

  void validate() const;
};

enum class Group : std::uint8_t { kEnUK, kEnUS, kEnBJ, kEnSH, kMandarin, kItalian };
enum class Gender : std::uint8_t { kMale, kFemale, kUnknown };

std::string_view group_name(Group g);  // "EN.UK", ..., "MAN", "IT"
Group parse_group(std::string_view name);
std::string_view gender_name(Gender g);  // "M", "F", "unknown"
Gender parse_gender(std::string_view name);
const std::array<Group, 6>& all_groups();

struct SpeakerMeta {
  std::string speaker_id;
  std::string corpus;
  Group group = Group::kEnUS;
  Gender gender = Gender::kUnknown;
  double minutes = 0.0;
};

}  // namespace artikit

#endif  // ARTIKIT_TYPES_H_
