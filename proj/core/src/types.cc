// core/src/types.cc

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

#include "artikit/types.h"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "artikit/error.h"

namespace artikit {

namespace {

constexpr std::array<Articulator, kNumArticulators> kArticulators = {
    Articulator::kLI, Articulator::kUL, Articulator::kLL,
    Articulator::kTT, Articulator::kTB, Articulator::kTD};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

}  // namespace

const std::array<ArticulatorChannel, kNumChannels>& canonical_channels() {
  static const std::array<ArticulatorChannel, kNumChannels> channels = [] {
    std::array<ArticulatorChannel, kNumChannels> out{};
    for (std::size_t i = 0; i < kNumArticulators; ++i) {
      out[2 * i] = {kArticulators[i], Axis::kX};
      out[2 * i + 1] = {kArticulators[i], Axis::kY};
    }
    return out;
  }();
  return channels;
}

std::vector<ArticulatorChannel> canonical_channel_order() {
  const auto& c = canonical_channels();
  return {c.begin(), c.end()};
}

std::size_t canonical_index(ArticulatorChannel channel) {
  return 2 * static_cast<std::size_t>(channel.articulator) +
         static_cast<std::size_t>(channel.axis);
}

std::string_view articulator_name(Articulator a) {
  switch (a) {
    case Articulator::kLI: return "LI";
    case Articulator::kUL: return "UL";
    case Articulator::kLL: return "LL";
    case Articulator::kTT: return "TT";
    case Articulator::kTB: return "TB";
    case Articulator::kTD: return "TD";
  }
  return "?";
}

std::string channel_name(ArticulatorChannel channel) {
  std::string out(articulator_name(channel.articulator));
  out += channel.axis == Axis::kX ? ".X" : ".Y";
  return out;
}

ArticulatorChannel parse_channel(std::string_view name) {
  std::string s = upper(name);
  s.erase(std::remove_if(s.begin(), s.end(),
                         [](char c) { return c == '.' || c == '_' || c == ' '; }),
          s.end());
  if (s.size() == 3) {
    Axis axis;
    if (s[2] == 'X') {
      axis = Axis::kX;
    } else if (s[2] == 'Y') {
      axis = Axis::kY;
    } else {
      fail(ErrorCode::kMalformedMetadata, "bad channel axis in '" + std::string(name) + "'");
    }
    for (Articulator a : kArticulators) {
      if (s.compare(0, 2, articulator_name(a)) == 0) return {a, axis};
    }
  }
  fail(ErrorCode::kMalformedMetadata, "unknown channel '" + std::string(name) + "'");
}

void EmaTrajectory::validate() const {
  if (samples.rows() < 1) {
    fail(ErrorCode::kDimensionMismatch, "EMA trajectory " + utterance_id + " has no frames");
  }
  if (samples.cols() != static_cast<Eigen::Index>(kNumChannels)) {
    fail(ErrorCode::kDimensionMismatch,
         "EMA trajectory " + utterance_id + " has " + std::to_string(samples.cols()) +
             " channels, expected 12");
  }
  if (!(frame_rate > 0.0) || !std::isfinite(frame_rate)) {
    fail(ErrorCode::kInvalidConfig, "EMA frame rate must be positive");
  }
  if (channel_order.size() != kNumChannels) {
    fail(ErrorCode::kDimensionMismatch, "channel_order must list 12 channels");
  }
  std::array<bool, kNumChannels> seen{};
  for (const auto& c : channel_order) {
    auto idx = canonical_index(c);
    if (seen[idx]) {
      fail(ErrorCode::kMalformedMetadata, "duplicate channel " + channel_name(c));
    }
    seen[idx] = true;
  }
  if (!samples.allFinite()) {
    fail(ErrorCode::kNonFiniteValue,
         "EMA trajectory " + utterance_id + " contains missing (non-finite) samples");
  }
}

EmaTrajectory EmaTrajectory::to_canonical_order() const {
  EmaTrajectory out = *this;
  for (std::size_t j = 0; j < channel_order.size(); ++j) {
    out.samples.col(static_cast<Eigen::Index>(canonical_index(channel_order[j]))) =
        samples.col(static_cast<Eigen::Index>(j));
  }
  out.channel_order = canonical_channel_order();
  return out;
}

void FeatureMatrix::validate() const {
  if (values.rows() < 1 || values.cols() < 1) {
    fail(ErrorCode::kDimensionMismatch, "feature matrix " + utterance_id + " is empty");
  }
  if (!(frame_hop > 0.0) || !std::isfinite(frame_hop)) {
    fail(ErrorCode::kInvalidConfig, "feature frame hop must be positive");
  }
  if (!values.allFinite()) {
    fail(ErrorCode::kNonFiniteValue, "feature matrix " + utterance_id + " has non-finite rows");
  }
}

const std::array<Group, 6>& all_groups() {
  static const std::array<Group, 6> groups = {Group::kEnUK, Group::kEnUS, Group::kEnBJ,
                                              Group::kEnSH, Group::kMandarin, Group::kItalian};
  return groups;
}

std::string_view group_name(Group g) {
  switch (g) {
    case Group::kEnUK: return "EN.UK";
    case Group::kEnUS: return "EN.US";
    case Group::kEnBJ: return "EN.BJ";
    case Group::kEnSH: return "EN.SH";
    case Group::kMandarin: return "MAN";
    case Group::kItalian: return "IT";
  }
  return "?";
}

Group parse_group(std::string_view name) {
  const std::string s = upper(name);
  for (Group g : all_groups()) {
    if (s == group_name(g)) return g;
  }
  fail(ErrorCode::kInvalidManifest, "unknown language-dialect group '" + std::string(name) + "'");
}

std::string_view gender_name(Gender g) {
  switch (g) {
    case Gender::kMale: return "M";
    case Gender::kFemale: return "F";
    case Gender::kUnknown: return "unknown";
  }
  return "unknown";
}

Gender parse_gender(std::string_view name) {
  const std::string s = upper(name);
  if (s == "M" || s == "MALE") return Gender::kMale;
  if (s == "F" || s == "FEMALE") return Gender::kFemale;
  return Gender::kUnknown;
}

}  // namespace artikit
