// core/include/artikit/akf.h

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

#ifndef ARTIKIT_AKF_H_
#define ARTIKIT_AKF_H_

// AKF ("articulatory kit frames") binary container, little-endian:
//
//   "AKF1"                 4 bytes, the last byte is the format version
//   kind                   u8, 0 = features, 1 = EMA
//   T, D                   u32, u32
//   frame_rate_or_hop      f64 (EMA: Hz, features: seconds)
//   metadata_length        u32
//   metadata               UTF-8 JSON {speaker_id, utterance_id, source, channel_order}
//   payload                T * D f32, row-major
//
// Values are held as double in memory and narrowed to f32 on write, so a
// write/read cycle is bit-exact for every f32-representable matrix.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "artikit/types.h"

namespace artikit {

enum class AkfKind : std::uint8_t { kFeatures = 0, kEma = 1 };

using AkfRecord = std::variant<FeatureMatrix, EmaTrajectory>;

std::vector<std::uint8_t> encode_akf(const FeatureMatrix& features);
std::vector<std::uint8_t> encode_akf(const EmaTrajectory& ema);

/// Throws BadMagic, UnsupportedVersion, TruncatedPayload, DimensionMismatch,
/// MalformedMetadata or NonFiniteValue.
AkfRecord decode_akf(std::span<const std::uint8_t> bytes);

void write_akf(const FeatureMatrix& features, const std::filesystem::path& path);
void write_akf(const EmaTrajectory& ema, const std::filesystem::path& path);
AkfRecord read_akf(const std::filesystem::path& path);

FeatureMatrix read_features(const std::filesystem::path& path);

/// Reads EMA from AKF, or from CSV when the extension is ".csv".
EmaTrajectory read_ema(const std::filesystem::path& path);

/// CSV EMA: header row of the 12 canonical channel names, one row per frame,
/// plus a JSON sidecar (same stem, ".json") holding frame_rate, speaker_id and
/// utterance_id.
void write_ema_csv(const EmaTrajectory& ema, const std::filesystem::path& csv_path);
EmaTrajectory read_ema_csv(const std::filesystem::path& csv_path);

/// One (utterance, feature source) row of a corpus manifest.
struct ManifestEntry {
  std::string speaker_id;
  Group group = Group::kEnUS;
  Gender gender = Gender::kUnknown;
  std::string utterance_id;
  std::filesystem::path feature_path;
  std::filesystem::path ema_path;
  std::string source;  // optional; falls back to the AKF metadata
  std::string corpus;  // optional
};

/// Manifest is a JSON array of {speaker_id, group, gender, utterance_id,
/// feature_path, ema_path[, source, corpus]}. Relative paths resolve against
/// the manifest's directory. Throws InvalidManifest.
std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path);
void write_manifest(const std::vector<ManifestEntry>& entries,
                    const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace artikit

#endif  // ARTIKIT_AKF_H_
