// core/src/akf.cc

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

#include "artikit/akf.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include <nlohmann/json.hpp>

#include "artikit/error.h"

namespace artikit {

namespace {

using json = nlohmann::json;

constexpr std::size_t kHeaderSize = 4 + 1 + 4 + 4 + 8 + 4;
constexpr char kMagic[3] = {'A', 'K', 'F'};
constexpr std::uint8_t kVersion = '1';

static_assert(std::endian::native == std::endian::little ||
                  std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    out_.insert(out_.end(), b, b + n);
  }
  template <typename T>
  void scalar(T v) {
    std::uint8_t raw[sizeof(T)];
    std::memcpy(raw, &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) {
      std::reverse(std::begin(raw), std::end(raw));
    }
    bytes(raw, sizeof(T));
  }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

template <typename T>
T load(const std::uint8_t* p) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) {
    std::reverse(std::begin(raw), std::end(raw));
  }
  T v;
  std::memcpy(&v, raw, sizeof(T));
  return v;
}

std::vector<std::uint8_t> encode(AkfKind kind, const Matrix& values, double rate_or_hop,
                                 const json& meta) {
  if (values.rows() < 1 || values.cols() < 1) {
    fail(ErrorCode::kDimensionMismatch, "cannot encode an empty matrix");
  }
  if (values.rows() > std::numeric_limits<std::uint32_t>::max() ||
      values.cols() > std::numeric_limits<std::uint32_t>::max()) {
    fail(ErrorCode::kDimensionMismatch, "matrix too large for AKF");
  }
  const std::string blob = meta.dump();
  Writer w;
  w.bytes(kMagic, 3);
  w.scalar<std::uint8_t>(kVersion);
  w.scalar<std::uint8_t>(static_cast<std::uint8_t>(kind));
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(values.rows()));
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(values.cols()));
  w.scalar<double>(rate_or_hop);
  w.scalar<std::uint32_t>(static_cast<std::uint32_t>(blob.size()));
  w.bytes(blob.data(), blob.size());
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const auto v = static_cast<float>(values(i, j));
      if (!std::isfinite(v)) {
        fail(ErrorCode::kNonFiniteValue,
             "value at (" + std::to_string(i) + ", " + std::to_string(j) +
                 ") is not representable as a finite f32");
      }
      w.scalar<float>(v);
    }
  }
  return w.take();
}

std::string meta_string(const json& meta, const char* key) {
  auto it = meta.find(key);
  if (it == meta.end() || it->is_null()) return {};
  if (!it->is_string()) {
    fail(ErrorCode::kMalformedMetadata, std::string("metadata field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<std::uint8_t> encode_akf(const FeatureMatrix& features) {
  json meta = {{"speaker_id", features.speaker_id},
               {"utterance_id", features.utterance_id},
               {"source", features.source}};
  return encode(AkfKind::kFeatures, features.values, features.frame_hop, meta);
}

std::vector<std::uint8_t> encode_akf(const EmaTrajectory& ema) {
  json order = json::array();
  for (const auto& c : ema.channel_order) order.push_back(channel_name(c));
  json meta = {{"speaker_id", ema.speaker_id},
               {"utterance_id", ema.utterance_id},
               {"source", "ema"},
               {"channel_order", order}};
  return encode(AkfKind::kEma, ema.samples, ema.frame_rate, meta);
}

AkfRecord decode_akf(std::span<const std::uint8_t> bytes) {
  const std::size_t n = bytes.size();
  if (n == 0) fail(ErrorCode::kTruncatedPayload, "empty input");
  const std::size_t magic_len = std::min<std::size_t>(n, 3);
  if (std::memcmp(bytes.data(), kMagic, magic_len) != 0) {
    fail(ErrorCode::kBadMagic, "not an AKF file");
  }
  if (n < 4) fail(ErrorCode::kTruncatedPayload, "file ends inside the magic");
  if (bytes[3] != kVersion) {
    fail(ErrorCode::kUnsupportedVersion,
         "AKF version byte 0x" + std::to_string(static_cast<int>(bytes[3])) + " is not supported");
  }
  if (n < kHeaderSize) fail(ErrorCode::kTruncatedPayload, "file ends inside the header");

  const std::uint8_t* p = bytes.data();
  const std::uint8_t kind_byte = p[4];
  if (kind_byte > 1) {
    fail(ErrorCode::kUnsupportedVersion, "unknown record kind " + std::to_string(kind_byte));
  }
  const auto kind = static_cast<AkfKind>(kind_byte);
  const auto rows = load<std::uint32_t>(p + 5);
  const auto cols = load<std::uint32_t>(p + 9);
  const auto rate_or_hop = load<double>(p + 13);
  const auto meta_len = load<std::uint32_t>(p + 21);

  if (rows == 0 || cols == 0) {
    fail(ErrorCode::kDimensionMismatch,
         "header declares " + std::to_string(rows) + " x " + std::to_string(cols));
  }
  if (kind == AkfKind::kEma && cols != kNumChannels) {
    fail(ErrorCode::kDimensionMismatch,
         "EMA record declares " + std::to_string(cols) + " channels, expected 12");
  }
  if (!(rate_or_hop > 0.0) || !std::isfinite(rate_or_hop)) {
    fail(ErrorCode::kMalformedMetadata, "frame rate / hop must be positive and finite");
  }
  if (n - kHeaderSize < meta_len) {
    fail(ErrorCode::kTruncatedPayload, "file ends inside the metadata blob");
  }
  const std::uint64_t expected = static_cast<std::uint64_t>(rows) * cols * sizeof(float);
  const std::uint64_t available = n - kHeaderSize - meta_len;
  if (available < expected) {
    fail(ErrorCode::kTruncatedPayload,
         "payload holds " + std::to_string(available) + " bytes, header needs " +
             std::to_string(expected));
  }
  if (available > expected) {
    fail(ErrorCode::kDimensionMismatch,
         "payload holds " + std::to_string(available) + " bytes, header declares " +
             std::to_string(expected));
  }

  json meta;
  try {
    meta = json::parse(p + kHeaderSize, p + kHeaderSize + meta_len);
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedMetadata, e.what());
  }
  if (!meta.is_object()) fail(ErrorCode::kMalformedMetadata, "metadata must be a JSON object");

  Matrix values(rows, cols);
  const std::uint8_t* payload = p + kHeaderSize + meta_len;
  for (std::uint32_t i = 0; i < rows; ++i) {
    for (std::uint32_t j = 0; j < cols; ++j) {
      const float v = load<float>(payload + (static_cast<std::size_t>(i) * cols + j) * sizeof(float));
      if (!std::isfinite(v)) {
        fail(ErrorCode::kNonFiniteValue,
             "non-finite value at frame " + std::to_string(i) + ", column " + std::to_string(j));
      }
      values(i, j) = v;
    }
  }

  if (kind == AkfKind::kFeatures) {
    FeatureMatrix f;
    f.speaker_id = meta_string(meta, "speaker_id");
    f.utterance_id = meta_string(meta, "utterance_id");
    f.source = meta_string(meta, "source");
    f.frame_hop = rate_or_hop;
    f.values = std::move(values);
    return f;
  }
  EmaTrajectory e;
  e.speaker_id = meta_string(meta, "speaker_id");
  e.utterance_id = meta_string(meta, "utterance_id");
  e.frame_rate = rate_or_hop;
  e.samples = std::move(values);
  if (auto it = meta.find("channel_order"); it != meta.end() && !it->is_null()) {
    if (!it->is_array()) fail(ErrorCode::kMalformedMetadata, "channel_order must be an array");
    e.channel_order.clear();
    for (const auto& name : *it) {
      if (!name.is_string()) fail(ErrorCode::kMalformedMetadata, "channel names must be strings");
      e.channel_order.push_back(parse_channel(name.get<std::string>()));
    }
  }
  e.validate();
  return e;
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::kIo, "short write to " + path.string());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  write_file_bytes(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return {bytes.begin(), bytes.end()};
}

void write_akf(const FeatureMatrix& features, const std::filesystem::path& path) {
  write_file_bytes(path, encode_akf(features));
}

void write_akf(const EmaTrajectory& ema, const std::filesystem::path& path) {
  write_file_bytes(path, encode_akf(ema));
}

AkfRecord read_akf(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return decode_akf(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

FeatureMatrix read_features(const std::filesystem::path& path) {
  auto record = read_akf(path);
  auto* f = std::get_if<FeatureMatrix>(&record);
  if (f == nullptr) fail(ErrorCode::kDimensionMismatch, path.string() + " holds EMA, not features");
  return std::move(*f);
}

EmaTrajectory read_ema(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return read_ema_csv(path);
  auto record = read_akf(path);
  auto* e = std::get_if<EmaTrajectory>(&record);
  if (e == nullptr) fail(ErrorCode::kDimensionMismatch, path.string() + " holds features, not EMA");
  return std::move(*e);
}

void write_ema_csv(const EmaTrajectory& ema, const std::filesystem::path& csv_path) {
  const EmaTrajectory canon = ema.to_canonical_order();
  std::ostringstream out;
  out.precision(std::numeric_limits<double>::max_digits10);
  const auto& channels = canonical_channels();
  for (std::size_t c = 0; c < kNumChannels; ++c) {
    out << (c ? "," : "") << channel_name(channels[c]);
  }
  out << '\n';
  for (Eigen::Index i = 0; i < canon.samples.rows(); ++i) {
    for (Eigen::Index c = 0; c < canon.samples.cols(); ++c) {
      out << (c ? "," : "") << canon.samples(i, c);
    }
    out << '\n';
  }
  write_text_file(csv_path, out.str());
  json sidecar = {{"frame_rate", ema.frame_rate},
                  {"speaker_id", ema.speaker_id},
                  {"utterance_id", ema.utterance_id}};
  auto side = csv_path;
  write_text_file(side.replace_extension(".json"), sidecar.dump(2) + "\n");
}

EmaTrajectory read_ema_csv(const std::filesystem::path& csv_path) {
  auto side_path = csv_path;
  side_path.replace_extension(".json");
  json sidecar;
  try {
    sidecar = json::parse(read_text_file(side_path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kMalformedMetadata, side_path.string() + ": " + e.what());
  }
  EmaTrajectory ema;
  ema.frame_rate = sidecar.value("frame_rate", 0.0);
  ema.speaker_id = sidecar.value("speaker_id", std::string());
  ema.utterance_id = sidecar.value("utterance_id", csv_path.stem().string());

  std::istringstream in(read_text_file(csv_path));
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::kTruncatedPayload, csv_path.string() + " is empty");
  ema.channel_order.clear();
  {
    std::istringstream header(line);
    std::string cell;
    while (std::getline(header, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      ema.channel_order.push_back(parse_channel(cell));
    }
  }
  if (ema.channel_order.size() != kNumChannels) {
    fail(ErrorCode::kDimensionMismatch, csv_path.string() + " must have 12 channel columns");
  }
  std::vector<double> values;
  Eigen::Index rows = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    std::istringstream row(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(row, cell, ',')) {
      // Empty cells and "nan" both denote dropped sensor samples.
      values.push_back(cell.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(cell));
      ++count;
    }
    if (count != kNumChannels) {
      fail(ErrorCode::kDimensionMismatch,
           csv_path.string() + ": row " + std::to_string(rows + 1) + " has " +
               std::to_string(count) + " cells");
    }
    ++rows;
  }
  ema.samples = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, static_cast<Eigen::Index>(kNumChannels));
  ema.validate();
  return ema;
}

std::vector<ManifestEntry> read_manifest(const std::filesystem::path& path) {
  json doc;
  try {
    doc = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::kInvalidManifest, path.string() + ": " + e.what());
  }
  if (!doc.is_array()) fail(ErrorCode::kInvalidManifest, path.string() + " must hold a JSON array");
  const auto base = path.parent_path();
  auto resolve = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() || base.empty() ? fp : base / fp;
  };
  std::vector<ManifestEntry> entries;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const json& row = doc[i];
    try {
      ManifestEntry e;
      e.speaker_id = row.at("speaker_id").get<std::string>();
      e.group = parse_group(row.at("group").get<std::string>());
      e.gender = parse_gender(row.value("gender", std::string("unknown")));
      e.utterance_id = row.at("utterance_id").get<std::string>();
      e.feature_path = resolve(row.at("feature_path").get<std::string>());
      e.ema_path = resolve(row.at("ema_path").get<std::string>());
      e.source = row.value("source", std::string());
      e.corpus = row.value("corpus", std::string());
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      fail(ErrorCode::kInvalidManifest,
           path.string() + ": entry " + std::to_string(i) + ": " + ex.what());
    }
  }
  return entries;
}

void write_manifest(const std::vector<ManifestEntry>& entries, const std::filesystem::path& path) {
  json doc = json::array();
  for (const auto& e : entries) {
    json row = {{"speaker_id", e.speaker_id},
                {"group", std::string(group_name(e.group))},
                {"gender", std::string(gender_name(e.gender))},
                {"utterance_id", e.utterance_id},
                {"feature_path", e.feature_path.generic_string()},
                {"ema_path", e.ema_path.generic_string()}};
    if (!e.source.empty()) row["source"] = e.source;
    if (!e.corpus.empty()) row["corpus"] = e.corpus;
    doc.push_back(std::move(row));
  }
  write_text_file(path, doc.dump(2) + "\n");
}

}  // namespace artikit
