// core/src/dataset.cc

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

#include "artikit/dataset.h"

#include <algorithm>
#include <set>

#include "artikit/error.h"
#include "artikit/parallel.h"

namespace artikit {

namespace {

template <typename Fn>
auto with_path(const std::filesystem::path& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    // Re-raise with the file that caused it; the message already names the code.
    const std::string msg = e.what();
    const auto colon = msg.find(": ");
    fail(e.code(), path.string() + ": " + (colon == std::string::npos ? msg : msg.substr(colon + 2)));
  }
}

}  // namespace

const std::vector<SpeakerData>& Dataset::source(const std::string& name) const {
  auto it = by_source.find(name);
  if (it == by_source.end()) fail(ErrorCode::kInvalidConfig, "source '" + name + "' not loaded");
  return it->second;
}

std::vector<std::string> Dataset::speaker_ids() const {
  std::vector<std::string> out;
  for (const auto& s : speakers) out.push_back(s.speaker_id);
  return out;
}

std::vector<std::string> Dataset::speaker_groups() const {
  std::vector<std::string> out;
  for (const auto& s : speakers) out.emplace_back(group_name(s.group));
  return out;
}

Dataset load_dataset(std::span<const ManifestEntry> entries, std::span<const std::string> sources,
                     const PreprocessConfig& cfg, unsigned threads) {
  if (entries.empty()) fail(ErrorCode::kInvalidManifest, "manifest has no entries");
  if (threads == 0) threads = default_thread_count();

  // Resolve each entry's source, reading the feature header when the
  // manifest leaves it out.
  std::vector<FeatureMatrix> features(entries.size());
  std::vector<std::string> entry_source(entries.size());
  const std::set<std::string> wanted(sources.begin(), sources.end());
  std::vector<char> selected(entries.size(), 0);
  for (std::size_t i = 0; i < entries.size(); ++i) {
    entry_source[i] = entries[i].source;
    if (entry_source[i].empty()) {
      features[i] = with_path(entries[i].feature_path,
                              [&] { return read_features(entries[i].feature_path); });
      entry_source[i] = features[i].source;
    }
    selected[i] = wanted.empty() || wanted.count(entry_source[i]) ? 1 : 0;
  }
  for (const auto& s : wanted) {
    if (std::find(entry_source.begin(), entry_source.end(), s) == entry_source.end()) {
      fail(ErrorCode::kInvalidManifest, "no manifest entries for source '" + s + "'");
    }
  }

  // Speaker metadata must agree across entries.
  std::map<std::string, SpeakerMeta> metas;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!selected[i]) continue;
    const auto& e = entries[i];
    auto [it, inserted] = metas.try_emplace(e.speaker_id);
    SpeakerMeta& m = it->second;
    if (inserted) {
      m.speaker_id = e.speaker_id;
      m.corpus = e.corpus;
      m.group = e.group;
      m.gender = e.gender;
    } else if (m.group != e.group || m.gender != e.gender || m.corpus != e.corpus) {
      fail(ErrorCode::kInvalidManifest,
           "speaker " + e.speaker_id + " has conflicting group/gender/corpus entries");
    }
  }

  // Read every distinct EMA file once.
  std::map<std::filesystem::path, std::size_t> ema_index;
  std::vector<std::filesystem::path> ema_paths;
  std::vector<std::size_t> ema_owner;  // first entry referencing each file
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (selected[i] && ema_index.try_emplace(entries[i].ema_path, ema_paths.size()).second) {
      ema_paths.push_back(entries[i].ema_path);
      ema_owner.push_back(i);
    }
  }
  std::vector<EmaTrajectory> emas(ema_paths.size());
  parallel_for(ema_paths.size(), threads, [&](std::size_t k) {
    emas[k] = with_path(ema_paths[k], [&] { return read_ema(ema_paths[k]).to_canonical_order(); });
  });

  std::vector<AlignedUtterance> aligned(entries.size());
  parallel_for(entries.size(), threads, [&](std::size_t i) {
    if (!selected[i]) return;
    const auto& e = entries[i];
    if (features[i].values.size() == 0) {
      features[i] = with_path(e.feature_path, [&] { return read_features(e.feature_path); });
    }
    const auto& ema = emas[ema_index.at(e.ema_path)];
    auto [ema_out, feat_out] = with_path(e.feature_path, [&] {
      return preprocess_pair(ema, features[i], cfg);
    });
    aligned[i] = {e.utterance_id, std::move(feat_out.values), std::move(ema_out.samples)};
    features[i] = FeatureMatrix{};
  });

  Dataset ds;
  for (auto& [id, meta] : metas) ds.speakers.push_back(meta);
  std::map<std::string, std::size_t> speaker_pos;
  for (std::size_t s = 0; s < ds.speakers.size(); ++s) speaker_pos[ds.speakers[s].speaker_id] = s;

  std::set<std::string> source_set;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (selected[i]) source_set.insert(entry_source[i]);
  }
  ds.sources.assign(source_set.begin(), source_set.end());
  for (const auto& src : ds.sources) {
    auto& vec = ds.by_source[src];
    vec.resize(ds.speakers.size());
    for (std::size_t s = 0; s < ds.speakers.size(); ++s) {
      vec[s].speaker_id = ds.speakers[s].speaker_id;
      vec[s].source = src;
    }
  }
  std::map<std::string, std::set<std::string>> seen;  // "speaker\nsource" -> utterances
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!selected[i]) continue;
    const auto& e = entries[i];
    if (!seen[e.speaker_id + '\n' + entry_source[i]].insert(e.utterance_id).second) {
      fail(ErrorCode::kInvalidManifest, "duplicate entry for speaker " + e.speaker_id +
                                            ", utterance " + e.utterance_id + ", source " +
                                            entry_source[i]);
    }
    ds.by_source[entry_source[i]][speaker_pos.at(e.speaker_id)].utterances.push_back(
        std::move(aligned[i]));
  }
  for (auto& [src, vec] : ds.by_source) {
    for (auto& data : vec) {
      if (data.utterances.empty()) {
        fail(ErrorCode::kInvalidManifest,
             "speaker " + data.speaker_id + " has no entries for source '" + src + "'");
      }
      std::sort(data.utterances.begin(), data.utterances.end(),
                [](const AlignedUtterance& a, const AlignedUtterance& b) {
                  return a.utterance_id < b.utterance_id;
                });
    }
  }
  // Minutes of EMA per speaker, counting each file once.
  for (std::size_t k = 0; k < ema_paths.size(); ++k) {
    ds.speakers[speaker_pos.at(entries[ema_owner[k]].speaker_id)].minutes +=
        static_cast<double>(emas[k].frames()) / emas[k].frame_rate / 60.0;
  }
  return ds;
}

Dataset load_dataset(const std::filesystem::path& manifest, std::span<const std::string> sources,
                     const PreprocessConfig& cfg, unsigned threads) {
  const auto entries = read_manifest(manifest);
  return load_dataset(entries, sources, cfg, threads);
}

}  // namespace artikit
