// core/include/artikit/dataset.h

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

#ifndef ARTIKIT_DATASET_H_
#define ARTIKIT_DATASET_H_

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "artikit/akf.h"
#include "artikit/preprocess.h"
#include "artikit/probing.h"
#include "artikit/types.h"

namespace artikit {

/// Preprocessed manifest contents. Speakers are sorted by id and every
/// per-source vector is parallel to `speakers`; utterances within a speaker
/// are sorted by id.
struct Dataset {
  std::vector<SpeakerMeta> speakers;
  std::vector<std::string> sources;
  std::map<std::string, std::vector<SpeakerData>> by_source;

  const std::vector<SpeakerData>& source(const std::string& name) const;
  std::vector<std::string> speaker_ids() const;
  std::vector<std::string> speaker_groups() const;
};

/// Reads, canonicalises, filters, normalizes and aligns every manifest entry
/// whose source is in `sources` (all sources when empty). Each EMA file is
/// read once even when several sources share it. Errors carry the offending
/// file path. Every speaker must provide every selected source
/// (InvalidManifest otherwise).
Dataset load_dataset(std::span<const ManifestEntry> entries, std::span<const std::string> sources,
                     const PreprocessConfig& cfg, unsigned threads = 0);
Dataset load_dataset(const std::filesystem::path& manifest, std::span<const std::string> sources,
                     const PreprocessConfig& cfg, unsigned threads = 0);

}  // namespace artikit

#endif  // ARTIKIT_DATASET_H_
