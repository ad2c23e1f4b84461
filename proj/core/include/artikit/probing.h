// core/include/artikit/probing.h

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

#ifndef ARTIKIT_PROBING_H_
#define ARTIKIT_PROBING_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "artikit/linalg.h"
#include "artikit/types.h"

namespace artikit {

/// Frame-aligned, preprocessed features and canonical-order EMA targets of
/// one utterance.
struct AlignedUtterance {
  std::string utterance_id;
  Matrix features;  // T x D
  Matrix ema;       // T x 12
};

/// All utterances of one speaker for one feature source.
struct SpeakerData {
  std::string speaker_id;
  std::string source;
  std::vector<AlignedUtterance> utterances;

  Eigen::Index total_frames() const;
  std::vector<std::string> utterance_ids() const;
};

/// Stacks the rows of the selected utterances (all when `ids` is empty).
Matrix stack_features(const SpeakerData& data, std::span<const std::string> ids = {});
Matrix stack_ema(const SpeakerData& data, std::span<const std::string> ids = {});

/// Pearson product-moment correlation, clamped to [-1, 1].
/// Throws ShapeMismatch (length < 2 or unequal) and ZeroVarianceInput.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y);

/// Utterance-level fold assignment, a pure function of (seed, sorted ids):
/// the sorted ids are shuffled with the seeded generator and dealt round-robin,
/// so fold sizes differ by at most one.
struct CvPlan {
  int n_folds = 5;
  std::uint64_t seed = 17;
  std::map<std::string, int> assignment;

  static CvPlan make(std::vector<std::string> utterance_ids, int n_folds, std::uint64_t seed);
  int fold_of(const std::string& utterance_id) const;
  std::vector<std::string> fold_members(int fold) const;
};

enum class CorrelationMode {
  kFoldConcat,    // Pearson over the concatenated held-out frames of a fold
  kPerUtterance,  // Pearson per held-out utterance, averaged within the fold
};

struct ProbeConfig {
  double ridge_scale = 1e-4;    // ridge = ridge_scale * trace(Xc^T Xc) / D
  std::optional<double> ridge;  // absolute ridge, overrides ridge_scale
  CorrelationMode correlation = CorrelationMode::kFoldConcat;
};

struct InversionProbe {
  std::string speaker_id;
  std::string source;
  AffineMap map;      // D -> 12, refit on all utterances
  Matrix cv_scores;   // n_folds x 12
  double mean_corr = 0.0;
};

struct CvFold {
  int fold = 0;
  std::vector<std::string> held_out;
  Matrix predictions;  // held-out frames x 12
  Matrix targets;
  Vector scores;       // 12
};

/// Fits on the other folds and predicts each held-out fold.
std::vector<CvFold> cross_validate(const SpeakerData& data, const CvPlan& plan,
                                   const ProbeConfig& cfg);

/// Cross-validated scores plus the all-data refit. Throws TooFewUtterances.
InversionProbe fit_probe(const SpeakerData& data, const CvPlan& plan, const ProbeConfig& cfg);

struct LayerSweepResult {
  std::vector<InversionProbe> probes;  // one per layer, input order
  std::size_t best_layer = 0;          // argmax mean_corr, ties to the lower index
};

/// One probe per feature source of the same speaker. Throws
/// InconsistentCoverage when the sources do not cover the same utterances.
LayerSweepResult layer_sweep(std::span<const SpeakerData> layers, const CvPlan& plan,
                             const ProbeConfig& cfg, unsigned threads = 1);

/// Ids of probes with mean_corr >= threshold, in input order.
std::vector<std::string> filter_speakers(std::span<const InversionProbe> probes,
                                         double threshold = 0.8);

}  // namespace artikit

#endif  // ARTIKIT_PROBING_H_
