// core/include/artikit/alignment.h

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

#ifndef ARTIKIT_ALIGNMENT_H_
#define ARTIKIT_ALIGNMENT_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "artikit/linalg.h"
#include "artikit/probing.h"

namespace artikit {

enum class AlignmentTarget {
  kToPredictions,  // fit g so that g(f_A(X_B)) matches f_B(X_B)
  kToGroundTruth,  // fit g against the target speaker's EMA
};

struct AlignmentConfig {
  LassoConfig lasso{};               // alpha 0.01
  double train_fraction = 0.8;       // utterance-level split of B's data
  std::uint64_t split_seed = 17;
  AlignmentTarget target = AlignmentTarget::kToPredictions;
};

/// Sparse 12 -> 12 map between two speakers' articulatory systems and its
/// held-out transferability corr(g o f_A, f_B) on the target speaker's data.
struct AffineAlignment {
  std::string source_speaker;
  std::string target_speaker;
  AffineMap map;
  AlignmentTarget train_mode = AlignmentTarget::kToPredictions;
  Vector transfer_corr;  // 12, canonical order
  double mean_corr = 0.0;
  bool converged = true;
  /// Channels whose aligned prediction is constant on the test split; their
  /// correlation is undefined and reported as 0.
  std::vector<int> degenerate_channels;
};

/// Deterministic train/test split of utterance ids: ids are ordered by a
/// seeded hash and the first round(fraction * n) (at least one, at most n - 1)
/// go to training.
std::pair<std::vector<std::string>, std::vector<std::string>> split_utterances(
    std::vector<std::string> ids, double train_fraction, std::uint64_t seed);

/// Throws SourceMismatch when the two probes were fit on different sources.
AffineAlignment fit_alignment(const InversionProbe& source_probe,
                              const InversionProbe& target_probe, const SpeakerData& target_data,
                              const AlignmentConfig& cfg);

struct TransferResult {
  std::vector<std::string> speakers;
  Matrix matrix;                             // (A, B) = mean transfer corr A -> B
  std::vector<AffineAlignment> alignments;   // row-major, index A * S + B
  std::vector<std::string> failures;         // pairs that could not be fitted
  const AffineAlignment& at(std::size_t a, std::size_t b) const {
    return alignments[a * speakers.size() + b];
  }
};

/// All S^2 directed alignments including self-transfer on the diagonal.
/// probes[i] and data[i] must belong to the same speaker.
/// With `collect_failures`, a pair whose fit throws gets NaN scores and an
/// entry in `failures` instead of aborting the whole matrix.
TransferResult transferability_matrix(std::span<const InversionProbe> probes,
                                      std::span<const SpeakerData> data,
                                      const AlignmentConfig& cfg, unsigned threads = 0,
                                      bool collect_failures = false);

struct GroupMatrix {
  std::vector<std::string> groups;
  Matrix values;         // NaN where no distinct-speaker pair exists
  /// Number of finite speaker-pair entries averaged into each cell.
  Eigen::MatrixXi pairs;
};

/// Mean over ordered pairs (A in G1, B in G2, A != B). Throws EmptyGroupPair
/// when some cell has no pair, unless allow_empty is set (cell becomes NaN).
GroupMatrix group_matrix(const Matrix& matrix, std::span<const std::string> speaker_groups,
                         bool allow_empty = false);

struct CoefficientSummary {
  Matrix channels;     // 12 x 12 mean |weight|, rows = input channel
  Matrix articulators; // 6 x 6 mean of each 2 x 2 block
};

CoefficientSummary coefficient_matrix(std::span<const AffineAlignment> alignments);

/// Per-channel mean transfer correlation over the given alignments.
Vector articulator_scores(std::span<const AffineAlignment> alignments);

/// Off-diagonal (A != B) alignments that were fitted successfully.
std::vector<AffineAlignment> cross_speaker_alignments(const TransferResult& result);

}  // namespace artikit

#endif  // ARTIKIT_ALIGNMENT_H_
