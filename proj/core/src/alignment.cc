// core/src/alignment.cc

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

#include "artikit/alignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "artikit/error.h"
#include "artikit/parallel.h"
#include "artikit/rng.h"

namespace artikit {

std::pair<std::vector<std::string>, std::vector<std::string>> split_utterances(
    std::vector<std::string> ids, double train_fraction, std::uint64_t seed) {
  if (ids.size() < 2) {
    fail(ErrorCode::kTooFewUtterances, "a train/test split needs at least 2 utterances");
  }
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    fail(ErrorCode::kInvalidConfig, "train_fraction must lie in (0, 1)");
  }
  auto key = [seed](const std::string& id) { return splitmix64(fnv1a64(id) ^ seed); };
  std::sort(ids.begin(), ids.end(), [&](const std::string& a, const std::string& b) {
    const auto ka = key(a), kb = key(b);
    return ka != kb ? ka < kb : a < b;
  });
  auto n_train = static_cast<std::size_t>(std::llround(train_fraction * static_cast<double>(ids.size())));
  n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
  std::vector<std::string> train(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
  std::vector<std::string> test(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
  return {std::move(train), std::move(test)};
}

AffineAlignment fit_alignment(const InversionProbe& source_probe,
                              const InversionProbe& target_probe, const SpeakerData& target_data,
                              const AlignmentConfig& cfg) {
  if (source_probe.source != target_probe.source) {
    fail(ErrorCode::kSourceMismatch, "probe of " + source_probe.speaker_id + " uses '" +
                                         source_probe.source + "', probe of " +
                                         target_probe.speaker_id + " uses '" +
                                         target_probe.source + "'");
  }
  if (!target_data.source.empty() && target_data.source != target_probe.source) {
    fail(ErrorCode::kSourceMismatch, "target data source '" + target_data.source +
                                         "' differs from probe source '" + target_probe.source + "'");
  }
  const auto [train_ids, test_ids] =
      split_utterances(target_data.utterance_ids(), cfg.train_fraction, cfg.split_seed);

  const Matrix x_train = stack_features(target_data, train_ids);
  const Matrix source_train = apply(source_probe.map, x_train);
  const Matrix target_train = cfg.target == AlignmentTarget::kToPredictions
                                  ? apply(target_probe.map, x_train)
                                  : stack_ema(target_data, train_ids);
  LassoFit fit = fit_lasso(source_train, target_train, cfg.lasso);

  const Matrix x_test = stack_features(target_data, test_ids);
  const Matrix aligned = apply(fit.map, apply(source_probe.map, x_test));
  const Matrix reference = apply(target_probe.map, x_test);

  AffineAlignment out;
  out.source_speaker = source_probe.speaker_id;
  out.target_speaker = target_probe.speaker_id;
  out.train_mode = cfg.target;
  out.converged = fit.diagnostics.converged;
  out.transfer_corr.resize(aligned.cols());
  for (Eigen::Index c = 0; c < aligned.cols(); ++c) {
    const auto col = aligned.col(c);
    if (col.maxCoeff() == col.minCoeff()) {
      out.transfer_corr(c) = 0.0;
      out.degenerate_channels.push_back(static_cast<int>(c));
    } else {
      out.transfer_corr(c) = pearson(col, reference.col(c));
    }
  }
  out.mean_corr = out.transfer_corr.mean();
  out.map = std::move(fit.map);
  out.map.source = source_probe.source;
  out.map.training_meta["source_speaker"] = out.source_speaker;
  out.map.training_meta["target_speaker"] = out.target_speaker;
  out.map.training_meta["train_mode"] =
      cfg.target == AlignmentTarget::kToPredictions ? "to_predictions" : "to_ground_truth";
  out.map.training_meta["train_utterances"] = train_ids.size();
  out.map.training_meta["test_utterances"] = test_ids.size();
  return out;
}

TransferResult transferability_matrix(std::span<const InversionProbe> probes,
                                      std::span<const SpeakerData> data,
                                      const AlignmentConfig& cfg, unsigned threads,
                                      bool collect_failures) {
  if (probes.size() != data.size()) {
    fail(ErrorCode::kShapeMismatch, "need one data set per probe");
  }
  const std::size_t s = probes.size();
  if (s < 2) fail(ErrorCode::kTooFewPairs, "transferability needs at least 2 speakers");
  for (std::size_t i = 0; i < s; ++i) {
    if (probes[i].speaker_id != data[i].speaker_id) {
      fail(ErrorCode::kShapeMismatch, "probe " + probes[i].speaker_id + " is paired with data of " +
                                          data[i].speaker_id);
    }
  }
  TransferResult result;
  for (const auto& p : probes) result.speakers.push_back(p.speaker_id);
  result.alignments.resize(s * s);
  std::vector<std::string> errors(s * s);
  parallel_for(s * s, threads, [&](std::size_t idx) {
    const std::size_t a = idx / s, b = idx % s;
    if (!collect_failures) {
      result.alignments[idx] = fit_alignment(probes[a], probes[b], data[b], cfg);
      return;
    }
    try {
      result.alignments[idx] = fit_alignment(probes[a], probes[b], data[b], cfg);
    } catch (const Error& e) {
      AffineAlignment& failed = result.alignments[idx];
      failed.source_speaker = probes[a].speaker_id;
      failed.target_speaker = probes[b].speaker_id;
      failed.train_mode = cfg.target;
      failed.transfer_corr = Vector::Constant(static_cast<Eigen::Index>(kNumChannels),
                                              std::numeric_limits<double>::quiet_NaN());
      failed.mean_corr = std::numeric_limits<double>::quiet_NaN();
      failed.converged = false;
      errors[idx] = probes[a].speaker_id + " -> " + probes[b].speaker_id + ": " + e.what();
    }
  });
  for (auto& e : errors) {
    if (!e.empty()) result.failures.push_back(std::move(e));
  }
  result.matrix.resize(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      result.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          result.at(a, b).mean_corr;
    }
  }
  return result;
}

namespace {

int group_rank(const std::string& label) {
  const auto& groups = all_groups();
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (label == group_name(groups[i])) return static_cast<int>(i);
  }
  return static_cast<int>(groups.size());
}

}  // namespace

GroupMatrix group_matrix(const Matrix& matrix, std::span<const std::string> speaker_groups,
                         bool allow_empty) {
  const auto s = static_cast<std::size_t>(matrix.rows());
  if (matrix.cols() != matrix.rows() || speaker_groups.size() != s) {
    fail(ErrorCode::kShapeMismatch, "need a square matrix and one group label per speaker");
  }
  GroupMatrix out;
  out.groups.assign(speaker_groups.begin(), speaker_groups.end());
  std::sort(out.groups.begin(), out.groups.end(), [](const std::string& a, const std::string& b) {
    const int ra = group_rank(a), rb = group_rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  out.groups.erase(std::unique(out.groups.begin(), out.groups.end()), out.groups.end());
  std::map<std::string, Eigen::Index> index;
  for (std::size_t g = 0; g < out.groups.size(); ++g) index[out.groups[g]] = static_cast<Eigen::Index>(g);

  const auto n = static_cast<Eigen::Index>(out.groups.size());
  Matrix sums = Matrix::Zero(n, n);
  out.pairs = Eigen::MatrixXi::Zero(n, n);
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      const double v = matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      if (a == b || std::isnan(v)) continue;
      const Eigen::Index ga = index[speaker_groups[a]], gb = index[speaker_groups[b]];
      sums(ga, gb) += v;
      out.pairs(ga, gb) += 1;
    }
  }
  out.values.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (out.pairs(i, j) == 0) {
        if (!allow_empty) {
          fail(ErrorCode::kEmptyGroupPair, "no distinct-speaker pair for " +
                                               out.groups[static_cast<std::size_t>(i)] + " -> " +
                                               out.groups[static_cast<std::size_t>(j)]);
        }
        out.values(i, j) = std::numeric_limits<double>::quiet_NaN();
      } else {
        out.values(i, j) = sums(i, j) / out.pairs(i, j);
      }
    }
  }
  return out;
}

CoefficientSummary coefficient_matrix(std::span<const AffineAlignment> alignments) {
  if (alignments.empty()) fail(ErrorCode::kInvalidReport, "no alignments to summarise");
  const auto c = static_cast<Eigen::Index>(kNumChannels);
  CoefficientSummary out;
  out.channels = Matrix::Zero(c, c);
  for (const auto& a : alignments) {
    if (a.map.weights.rows() != c || a.map.weights.cols() != c) {
      fail(ErrorCode::kShapeMismatch, "alignment weights must be 12 x 12");
    }
    out.channels += a.map.weights.cwiseAbs();
  }
  out.channels /= static_cast<double>(alignments.size());
  const auto m = static_cast<Eigen::Index>(kNumArticulators);
  out.articulators.resize(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) out.articulators(i, j) = out.channels.block(2 * i, 2 * j, 2, 2).mean();
  }
  return out;
}

Vector articulator_scores(std::span<const AffineAlignment> alignments) {
  if (alignments.empty()) fail(ErrorCode::kInvalidReport, "no alignments to summarise");
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(kNumChannels));
  for (const auto& a : alignments) sum += a.transfer_corr;
  return sum / static_cast<double>(alignments.size());
}

std::vector<AffineAlignment> cross_speaker_alignments(const TransferResult& result) {
  std::vector<AffineAlignment> out;
  const std::size_t s = result.speakers.size();
  for (std::size_t a = 0; a < s; ++a) {
    for (std::size_t b = 0; b < s; ++b) {
      if (a != b && !std::isnan(result.at(a, b).mean_corr)) out.push_back(result.at(a, b));
    }
  }
  return out;
}

}  // namespace artikit
