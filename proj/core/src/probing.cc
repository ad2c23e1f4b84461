// core/src/probing.cc

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

#include "artikit/probing.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "artikit/error.h"
#include "artikit/parallel.h"
#include "artikit/rng.h"

namespace artikit {

namespace {

std::vector<const AlignedUtterance*> select(const SpeakerData& data,
                                            std::span<const std::string> ids) {
  std::vector<const AlignedUtterance*> out;
  if (ids.empty()) {
    for (const auto& u : data.utterances) out.push_back(&u);
    return out;
  }
  const std::set<std::string> wanted(ids.begin(), ids.end());
  for (const auto& u : data.utterances) {
    if (wanted.count(u.utterance_id)) out.push_back(&u);
  }
  return out;
}

template <typename Member>
Matrix stack(const SpeakerData& data, std::span<const std::string> ids, Member member) {
  const auto parts = select(data, ids);
  Eigen::Index rows = 0, cols = -1;
  for (const auto* u : parts) {
    const Matrix& m = u->*member;
    rows += m.rows();
    if (cols < 0) cols = m.cols();
    if (m.cols() != cols) {
      fail(ErrorCode::kShapeMismatch, "utterances of " + data.speaker_id + " differ in width");
    }
  }
  Matrix out(rows, std::max<Eigen::Index>(cols, 0));
  Eigen::Index at = 0;
  for (const auto* u : parts) {
    const Matrix& m = u->*member;
    out.middleRows(at, m.rows()) = m;
    at += m.rows();
  }
  return out;
}

Vector channel_scores(const Matrix& pred, const Matrix& target) {
  Vector s(pred.cols());
  for (Eigen::Index c = 0; c < pred.cols(); ++c) s(c) = pearson(pred.col(c), target.col(c));
  return s;
}

void check_speaker_data(const SpeakerData& data) {
  for (const auto& u : data.utterances) {
    if (u.features.rows() != u.ema.rows()) {
      fail(ErrorCode::kShapeMismatch, "utterance " + u.utterance_id +
                                          " is not frame aligned (" +
                                          std::to_string(u.features.rows()) + " vs " +
                                          std::to_string(u.ema.rows()) + " frames)");
    }
    if (u.ema.cols() != static_cast<Eigen::Index>(kNumChannels)) {
      fail(ErrorCode::kShapeMismatch, "utterance " + u.utterance_id + " EMA is not 12 channels");
    }
  }
}

}  // namespace

Eigen::Index SpeakerData::total_frames() const {
  Eigen::Index n = 0;
  for (const auto& u : utterances) n += u.features.rows();
  return n;
}

std::vector<std::string> SpeakerData::utterance_ids() const {
  std::vector<std::string> ids;
  ids.reserve(utterances.size());
  for (const auto& u : utterances) ids.push_back(u.utterance_id);
  return ids;
}

Matrix stack_features(const SpeakerData& data, std::span<const std::string> ids) {
  return stack(data, ids, &AlignedUtterance::features);
}

Matrix stack_ema(const SpeakerData& data, std::span<const std::string> ids) {
  return stack(data, ids, &AlignedUtterance::ema);
}

double pearson(const Eigen::Ref<const Vector>& x, const Eigen::Ref<const Vector>& y) {
  if (x.size() != y.size() || x.size() < 2) {
    fail(ErrorCode::kShapeMismatch, "pearson needs two vectors of equal length >= 2");
  }
  const double mx = x.mean();
  const double my = y.mean();
  const auto dx = x.array() - mx;
  const auto dy = y.array() - my;
  const double sxx = dx.square().sum();
  const double syy = dy.square().sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    fail(ErrorCode::kZeroVarianceInput, "pearson input has zero variance");
  }
  const double r = (dx * dy).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

double pearson(std::span<const double> x, std::span<const double> y) {
  return pearson(Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size())),
                 Eigen::Map<const Vector>(y.data(), static_cast<Eigen::Index>(y.size())));
}

CvPlan CvPlan::make(std::vector<std::string> utterance_ids, int n_folds, std::uint64_t seed) {
  if (n_folds < 2) fail(ErrorCode::kInvalidConfig, "cross-validation needs at least 2 folds");
  std::sort(utterance_ids.begin(), utterance_ids.end());
  if (std::adjacent_find(utterance_ids.begin(), utterance_ids.end()) != utterance_ids.end()) {
    fail(ErrorCode::kInvalidConfig, "utterance ids must be unique");
  }
  Rng rng(seed);
  for (std::size_t i = utterance_ids.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(utterance_ids[i - 1], utterance_ids[j]);
  }
  CvPlan plan;
  plan.n_folds = n_folds;
  plan.seed = seed;
  for (std::size_t i = 0; i < utterance_ids.size(); ++i) {
    plan.assignment[utterance_ids[i]] = static_cast<int>(i % static_cast<std::size_t>(n_folds));
  }
  return plan;
}

int CvPlan::fold_of(const std::string& utterance_id) const {
  auto it = assignment.find(utterance_id);
  if (it == assignment.end()) {
    fail(ErrorCode::kInconsistentCoverage, "utterance " + utterance_id + " is not in the CV plan");
  }
  return it->second;
}

std::vector<std::string> CvPlan::fold_members(int fold) const {
  std::vector<std::string> ids;
  for (const auto& [id, f] : assignment) {
    if (f == fold) ids.push_back(id);
  }
  return ids;
}

std::vector<CvFold> cross_validate(const SpeakerData& data, const CvPlan& plan,
                                   const ProbeConfig& cfg) {
  check_speaker_data(data);
  if (static_cast<int>(data.utterances.size()) < plan.n_folds) {
    fail(ErrorCode::kTooFewUtterances,
         "speaker " + data.speaker_id + " has " + std::to_string(data.utterances.size()) +
             " utterances; " + std::to_string(plan.n_folds) + "-fold CV needs at least as many");
  }
  std::vector<std::vector<std::string>> members(static_cast<std::size_t>(plan.n_folds));
  for (const auto& u : data.utterances) {
    members[static_cast<std::size_t>(plan.fold_of(u.utterance_id))].push_back(u.utterance_id);
  }

  std::vector<CvFold> folds;
  for (int f = 0; f < plan.n_folds; ++f) {
    std::vector<std::string> train_ids;
    for (int g = 0; g < plan.n_folds; ++g) {
      if (g == f) continue;
      const auto& m = members[static_cast<std::size_t>(g)];
      train_ids.insert(train_ids.end(), m.begin(), m.end());
    }
    const auto& test_ids = members[static_cast<std::size_t>(f)];
    if (test_ids.empty() || train_ids.empty()) {
      fail(ErrorCode::kTooFewUtterances, "fold " + std::to_string(f) + " of speaker " +
                                             data.speaker_id + " is empty");
    }
    const Matrix x_train = stack_features(data, train_ids);
    const Matrix y_train = stack_ema(data, train_ids);
    const double ridge = cfg.ridge.value_or(default_ridge(x_train, cfg.ridge_scale));
    const AffineMap map = fit_least_squares(x_train, y_train, ridge);

    CvFold fold;
    fold.fold = f;
    fold.held_out = test_ids;
    fold.predictions = apply(map, stack_features(data, test_ids));
    fold.targets = stack_ema(data, test_ids);
    if (cfg.correlation == CorrelationMode::kFoldConcat) {
      fold.scores = channel_scores(fold.predictions, fold.targets);
    } else {
      fold.scores = Vector::Zero(fold.targets.cols());
      Eigen::Index at = 0;
      for (const auto* u : select(data, test_ids)) {
        const Eigen::Index n = u->ema.rows();
        fold.scores += channel_scores(fold.predictions.middleRows(at, n), u->ema);
        at += n;
      }
      fold.scores /= static_cast<double>(test_ids.size());
    }
    folds.push_back(std::move(fold));
  }
  return folds;
}

InversionProbe fit_probe(const SpeakerData& data, const CvPlan& plan, const ProbeConfig& cfg) {
  const auto folds = cross_validate(data, plan, cfg);
  InversionProbe probe;
  probe.speaker_id = data.speaker_id;
  probe.source = data.source;
  probe.cv_scores.resize(static_cast<Eigen::Index>(folds.size()), static_cast<Eigen::Index>(kNumChannels));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    probe.cv_scores.row(static_cast<Eigen::Index>(f)) = folds[f].scores.transpose();
  }
  probe.mean_corr = probe.cv_scores.mean();

  const Matrix x = stack_features(data);
  const double ridge = cfg.ridge.value_or(default_ridge(x, cfg.ridge_scale));
  probe.map = fit_least_squares(x, stack_ema(data), ridge);
  probe.map.source = data.source;
  probe.map.training_meta["speaker_id"] = data.speaker_id;
  probe.map.training_meta["n_folds"] = plan.n_folds;
  probe.map.training_meta["cv_seed"] = plan.seed;
  probe.map.training_meta["mean_corr"] = probe.mean_corr;
  return probe;
}

LayerSweepResult layer_sweep(std::span<const SpeakerData> layers, const CvPlan& plan,
                             const ProbeConfig& cfg, unsigned threads) {
  if (layers.empty()) fail(ErrorCode::kInvalidConfig, "layer sweep needs at least one source");
  auto ids_of = [](const SpeakerData& d) {
    auto ids = d.utterance_ids();
    std::sort(ids.begin(), ids.end());
    return ids;
  };
  const auto reference = ids_of(layers[0]);
  for (const auto& layer : layers) {
    if (ids_of(layer) != reference) {
      fail(ErrorCode::kInconsistentCoverage,
           "source " + layer.source + " does not cover the same utterances as " + layers[0].source +
               " for speaker " + layer.speaker_id);
    }
  }
  LayerSweepResult result;
  result.probes.resize(layers.size());
  parallel_for(layers.size(), threads,
               [&](std::size_t i) { result.probes[i] = fit_probe(layers[i], plan, cfg); });
  for (std::size_t i = 1; i < result.probes.size(); ++i) {
    if (result.probes[i].mean_corr > result.probes[result.best_layer].mean_corr) {
      result.best_layer = i;
    }
  }
  return result;
}

std::vector<std::string> filter_speakers(std::span<const InversionProbe> probes, double threshold) {
  std::vector<std::string> kept;
  for (const auto& p : probes) {
    if (p.mean_corr >= threshold) kept.push_back(p.speaker_id);
  }
  return kept;
}

}  // namespace artikit
