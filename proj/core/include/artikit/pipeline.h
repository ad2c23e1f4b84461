// core/include/artikit/pipeline.h

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

#ifndef ARTIKIT_PIPELINE_H_
#define ARTIKIT_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "artikit/alignment.h"
#include "artikit/dataset.h"
#include "artikit/probing.h"
#include "artikit/report.h"
#include "artikit/stats.h"

namespace artikit {

std::string_view artikit_version();

struct RunConfig {
  std::filesystem::path manifest_path;
  std::vector<std::string> feature_sources;  // empty = every source in the manifest
  double lowpass_hz = kDefaultLowpassHz;     // 0 disables the filter
  int n_folds = 5;
  double lasso_alpha = 0.01;
  double min_corr = 0.8;
  std::uint64_t seed = 17;
  std::filesystem::path output_dir = "artikit-run";
  NormalizationOrder normalization_order = NormalizationOrder::kFilterThenNormalize;
  std::string transfer_source = "xlsr-layer17";
  AlignmentTarget alignment_target = AlignmentTarget::kToPredictions;
  CorrelationMode correlation = CorrelationMode::kFoldConcat;
  double train_fraction = 0.8;
  PairedTestKind paired_test = PairedTestKind::kPairedT;
  std::string dialect_corpus = "EMA-MAE";  // empty = no corpus restriction
  std::string gender_corpus = "HPRC";
  std::vector<std::string> preference;     // optional pair of sources to compare
  unsigned threads = 0;                    // 0 = ARTIKIT_THREADS or hardware

  /// Throws InvalidConfig.
  void validate() const;
  PreprocessConfig preprocess() const;
  ProbeConfig probe() const;
  AlignmentConfig alignment() const;
};

void to_json(nlohmann::json& j, const RunConfig& cfg);
void from_json(const nlohmann::json& j, RunConfig& cfg);
/// Relative manifest and output paths are resolved against the config file.
RunConfig load_run_config(const std::filesystem::path& path);
/// FNV-1a over the canonical (key-sorted) JSON form, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

std::string_view normalization_order_name(NormalizationOrder order);
NormalizationOrder parse_normalization_order(std::string_view name);
std::string_view alignment_target_name(AlignmentTarget target);
AlignmentTarget parse_alignment_target(std::string_view name);
std::string_view correlation_mode_name(CorrelationMode mode);
CorrelationMode parse_correlation_mode(std::string_view name);
PairedTestKind parse_paired_test(std::string_view name);

/// Public EMA corpora and their speaker groups. Speaker counts are
/// (total, retained after probe filtering) as reported for the reference
/// analysis.
struct CorpusInfo {
  std::string corpus;
  Group group;
  int speakers;
  int retained;
  double minutes_per_speaker;
};
const std::vector<CorpusInfo>& corpus_registry();
/// Every registry row for a corpus (EMA-MAE spans three groups). Throws
/// InvalidConfig for unknown corpora.
std::vector<CorpusInfo> corpus_lookup(std::string_view corpus);

/// Sorts source names so that trailing integers compare numerically
/// ("m-layer2" before "m-layer10").
bool natural_less(const std::string& a, const std::string& b);

// Stages shared by the pipeline and the individual subcommands.

/// One probe per speaker for `source`, each with its own CV plan. A speaker
/// whose probe throws is dropped and reported in `dropped`.
std::vector<InversionProbe> fit_probes(const Dataset& ds, const std::string& source,
                                       const RunConfig& cfg,
                                       std::vector<std::string>* dropped = nullptr);

/// Writes <dir>/<speaker>.map.json for every probe.
void write_probe_maps(std::span<const InversionProbe> probes, const std::filesystem::path& dir);
nlohmann::json probe_report_json(std::span<const InversionProbe> probes);
/// speaker_id,group,source,mean_corr
CsvTable probe_summary_table(std::span<const InversionProbe> probes,
                             std::span<const SpeakerMeta> speakers);

struct TransferOutputs {
  TransferResult transfer;
  GroupMatrix groups;
  CoefficientSummary coefficients;
  Vector channel_scores;
  std::vector<std::string> speaker_groups;
};

/// Transferability over `probes` (retained speakers, one source) using the
/// matching entries of `ds`, followed by group, coefficient and per-channel
/// summaries. Per-pair failures are collected, not thrown.
TransferOutputs run_transfer(const Dataset& ds, std::span<const InversionProbe> probes,
                             const RunConfig& cfg);
/// matrix.csv, group_matrix.csv, coef_matrix.csv, coef_articulators.csv,
/// articulator_scores.csv and pairs/<A>__<B>.map.json under `dir`.
void write_transfer_outputs(const TransferOutputs& out, const std::filesystem::path& dir);

nlohmann::json within_across_json(const WithinAcross& wa, Partition partition,
                                  std::string_view corpus);

/// Pairs two probe summaries by speaker (best source per speaker in each)
/// and tests a against b overall and per group.
nlohmann::json compare_preference(const CsvTable& a, const CsvTable& b, PairedTestKind test);
/// Within/across analysis from a transfer matrix CSV and a speakers CSV
/// (speaker_id, corpus, group, gender).
nlohmann::json compare_partition(const CsvTable& matrix, const CsvTable& speakers,
                                 Partition partition, std::string_view corpus);

struct RunSummary {
  std::vector<std::string> speakers;   // loaded
  std::vector<std::string> retained;   // passed min_corr
  std::string transfer_source;
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> files;
};

/// preprocess -> probe every source -> pick best source per speaker ->
/// filter speakers -> transfer -> group/coefficient/channel/statistics ->
/// CSV, JSON and SVG outputs plus run_meta.json under cfg.output_dir.
RunSummary run_full_pipeline(const RunConfig& cfg);

}  // namespace artikit

#endif  // ARTIKIT_PIPELINE_H_
