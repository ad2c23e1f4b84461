// core/src/pipeline.cc

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

#include "artikit/pipeline.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <set>

#include <Eigen/Core>

#include "artikit/akf.h"
#include "artikit/error.h"
#include "artikit/parallel.h"
#include "artikit/rng.h"

#ifndef ARTIKIT_VERSION
#define ARTIKIT_VERSION "0.0.0"
#endif

namespace artikit {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

[[noreturn]] void bad_config(const std::string& msg) { fail(ErrorCode::kInvalidConfig, msg); }

unsigned resolve_threads(unsigned threads) { return threads == 0 ? default_thread_count() : threads; }

json vector_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

std::vector<std::string> channel_labels() {
  std::vector<std::string> out;
  for (const auto& ch : canonical_channels()) out.push_back(channel_name(ch));
  return out;
}

std::vector<std::string> articulator_labels() {
  std::vector<std::string> out;
  for (std::size_t a = 0; a < kNumArticulators; ++a) {
    out.emplace_back(articulator_name(static_cast<Articulator>(a)));
  }
  return out;
}

json comparison_json(const PairedComparison& c) {
  json labels = c.labels;
  return json{{"test", std::string(paired_test_name(c.test))},
              {"n", c.a_scores.size()},
              {"n_used", c.n_used},
              {"mean_diff", c.mean_diff},
              {"statistic", std::isfinite(c.statistic) ? json(c.statistic)
                                                       : json(c.statistic > 0 ? "inf" : "-inf")},
              {"p_value", c.p_value},
              {"flag", std::string(test_flag_name(c.flag))},
              {"exact", c.exact},
              {"labels", std::move(labels)},
              {"a", vector_json(c.a_scores)},
              {"b", vector_json(c.b_scores)}};
}

// Best mean_corr per speaker in a probe summary, with the speaker's group.
std::map<std::string, std::pair<std::string, double>> best_per_speaker(const CsvTable& t) {
  const auto id = t.column("speaker_id"), group = t.column("group"), corr = t.column("mean_corr");
  std::map<std::string, std::pair<std::string, double>> out;
  for (const auto& row : t.rows) {
    double v = 0.0;
    try {
      v = std::stod(row[corr]);
    } catch (const std::exception&) {
      fail(ErrorCode::kInvalidReport, "mean_corr is not a number: '" + row[corr] + "'");
    }
    auto [it, inserted] = out.try_emplace(row[id], row[group], v);
    if (!inserted && v > it->second.second) it->second.second = v;
  }
  return out;
}

template <typename Clock = std::chrono::steady_clock>
double seconds_since(typename Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

std::string_view artikit_version() { return ARTIKIT_VERSION; }

// ---------------------------------------------------------------------------
// RunConfig

std::string_view normalization_order_name(NormalizationOrder order) {
  return order == NormalizationOrder::kFilterThenNormalize ? "filter_then_normalize"
                                                           : "normalize_then_filter";
}

NormalizationOrder parse_normalization_order(std::string_view name) {
  if (name == "filter_then_normalize") return NormalizationOrder::kFilterThenNormalize;
  if (name == "normalize_then_filter") return NormalizationOrder::kNormalizeThenFilter;
  bad_config("unknown normalization_order '" + std::string(name) + "'");
}

std::string_view alignment_target_name(AlignmentTarget target) {
  return target == AlignmentTarget::kToPredictions ? "to_predictions" : "to_ground_truth";
}

AlignmentTarget parse_alignment_target(std::string_view name) {
  if (name == "to_predictions") return AlignmentTarget::kToPredictions;
  if (name == "to_ground_truth") return AlignmentTarget::kToGroundTruth;
  bad_config("unknown alignment target '" + std::string(name) + "'");
}

std::string_view correlation_mode_name(CorrelationMode mode) {
  return mode == CorrelationMode::kFoldConcat ? "fold_concat" : "per_utterance";
}

CorrelationMode parse_correlation_mode(std::string_view name) {
  if (name == "fold_concat") return CorrelationMode::kFoldConcat;
  if (name == "per_utterance") return CorrelationMode::kPerUtterance;
  bad_config("unknown correlation mode '" + std::string(name) + "'");
}

PairedTestKind parse_paired_test(std::string_view name) {
  if (name == "paired_t" || name == "t") return PairedTestKind::kPairedT;
  if (name == "wilcoxon_signed_rank" || name == "wilcoxon") {
    return PairedTestKind::kWilcoxonSignedRank;
  }
  bad_config("unknown paired test '" + std::string(name) + "'");
}

void RunConfig::validate() const {
  if (manifest_path.empty()) bad_config("manifest_path is required");
  if (output_dir.empty()) bad_config("output_dir is required");
  if (!(lowpass_hz >= 0.0) || !std::isfinite(lowpass_hz)) bad_config("lowpass_hz must be >= 0");
  if (n_folds < 2 || n_folds > 100) bad_config("n_folds must lie in [2, 100]");
  if (!(lasso_alpha >= 0.0) || !std::isfinite(lasso_alpha)) bad_config("lasso_alpha must be >= 0");
  if (!(min_corr >= -1.0 && min_corr <= 1.0)) bad_config("min_corr must lie in [-1, 1]");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) bad_config("train_fraction must lie in (0, 1)");
  if (!preference.empty() && preference.size() != 2) {
    bad_config("preference must name exactly two sources");
  }
  if (preference.size() == 2 && preference[0] == preference[1]) {
    bad_config("preference sources must differ");
  }
  std::set<std::string> unique(feature_sources.begin(), feature_sources.end());
  if (unique.size() != feature_sources.size()) bad_config("feature_sources has duplicates");
}

PreprocessConfig RunConfig::preprocess() const {
  PreprocessConfig p;
  p.lowpass_hz = lowpass_hz;
  p.order = normalization_order;
  return p;
}

ProbeConfig RunConfig::probe() const {
  ProbeConfig p;
  p.correlation = correlation;
  return p;
}

AlignmentConfig RunConfig::alignment() const {
  AlignmentConfig a;
  a.lasso.alpha = lasso_alpha;
  a.train_fraction = train_fraction;
  a.split_seed = seed;
  a.target = alignment_target;
  return a;
}

void to_json(json& j, const RunConfig& c) {
  j = json{{"manifest_path", c.manifest_path.generic_string()},
           {"feature_sources", c.feature_sources},
           {"lowpass_hz", c.lowpass_hz},
           {"n_folds", c.n_folds},
           {"lasso_alpha", c.lasso_alpha},
           {"min_corr", c.min_corr},
           {"seed", c.seed},
           {"output_dir", c.output_dir.generic_string()},
           {"normalization_order", std::string(normalization_order_name(c.normalization_order))},
           {"transfer_source", c.transfer_source},
           {"alignment_target", std::string(alignment_target_name(c.alignment_target))},
           {"correlation", std::string(correlation_mode_name(c.correlation))},
           {"train_fraction", c.train_fraction},
           {"paired_test", std::string(paired_test_name(c.paired_test))},
           {"dialect_corpus", c.dialect_corpus},
           {"gender_corpus", c.gender_corpus},
           {"preference", c.preference},
           {"threads", c.threads}};
}

void from_json(const json& j, RunConfig& c) {
  if (!j.is_object()) bad_config("run config must be a JSON object");
  const json defaults = RunConfig{};
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) bad_config("unknown config field '" + key + "'");
  }
  try {
    RunConfig d;
    c.manifest_path = j.value("manifest_path", std::string());
    c.feature_sources = j.value("feature_sources", d.feature_sources);
    c.lowpass_hz = j.value("lowpass_hz", d.lowpass_hz);
    c.n_folds = j.value("n_folds", d.n_folds);
    c.lasso_alpha = j.value("lasso_alpha", d.lasso_alpha);
    c.min_corr = j.value("min_corr", d.min_corr);
    c.seed = j.value("seed", d.seed);
    c.output_dir = j.value("output_dir", d.output_dir.generic_string());
    c.normalization_order = parse_normalization_order(
        j.value("normalization_order", std::string(normalization_order_name(d.normalization_order))));
    c.transfer_source = j.value("transfer_source", d.transfer_source);
    c.alignment_target = parse_alignment_target(
        j.value("alignment_target", std::string(alignment_target_name(d.alignment_target))));
    c.correlation = parse_correlation_mode(
        j.value("correlation", std::string(correlation_mode_name(d.correlation))));
    c.train_fraction = j.value("train_fraction", d.train_fraction);
    c.paired_test =
        parse_paired_test(j.value("paired_test", std::string(paired_test_name(d.paired_test))));
    c.dialect_corpus = j.value("dialect_corpus", d.dialect_corpus);
    c.gender_corpus = j.value("gender_corpus", d.gender_corpus);
    c.preference = j.value("preference", d.preference);
    c.threads = j.value("threads", d.threads);
  } catch (const json::exception& e) {
    bad_config(e.what());
  }
}

RunConfig load_run_config(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    bad_config(path.string() + ": " + e.what());
  } catch (const Error& e) {
    bad_config(e.what());
  }
  RunConfig cfg = j.get<RunConfig>();
  const auto base = path.parent_path();
  if (!cfg.manifest_path.empty() && cfg.manifest_path.is_relative()) {
    cfg.manifest_path = base / cfg.manifest_path;
  }
  if (j.contains("output_dir") && cfg.output_dir.is_relative()) cfg.output_dir = base / cfg.output_dir;
  return cfg;
}

std::string config_hash(const RunConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(json(cfg).dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Registry

const std::vector<CorpusInfo>& corpus_registry() {
  static const std::vector<CorpusInfo> registry = {
      {"MNGU0", Group::kEnUK, 1, 1, 75.0},       {"MOCHA-TIMIT", Group::kEnUK, 7, 7, 27.0},
      {"HPRC", Group::kEnUS, 8, 8, 59.0},        {"EMA-MAE", Group::kEnUS, 20, 18, 12.0},
      {"EMA-MAE", Group::kEnBJ, 10, 9, 17.0},    {"EMA-MAE", Group::kEnSH, 9, 5, 16.0},
      {"DKU-JNU-EMA", Group::kMandarin, 4, 2, 20.0}, {"MSPKA", Group::kItalian, 3, 2, 47.0},
  };
  return registry;
}

std::vector<CorpusInfo> corpus_lookup(std::string_view corpus) {
  std::vector<CorpusInfo> out;
  for (const auto& row : corpus_registry()) {
    if (row.corpus == corpus) out.push_back(row);
  }
  if (out.empty()) bad_config("unknown corpus '" + std::string(corpus) + "'");
  return out;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      // Compare digit runs by value: strip leading zeros, then length, then text.
      std::string_view ra(a.data() + i, ie - i), rb(b.data() + j, je - j);
      while (ra.size() > 1 && ra.front() == '0') ra.remove_prefix(1);
      while (rb.size() > 1 && rb.front() == '0') rb.remove_prefix(1);
      if (ra.size() != rb.size()) return ra.size() < rb.size();
      if (ra != rb) return ra < rb;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  if ((a.size() - i) != (b.size() - j)) return (a.size() - i) < (b.size() - j);
  return a < b;
}

// ---------------------------------------------------------------------------
// Stages

std::vector<InversionProbe> fit_probes(const Dataset& ds, const std::string& source,
                                       const RunConfig& cfg, std::vector<std::string>* dropped) {
  const auto& data = ds.source(source);
  std::vector<std::optional<InversionProbe>> slots(data.size());
  std::vector<std::string> errors(data.size());
  parallel_for(data.size(), resolve_threads(cfg.threads), [&](std::size_t i) {
    try {
      const CvPlan plan = CvPlan::make(data[i].utterance_ids(), cfg.n_folds, cfg.seed);
      slots[i] = fit_probe(data[i], plan, cfg.probe());
    } catch (const Error& e) {
      if (dropped == nullptr) throw;
      errors[i] = data[i].speaker_id + " (" + source + "): " + e.what();
    }
  });
  std::vector<InversionProbe> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) {
      out.push_back(std::move(*slots[i]));
    } else if (dropped != nullptr) {
      dropped->push_back(errors[i]);
    }
  }
  return out;
}

void write_probe_maps(std::span<const InversionProbe> probes, const fs::path& dir) {
  for (const auto& p : probes) save_affine_map(p.map, dir / (p.speaker_id + ".map.json"));
}

json probe_report_json(std::span<const InversionProbe> probes) {
  json out = json::array();
  const auto channels = channel_labels();
  for (const auto& p : probes) {
    json folds = json::array();
    for (Eigen::Index f = 0; f < p.cv_scores.rows(); ++f) {
      json scores = json::object();
      for (Eigen::Index c = 0; c < p.cv_scores.cols(); ++c) {
        scores[channels[static_cast<std::size_t>(c)]] = p.cv_scores(f, c);
      }
      folds.push_back(std::move(scores));
    }
    json per_channel = json::object();
    const Vector channel_mean = p.cv_scores.colwise().mean().transpose();
    for (Eigen::Index c = 0; c < channel_mean.size(); ++c) {
      per_channel[channels[static_cast<std::size_t>(c)]] = channel_mean(c);
    }
    out.push_back({{"speaker_id", p.speaker_id},
                   {"source", p.source},
                   {"mean_corr", p.mean_corr},
                   {"per_channel", std::move(per_channel)},
                   {"folds", std::move(folds)}});
  }
  return out;
}

CsvTable probe_summary_table(std::span<const InversionProbe> probes,
                             std::span<const SpeakerMeta> speakers) {
  std::map<std::string, std::string> groups;
  for (const auto& s : speakers) groups[s.speaker_id] = std::string(group_name(s.group));
  CsvTable t;
  t.header = {"speaker_id", "group", "source", "mean_corr"};
  for (const auto& p : probes) {
    t.rows.push_back({p.speaker_id, groups.at(p.speaker_id), p.source, format_float(p.mean_corr)});
  }
  return t;
}

TransferOutputs run_transfer(const Dataset& ds, std::span<const InversionProbe> probes,
                             const RunConfig& cfg) {
  if (probes.empty()) fail(ErrorCode::kTooFewPairs, "no probes for transfer");
  const std::string source = probes.front().source;
  const auto& all = ds.source(source);
  std::map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < all.size(); ++i) pos[all[i].speaker_id] = i;
  std::vector<SpeakerData> data;
  TransferOutputs out;
  for (const auto& p : probes) {
    auto it = pos.find(p.speaker_id);
    if (it == pos.end()) {
      fail(ErrorCode::kInvalidManifest, "no data for probe speaker " + p.speaker_id);
    }
    data.push_back(all[it->second]);
    out.speaker_groups.emplace_back(group_name(ds.speakers[it->second].group));
  }
  out.transfer = transferability_matrix(probes, data, cfg.alignment(), resolve_threads(cfg.threads),
                                        /*collect_failures=*/true);
  out.groups = group_matrix(out.transfer.matrix, out.speaker_groups, /*allow_empty=*/true);
  const auto cross = cross_speaker_alignments(out.transfer);
  if (cross.empty()) {
    fail(ErrorCode::kTooFewPairs, "no cross-speaker alignment could be fitted");
  }
  out.coefficients = coefficient_matrix(cross);
  out.channel_scores = articulator_scores(cross);
  return out;
}

void write_transfer_outputs(const TransferOutputs& out, const fs::path& dir) {
  write_csv(dir / "matrix.csv", matrix_table("speaker", out.transfer.speakers, out.transfer.matrix));
  write_csv(dir / "group_matrix.csv", matrix_table("group", out.groups.groups, out.groups.values));
  write_csv(dir / "coef_matrix.csv",
            matrix_table("channel", channel_labels(), out.coefficients.channels));
  write_csv(dir / "coef_articulators.csv",
            matrix_table("articulator", articulator_labels(), out.coefficients.articulators));
  CsvTable scores;
  scores.header = {"channel", "score"};
  const auto channels = channel_labels();
  for (std::size_t c = 0; c < channels.size(); ++c) {
    scores.rows.push_back({channels[c], format_float(out.channel_scores(static_cast<Eigen::Index>(c)))});
  }
  write_csv(dir / "articulator_scores.csv", scores);
  for (const auto& a : out.transfer.alignments) {
    if (std::isnan(a.mean_corr)) continue;
    save_affine_map(a.map, dir / "pairs" / (a.source_speaker + "__" + a.target_speaker + ".map.json"));
  }
}

json within_across_json(const WithinAcross& wa, Partition partition, std::string_view corpus) {
  return json{{"partition", partition == Partition::kDialect ? "dialect" : "gender"},
              {"corpus", std::string(corpus)},
              {"test", "welch_t"},
              {"within_mean", wa.within_mean},
              {"across_mean", wa.across_mean},
              {"difference", wa.within_mean - wa.across_mean},
              {"t", wa.test.t},
              {"dof", wa.test.dof},
              {"p_value", wa.test.p_value},
              {"n_within", wa.within.size()},
              {"n_across", wa.across.size()},
              {"within", wa.within},
              {"across", wa.across}};
}

json compare_preference(const CsvTable& a, const CsvTable& b, PairedTestKind test) {
  const auto best_a = best_per_speaker(a), best_b = best_per_speaker(b);
  std::vector<std::string> ids;
  std::map<std::string, std::vector<std::string>> by_group;
  for (const auto& [id, entry] : best_a) {
    if (best_b.count(id)) {
      ids.push_back(id);
      by_group[entry.first].push_back(id);
    }
  }
  auto run = [&](const std::vector<std::string>& subset) -> json {
    std::vector<double> xa, xb;
    for (const auto& id : subset) {
      xa.push_back(best_a.at(id).second);
      xb.push_back(best_b.at(id).second);
    }
    try {
      return comparison_json(paired_test(xa, xb, test, subset));
    } catch (const Error& e) {
      return json{{"skipped", e.what()}, {"n", subset.size()}};
    }
  };
  json groups = json::object();
  for (const auto& [g, members] : by_group) groups[g] = run(members);
  return json{{"mode", "preference"},
              {"test", std::string(paired_test_name(test))},
              {"n_paired", ids.size()},
              {"overall", run(ids)},
              {"groups", std::move(groups)}};
}

json compare_partition(const CsvTable& matrix, const CsvTable& speakers, Partition partition,
                       std::string_view corpus) {
  std::vector<std::string> labels;
  Matrix m;
  read_matrix_table(matrix, labels, m);
  const auto id = speakers.column("speaker_id"), cp = speakers.column("corpus"),
             gp = speakers.column("group"), gd = speakers.column("gender");
  std::map<std::string, SpeakerMeta> metas;
  for (const auto& row : speakers.rows) {
    SpeakerMeta meta;
    meta.speaker_id = row[id];
    meta.corpus = row[cp];
    meta.group = parse_group(row[gp]);
    meta.gender = parse_gender(row[gd]);
    metas[meta.speaker_id] = meta;
  }
  std::vector<SpeakerMeta> ordered;
  for (const auto& l : labels) {
    auto it = metas.find(l);
    if (it == metas.end()) fail(ErrorCode::kInvalidReport, "speaker " + l + " missing from speakers CSV");
    ordered.push_back(it->second);
  }
  const WithinAcross wa = within_across(m, ordered, partition, corpus);
  json out = within_across_json(wa, partition, corpus);
  out["mode"] = partition == Partition::kDialect ? "dialect" : "gender";
  return out;
}

// ---------------------------------------------------------------------------
// Full run

RunSummary run_full_pipeline(const RunConfig& cfg) {
  cfg.validate();
  using Clock = std::chrono::steady_clock;
  const auto t_start = Clock::now();
  json timings = json::object();
  RunSummary summary;
  const fs::path out_dir = cfg.output_dir;
  auto record = [&](const fs::path& p) { summary.files.push_back(p); };
  auto put_csv = [&](const fs::path& p, const CsvTable& t) {
    write_csv(p, t);
    record(p);
  };
  auto put_json = [&](const fs::path& p, const json& j) {
    write_text_file(p, j.dump(2) + "\n");
    record(p);
  };

  // Ingestion fails fast.
  auto t0 = Clock::now();
  const Dataset ds = load_dataset(cfg.manifest_path, cfg.feature_sources, cfg.preprocess(),
                                  resolve_threads(cfg.threads));
  timings["load"] = seconds_since(t0);
  summary.speakers = ds.speaker_ids();

  std::vector<std::string> sources = ds.sources;
  if (!cfg.feature_sources.empty()) {
    sources = cfg.feature_sources;
  } else {
    std::sort(sources.begin(), sources.end(), natural_less);
  }

  // Probes for every (speaker, source).
  t0 = Clock::now();
  const std::size_t n_spk = ds.speakers.size(), n_src = sources.size();
  std::vector<std::optional<InversionProbe>> probes(n_spk * n_src);
  std::vector<std::string> probe_errors(n_spk * n_src);
  parallel_for(n_spk * n_src, resolve_threads(cfg.threads), [&](std::size_t k) {
    const std::size_t s = k / n_src, l = k % n_src;
    const auto& data = ds.source(sources[l])[s];
    try {
      const CvPlan plan = CvPlan::make(data.utterance_ids(), cfg.n_folds, cfg.seed);
      probes[k] = fit_probe(data, plan, cfg.probe());
    } catch (const Error& e) {
      probe_errors[k] = data.speaker_id + " (" + sources[l] + "): " + e.what();
    }
  });
  timings["probe"] = seconds_since(t0);

  std::vector<bool> alive(n_spk, true);
  for (std::size_t k = 0; k < probes.size(); ++k) {
    if (!probes[k]) {
      alive[k / n_src] = false;
      summary.warnings.push_back("dropped speaker after probe failure: " + probe_errors[k]);
    }
  }

  std::vector<SpeakerMeta> metas_alive;
  std::vector<InversionProbe> all_probes, best_probes;
  std::vector<std::size_t> best_index(n_spk, 0);
  CsvTable sweep;
  sweep.header = {"speaker_id", "group", "source", "mean_corr", "is_best"};
  for (std::size_t s = 0; s < n_spk; ++s) {
    if (!alive[s]) continue;
    metas_alive.push_back(ds.speakers[s]);
    std::size_t best = 0;
    for (std::size_t l = 1; l < n_src; ++l) {
      if (probes[s * n_src + l]->mean_corr > probes[s * n_src + best]->mean_corr) best = l;
    }
    best_index[s] = best;
    for (std::size_t l = 0; l < n_src; ++l) {
      const auto& p = *probes[s * n_src + l];
      all_probes.push_back(p);
      sweep.rows.push_back({p.speaker_id, std::string(group_name(ds.speakers[s].group)), p.source,
                            format_float(p.mean_corr), l == best ? "1" : "0"});
    }
    best_probes.push_back(*probes[s * n_src + best]);
  }
  if (best_probes.empty()) fail(ErrorCode::kTooFewUtterances, "every speaker failed probing");

  for (std::size_t l = 0; l < n_src; ++l) {
    std::vector<InversionProbe> layer;
    for (std::size_t s = 0; s < n_spk; ++s) {
      if (alive[s]) layer.push_back(*probes[s * n_src + l]);
    }
    write_probe_maps(layer, out_dir / "probes" / sources[l]);
  }
  put_json(out_dir / "probes" / "probe_report.json", probe_report_json(all_probes));
  put_csv(out_dir / "probes" / "probe_summary.csv", probe_summary_table(all_probes, ds.speakers));
  put_csv(out_dir / "probes" / "layer_sweep.csv", sweep);

  summary.retained = filter_speakers(best_probes, cfg.min_corr);
  const std::set<std::string> retained(summary.retained.begin(), summary.retained.end());

  CsvTable speakers_csv;
  speakers_csv.header = {"speaker_id", "corpus", "group", "gender", "minutes",
                         "best_source", "best_corr", "retained"};
  {
    std::size_t b = 0;
    for (std::size_t s = 0; s < n_spk; ++s) {
      const auto& m = ds.speakers[s];
      const bool ok = alive[s];
      speakers_csv.rows.push_back(
          {m.speaker_id, m.corpus.empty() ? "unknown" : m.corpus, std::string(group_name(m.group)),
           std::string(gender_name(m.gender)), format_float(m.minutes),
           ok ? sources[best_index[s]] : "none", ok ? format_float(best_probes[b].mean_corr) : "nan",
           retained.count(m.speaker_id) ? "1" : "0"});
      if (ok) ++b;
    }
  }
  put_csv(out_dir / "speakers.csv", speakers_csv);

  // Model-preference comparison.
  std::vector<ScatterPoint> pref_points;
  if (cfg.preference.size() == 2) {
    std::vector<InversionProbe> pa, pb;
    for (const auto& p : all_probes) {
      if (p.source == cfg.preference[0]) pa.push_back(p);
      if (p.source == cfg.preference[1]) pb.push_back(p);
    }
    if (pa.empty() || pb.empty()) {
      summary.warnings.push_back("preference sources not loaded; comparison skipped");
    } else {
      const json cmp = compare_preference(probe_summary_table(pa, ds.speakers),
                                          probe_summary_table(pb, ds.speakers), cfg.paired_test);
      put_json(out_dir / "stats" / "preference.json", cmp);
      CsvTable pref;
      pref.header = {"speaker_id", "group", "source_a", "source_b", "corr_a", "corr_b"};
      for (std::size_t i = 0; i < pa.size() && i < pb.size(); ++i) {
        const auto& m = std::find_if(ds.speakers.begin(), ds.speakers.end(), [&](const SpeakerMeta& x) {
          return x.speaker_id == pa[i].speaker_id;
        });
        pref.rows.push_back({pa[i].speaker_id, std::string(group_name(m->group)), pa[i].source,
                             pb[i].source, format_float(pa[i].mean_corr), format_float(pb[i].mean_corr)});
        pref_points.push_back({pa[i].speaker_id, pa[i].mean_corr, pb[i].mean_corr});
      }
      put_csv(out_dir / "preference.csv", pref);
    }
  }

  // Transfer on the retained speakers' probes for one source.
  std::string transfer_source = cfg.transfer_source;
  if (std::find(sources.begin(), sources.end(), transfer_source) == sources.end()) {
    std::map<std::string, int> votes;
    for (std::size_t s = 0, b = 0; s < n_spk; ++s) {
      if (!alive[s]) continue;
      if (retained.count(best_probes[b].speaker_id)) ++votes[sources[best_index[s]]];
      ++b;
    }
    std::string chosen = sources.front();
    int most = -1;
    for (const auto& src : sources) {
      if (votes[src] > most) {
        most = votes[src];
        chosen = src;
      }
    }
    summary.warnings.push_back("transfer source '" + transfer_source +
                               "' not loaded; using most frequent best source '" + chosen + "'");
    transfer_source = chosen;
  }
  summary.transfer_source = transfer_source;

  std::vector<InversionProbe> transfer_probes;
  std::vector<SpeakerMeta> transfer_metas;
  for (const auto& p : all_probes) {
    if (p.source == transfer_source && retained.count(p.speaker_id)) transfer_probes.push_back(p);
  }
  for (const auto& m : metas_alive) {
    if (retained.count(m.speaker_id)) transfer_metas.push_back(m);
  }
  if (transfer_probes.size() < 2) {
    fail(ErrorCode::kTooFewPairs, std::to_string(transfer_probes.size()) +
                                      " speaker(s) passed min_corr; transfer needs at least 2");
  }

  t0 = Clock::now();
  const TransferOutputs tr = run_transfer(ds, transfer_probes, cfg);
  timings["transfer"] = seconds_since(t0);
  for (const auto& f : tr.transfer.failures) summary.warnings.push_back("transfer pair failed: " + f);
  write_transfer_outputs(tr, out_dir / "transfer");
  for (const char* name : {"matrix.csv", "group_matrix.csv", "coef_matrix.csv",
                           "coef_articulators.csv", "articulator_scores.csv"}) {
    record(out_dir / "transfer" / name);
  }

  // Within/across statistics; a cohort that cannot be formed is a warning.
  t0 = Clock::now();
  auto partition_stats = [&](Partition partition, const std::string& corpus, const char* file) {
    json j;
    try {
      const WithinAcross wa = within_across(tr.transfer.matrix, transfer_metas, partition, corpus);
      j = within_across_json(wa, partition, corpus);
    } catch (const Error& e) {
      j = json{{"partition", partition == Partition::kDialect ? "dialect" : "gender"},
               {"corpus", corpus},
               {"skipped", e.what()}};
      summary.warnings.push_back(std::string(file) + " skipped: " + e.what());
    }
    put_json(out_dir / "stats" / file, j);
  };
  partition_stats(Partition::kDialect, cfg.dialect_corpus, "dialect.json");
  partition_stats(Partition::kGender, cfg.gender_corpus, "gender.json");
  timings["stats"] = seconds_since(t0);

  t0 = Clock::now();
  ReportBundle bundle;
  bundle.speakers = tr.transfer.speakers;
  bundle.transfer = tr.transfer.matrix;
  bundle.groups = tr.groups.groups;
  bundle.group_values = tr.groups.values;
  bundle.channels = channel_labels();
  bundle.channel_scores = tr.channel_scores;
  bundle.preference = std::move(pref_points);
  if (!bundle.preference.empty()) {
    bundle.preference_x = cfg.preference[0];
    bundle.preference_y = cfg.preference[1];
  }
  for (const auto& f : emit_charts(bundle, out_dir)) record(f);
  timings["report"] = seconds_since(t0);
  timings["total"] = seconds_since(t_start);

  json outputs = json::array();
  for (const auto& f : summary.files) outputs.push_back(fs::relative(f, out_dir).generic_string());
  json meta = {
      {"artikit_version", std::string(artikit_version())},
      {"config", json(cfg)},
      {"config_hash", config_hash(cfg)},
      {"versions",
       {{"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                              std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
        {"compiler", __VERSION__}}},
      {"timings_s", timings},
      {"n_speakers", summary.speakers.size()},
      {"n_retained", summary.retained.size()},
      {"sources", sources},
      {"transfer_source", transfer_source},
      {"warnings", summary.warnings},
      {"outputs", std::move(outputs)}};
  put_json(out_dir / "run_meta.json", meta);
  return summary;
}

}  // namespace artikit
