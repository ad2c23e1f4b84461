// tools/cli.cc

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

#include "cli.h"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "artikit/acoustic.h"
#include "artikit/akf.h"
#include "artikit/dataset.h"
#include "artikit/error.h"
#include "artikit/pipeline.h"
#include "artikit/report.h"
#include "artikit/synth.h"

namespace artikit::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonProbeOptions {
  int folds = 5;
  double lowpass = kDefaultLowpassHz;
  std::uint64_t seed = 17;
  std::string normalization = "filter_then_normalize";
  std::string correlation = "fold_concat";
};

void add_probe_options(CLI::App* cmd, CommonProbeOptions& o) {
  cmd->add_option("--folds", o.folds, "Cross-validation folds")->capture_default_str();
  cmd->add_option("--lowpass", o.lowpass, "EMA low-pass cutoff in Hz (0 disables)")
      ->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for fold assignment")->capture_default_str();
  cmd->add_option("--normalization", o.normalization, "filter_then_normalize | normalize_then_filter")
      ->capture_default_str();
  cmd->add_option("--correlation", o.correlation, "fold_concat | per_utterance")
      ->capture_default_str();
}

RunConfig config_from(const CommonProbeOptions& o, const fs::path& manifest) {
  RunConfig cfg;
  cfg.manifest_path = manifest;
  cfg.n_folds = o.folds;
  cfg.lowpass_hz = o.lowpass;
  cfg.seed = o.seed;
  cfg.normalization_order = parse_normalization_order(o.normalization);
  cfg.correlation = parse_correlation_mode(o.correlation);
  cfg.validate();
  return cfg;
}

int cmd_synth(const fs::path& spec_path, const fs::path& out_dir,
              std::optional<std::uint64_t> seed, std::ostream& out) {
  SynthSpec spec = load_synth_spec(spec_path);
  if (seed) spec.seed = *seed;
  const SynthCohort cohort = generate(spec, 0);
  const auto entries = write_cohort(cohort, out_dir);
  out << "wrote " << cohort.speakers.size() << " speakers, " << entries.size()
      << " manifest entries to " << out_dir.string() << "\n";
  return 0;
}

int cmd_baseline(const std::string& type, const fs::path& audio, const fs::path& out_path,
                 const std::string& config_path, std::string speaker, std::string utterance,
                 std::ostream& out) {
  MelConfig mel;
  if (!config_path.empty()) {
    try {
      mel = json::parse(read_text_file(config_path)).get<MelConfig>();
    } catch (const json::exception& e) {
      fail(ErrorCode::kInvalidConfig, config_path + ": " + e.what());
    }
  }
  mel.validate();
  const AudioClip clip = read_wav(audio);
  FeatureMatrix f = compute_baseline(parse_baseline(type), clip, mel);
  f.speaker_id = speaker.empty() ? "unknown" : std::move(speaker);
  f.utterance_id = utterance.empty() ? audio.stem().string() : std::move(utterance);
  write_akf(f, out_path);
  out << "wrote " << f.frames() << " x " << f.dim() << " " << f.source << " features to "
      << out_path.string() << "\n";
  return 0;
}

int cmd_probe(const fs::path& manifest, const std::string& source, const CommonProbeOptions& o,
              const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = config_from(o, manifest);
  const std::vector<std::string> sources{source};
  const Dataset ds = load_dataset(manifest, sources, cfg.preprocess());
  std::vector<std::string> dropped;
  const auto probes = fit_probes(ds, source, cfg, &dropped);
  for (const auto& d : dropped) err << "warning: dropped " << d << "\n";
  write_probe_maps(probes, out_dir);
  write_text_file(out_dir / "probe_report.json", probe_report_json(probes).dump(2) + "\n");
  write_csv(out_dir / "probe_summary.csv", probe_summary_table(probes, ds.speakers));
  for (const auto& p : probes) out << p.speaker_id << "\t" << format_float(p.mean_corr) << "\n";
  return 0;
}

int cmd_layer_sweep(const fs::path& manifest, const std::vector<std::string>& sources,
                    const CommonProbeOptions& o, const fs::path& out_path, std::ostream& out) {
  const RunConfig cfg = config_from(o, manifest);
  const Dataset ds = load_dataset(manifest, sources, cfg.preprocess());
  std::vector<std::vector<InversionProbe>> by_layer;
  for (const auto& s : sources) by_layer.push_back(fit_probes(ds, s, cfg));
  CsvTable t;
  t.header = {"speaker_id", "group", "source", "mean_corr", "is_best"};
  for (std::size_t i = 0; i < ds.speakers.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t l = 1; l < sources.size(); ++l) {
      if (by_layer[l][i].mean_corr > by_layer[best][i].mean_corr) best = l;
    }
    for (std::size_t l = 0; l < sources.size(); ++l) {
      const auto& p = by_layer[l][i];
      t.rows.push_back({p.speaker_id, std::string(group_name(ds.speakers[i].group)), p.source,
                        format_float(p.mean_corr), l == best ? "1" : "0"});
    }
    out << ds.speakers[i].speaker_id << "\tbest " << sources[best] << "\t"
        << format_float(by_layer[best][i].mean_corr) << "\n";
  }
  write_csv(out_path, t);
  return 0;
}

int cmd_transfer(const fs::path& probe_dir, const fs::path& manifest, double alpha, double min_corr,
                 std::string source, const std::string& mode, std::uint64_t seed, double lowpass,
                 const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  std::vector<InversionProbe> probes;
  std::vector<fs::path> files;
  if (!fs::is_directory(probe_dir)) fail(ErrorCode::kIo, "no probe directory " + probe_dir.string());
  for (const auto& entry : fs::directory_iterator(probe_dir)) {
    const std::string name = entry.path().filename().string();
    if (name.size() > 9 && name.ends_with(".map.json")) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    InversionProbe p;
    p.map = load_affine_map(f);
    const std::string name = f.filename().string();
    p.speaker_id = p.map.training_meta.value("speaker_id", name.substr(0, name.size() - 9));
    p.source = p.map.source;
    p.mean_corr = p.map.training_meta.value("mean_corr", 0.0);
    if (!source.empty() && p.source != source) continue;
    probes.push_back(std::move(p));
  }
  if (probes.empty()) fail(ErrorCode::kInvalidManifest, "no probe maps in " + probe_dir.string());
  if (source.empty()) source = probes.front().source;
  for (const auto& p : probes) {
    if (p.source != source) {
      fail(ErrorCode::kSourceMismatch, "probe maps mix sources '" + source + "' and '" + p.source +
                                           "'; pick one with --source");
    }
  }
  RunConfig cfg;
  cfg.manifest_path = manifest;
  cfg.lasso_alpha = alpha;
  cfg.min_corr = min_corr;
  cfg.seed = seed;
  cfg.lowpass_hz = lowpass;
  cfg.alignment_target = parse_alignment_target(mode);
  cfg.validate();

  const auto kept_ids = filter_speakers(probes, min_corr);
  const std::set<std::string> kept(kept_ids.begin(), kept_ids.end());
  std::vector<InversionProbe> retained;
  for (auto& p : probes) {
    if (kept.count(p.speaker_id)) {
      retained.push_back(std::move(p));
    } else {
      err << "note: " << p.speaker_id << " below min-corr, excluded\n";
    }
  }
  if (retained.size() < 2) {
    fail(ErrorCode::kTooFewPairs, "fewer than 2 speakers pass min-corr");
  }
  const std::vector<std::string> sources{source};
  const Dataset ds = load_dataset(manifest, sources, cfg.preprocess());
  const TransferOutputs tr = run_transfer(ds, retained, cfg);
  for (const auto& f : tr.transfer.failures) err << "warning: pair failed: " << f << "\n";
  write_transfer_outputs(tr, out_dir);
  out << "transfer matrix over " << retained.size() << " speakers written to " << out_dir.string()
      << "\n";
  return 0;
}

int cmd_compare(const std::string& mode, const std::vector<std::string>& inputs,
                const std::string& test, std::optional<std::string> corpus, const fs::path& out_path,
                std::ostream& out) {
  json report;
  if (mode == "preference") {
    if (inputs.size() != 2) {
      fail(ErrorCode::kInvalidConfig, "preference needs two probe summary CSVs (A then B)");
    }
    report = compare_preference(read_csv(inputs[0]), read_csv(inputs[1]), parse_paired_test(test));
  } else if (mode == "dialect" || mode == "gender") {
    if (inputs.size() != 2) {
      fail(ErrorCode::kInvalidConfig, mode + " needs matrix.csv and speakers.csv");
    }
    const Partition partition = mode == "dialect" ? Partition::kDialect : Partition::kGender;
    std::string c = corpus.value_or(partition == Partition::kDialect ? "EMA-MAE" : "HPRC");
    if (c == "any") c.clear();
    report = compare_partition(read_csv(inputs[0]), read_csv(inputs[1]), partition, c);
  } else {
    fail(ErrorCode::kInvalidConfig, "unknown compare mode '" + mode + "'");
  }
  report["inputs"] = inputs;
  write_text_file(out_path, report.dump(2) + "\n");
  out << "wrote " << out_path.string() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"artikit: articulatory probing and cross-speaker transfer analysis"};
  app.name(args.empty() ? "artikit" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(artikit_version()));

  // synth
  std::string synth_spec, synth_out;
  std::optional<std::uint64_t> synth_seed;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort with ground truth");
  synth->add_option("--spec", synth_spec, "Synthetic cohort description (JSON)")->required();
  synth->add_option("--out", synth_out, "Output directory")->required();
  synth->add_option("--seed", synth_seed, "Override the seed in the cohort description");

  // baseline
  std::string bl_type, bl_audio, bl_out, bl_config, bl_speaker, bl_utt;
  auto* baseline = app.add_subcommand("baseline", "Acoustic baseline features from a WAV file");
  baseline->add_option("--type", bl_type, "fbank | mel | mfcc")
      ->required()
      ->check(CLI::IsMember({"fbank", "mel", "mfcc"}));
  baseline->add_option("--audio", bl_audio, "16 kHz mono WAV")->required();
  baseline->add_option("--out", bl_out, "Output AKF path")->required();
  baseline->add_option("--config", bl_config, "Mel front-end JSON");
  baseline->add_option("--speaker", bl_speaker, "Speaker id stored in the AKF metadata");
  baseline->add_option("--utterance", bl_utt, "Utterance id (default: audio file stem)");

  // probe
  std::string pr_manifest, pr_source, pr_out;
  CommonProbeOptions pr_opts;
  auto* probe = app.add_subcommand("probe", "Fit cross-validated inversion probes for one source");
  probe->add_option("--manifest", pr_manifest, "Manifest JSON")->required();
  probe->add_option("--source", pr_source, "Feature source name")->required();
  probe->add_option("--out", pr_out, "Output directory")->required();
  add_probe_options(probe, pr_opts);

  // layer-sweep
  std::string ls_manifest, ls_out;
  std::vector<std::string> ls_sources;
  CommonProbeOptions ls_opts;
  auto* sweep = app.add_subcommand("layer-sweep", "Probe several sources and pick the best per speaker");
  sweep->add_option("--manifest", ls_manifest, "Manifest JSON")->required();
  sweep->add_option("--sources", ls_sources, "Sources in layer order (comma separated)")
      ->required()
      ->delimiter(',');
  sweep->add_option("--out", ls_out, "Output CSV")->required();
  add_probe_options(sweep, ls_opts);

  // transfer
  std::string tr_probes, tr_manifest, tr_out, tr_source, tr_mode = "to_predictions";
  double tr_alpha = 0.01, tr_min_corr = 0.8, tr_lowpass = kDefaultLowpassHz;
  std::uint64_t tr_seed = 17;
  auto* transfer = app.add_subcommand("transfer", "Cross-speaker affine transferability");
  transfer->add_option("--probes", tr_probes, "Directory of probe .map.json files")->required();
  transfer->add_option("--manifest", tr_manifest, "Manifest JSON")->required();
  transfer->add_option("--out", tr_out, "Output directory")->required();
  transfer->add_option("--alpha", tr_alpha, "Lasso penalty")->capture_default_str();
  transfer->add_option("--min-corr", tr_min_corr, "Probe filter threshold")->capture_default_str();
  transfer->add_option("--source", tr_source, "Only use probes of this source");
  transfer->add_option("--mode", tr_mode, "to_predictions | to_ground_truth")->capture_default_str();
  transfer->add_option("--seed", tr_seed, "Train/test split seed")->capture_default_str();
  transfer->add_option("--lowpass", tr_lowpass, "EMA low-pass cutoff in Hz")->capture_default_str();

  // compare
  std::string cmp_mode, cmp_out, cmp_test = "paired_t";
  std::vector<std::string> cmp_inputs;
  std::optional<std::string> cmp_corpus;
  auto* compare = app.add_subcommand("compare", "Significance tests on probe or transfer results");
  compare->add_option("--mode", cmp_mode, "preference | dialect | gender")
      ->required()
      ->check(CLI::IsMember({"preference", "dialect", "gender"}));
  compare->add_option("--inputs", cmp_inputs, "preference: A.csv B.csv; dialect/gender: matrix.csv speakers.csv")
      ->required();
  compare->add_option("--out", cmp_out, "Output JSON")->required();
  compare->add_option("--test", cmp_test, "paired_t | wilcoxon (preference mode)")->capture_default_str();
  compare->add_option("--corpus", cmp_corpus,
                      "Restrict the cohort to one corpus ('any' for none); default EMA-MAE for "
                      "dialect, HPRC for gender");

  // run
  std::string run_config, run_manifest, run_out, run_transfer_source;
  std::vector<std::string> run_sources;
  std::optional<std::uint64_t> run_seed;
  std::optional<unsigned> run_threads;
  std::optional<double> run_min_corr, run_alpha, run_lowpass;
  std::optional<int> run_folds;
  auto* run_cmd = app.add_subcommand("run", "Full pipeline from a JSON run config");
  run_cmd->add_option("--config", run_config, "Run config JSON")->required();
  run_cmd->add_option("--manifest", run_manifest, "Override manifest_path");
  run_cmd->add_option("--out", run_out, "Override output_dir");
  run_cmd->add_option("--sources", run_sources, "Override feature_sources")->delimiter(',');
  run_cmd->add_option("--transfer-source", run_transfer_source, "Override transfer_source");
  run_cmd->add_option("--seed", run_seed, "Override seed");
  run_cmd->add_option("--threads", run_threads, "Override threads");
  run_cmd->add_option("--min-corr", run_min_corr, "Override min_corr");
  run_cmd->add_option("--alpha", run_alpha, "Override lasso_alpha");
  run_cmd->add_option("--lowpass", run_lowpass, "Override lowpass_hz");
  run_cmd->add_option("--folds", run_folds, "Override n_folds");

  // report
  std::string rep_dir;
  auto* report = app.add_subcommand("report", "Re-render SVG charts of a finished run");
  report->add_option("--dir", rep_dir, "Run output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*synth) return cmd_synth(synth_spec, synth_out, synth_seed, out);
    if (*baseline) return cmd_baseline(bl_type, bl_audio, bl_out, bl_config, bl_speaker, bl_utt, out);
    if (*probe) return cmd_probe(pr_manifest, pr_source, pr_opts, pr_out, out, err);
    if (*sweep) return cmd_layer_sweep(ls_manifest, ls_sources, ls_opts, ls_out, out);
    if (*transfer) {
      return cmd_transfer(tr_probes, tr_manifest, tr_alpha, tr_min_corr, tr_source, tr_mode, tr_seed,
                          tr_lowpass, tr_out, out, err);
    }
    if (*compare) return cmd_compare(cmp_mode, cmp_inputs, cmp_test, cmp_corpus, cmp_out, out);
    if (*run_cmd) {
      RunConfig cfg = load_run_config(run_config);
      if (!run_manifest.empty()) cfg.manifest_path = run_manifest;
      if (!run_out.empty()) cfg.output_dir = run_out;
      if (!run_sources.empty()) cfg.feature_sources = run_sources;
      if (!run_transfer_source.empty()) cfg.transfer_source = run_transfer_source;
      if (run_seed) cfg.seed = *run_seed;
      if (run_threads) cfg.threads = *run_threads;
      if (run_min_corr) cfg.min_corr = *run_min_corr;
      if (run_alpha) cfg.lasso_alpha = *run_alpha;
      if (run_lowpass) cfg.lowpass_hz = *run_lowpass;
      if (run_folds) cfg.n_folds = *run_folds;
      const RunSummary summary = run_full_pipeline(cfg);
      for (const auto& w : summary.warnings) err << "warning: " << w << "\n";
      out << summary.retained.size() << "/" << summary.speakers.size()
          << " speakers retained; transfer source " << summary.transfer_source << "; "
          << summary.files.size() << " files under " << cfg.output_dir.string() << "\n";
      return 0;
    }
    if (*report) {
      const auto files = emit_charts(read_report_bundle(rep_dir), rep_dir);
      for (const auto& f : files) out << f.string() << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    err << app.get_name() << ": Io: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << app.get_name() << ": " << e.what() << "\n";
    return 3;
  }
  return 2;
}

}  // namespace artikit::cli
