// Command-line front end: reproducible adaptation experiments over feature
// files, plus a seeded synthetic dataset generator.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "capls/data.hpp"
#include "capls/errors.hpp"
#include "capls/eval.hpp"
#include "capls/preprocess.hpp"
#include "capls/report.hpp"
#include "capls/uda.hpp"
#include "capls/zsl.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct CommonFlags {
  std::string source_features;
  std::string source_labels;
  std::string target_features;
  std::string target_labels;
  long dim = 128;
  long iters = 20;
  std::uint64_t seed = 0;
  std::string out = "report.json";
  std::string projection = "slpp";
  bool zscore = false;
  double temperature = 1.0;
  double ridge = 1.0;
  std::string pred_out;
};

struct ZslFlags {
  long known_classes = 35;
  std::vector<std::uint64_t> split_seeds;
  std::vector<std::string> split_files;
  std::string target_train_features;
  std::string target_train_labels;
  std::string target_test_features;
  std::string target_test_labels;
};

struct SynthFlags {
  long classes = 10;
  long source_per_class = 20;
  long target_per_class = 20;
  long dim = 32;
  double class_sep = 4.0;
  double rotation = 0.0;
  double translation = 0.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  std::string format = "csv";
};

capls::PipelineOptions pipeline_options(const CommonFlags& flags) {
  capls::PipelineOptions opts;
  opts.d_sub = flags.dim;
  opts.t_max = static_cast<int>(flags.iters);
  opts.projection = flags.projection == "lda" ? capls::ProjectionKind::Lda
                                              : capls::ProjectionKind::Slpp;
  opts.temperature = flags.temperature;
  opts.ridge = flags.ridge;
  return opts;
}

json common_config(const CommonFlags& flags, const char* command) {
  json cfg;
  cfg["command"] = command;
  cfg["source_features"] = flags.source_features;
  cfg["source_labels"] = flags.source_labels;
  cfg["dim"] = flags.dim;
  cfg["iters"] = flags.iters;
  cfg["seed"] = flags.seed;
  cfg["projection"] = flags.projection;
  cfg["zscore"] = flags.zscore;
  if (flags.zscore) cfg["zscore_fit"] = "joint training pool";
  cfg["temperature"] = flags.temperature;
  cfg["ridge"] = flags.ridge;
  cfg["out"] = flags.out;
  return cfg;
}

json trace_to_json(const std::vector<capls::uda::IterationStats>& trace) {
  json arr = json::array();
  for (const auto& it : trace) {
    json entry;
    entry["t"] = it.t;
    entry["n_selected"] = it.n_selected;
    entry["empty_classes"] = it.empty_classes;
    if (it.accuracy.has_value()) entry["accuracy"] = *it.accuracy;
    arr.push_back(std::move(entry));
  }
  return arr;
}

void write_predictions(const std::string& path, const std::vector<int>& labels) {
  if (!path.empty()) capls::data::save_labels(labels, path);
}

// Z-score stats are fit on the training pool only, then reused everywhere;
// row normalization follows so the data still lands on the unit sphere.
void apply_zscore(const std::vector<capls::FeatureMatrix*>& train_pool,
                  const std::vector<capls::FeatureMatrix*>& all) {
  capls::Index rows = 0;
  for (auto* fm : train_pool) rows += fm->rows();
  capls::Matrix stacked(rows, train_pool.front()->cols());
  capls::Index at = 0;
  for (auto* fm : train_pool) {
    stacked.middleRows(at, fm->rows()) = fm->data;
    at += fm->rows();
  }
  capls::FeatureMatrix pool{std::move(stacked), capls::Domain::Source};
  const auto stats = capls::preprocess::zscore_columns(pool).second;
  for (auto* fm : all) {
    *fm = capls::preprocess::zscore_columns(*fm, stats).first;
  }
}

int cmd_uda(const CommonFlags& flags) {
  capls::LabeledDataset source =
      capls::data::load_features(flags.source_features, flags.source_labels);
  capls::FeatureMatrix target =
      capls::data::load_feature_matrix(flags.target_features);
  std::optional<std::vector<int>> truth;
  if (!flags.target_labels.empty()) {
    truth = capls::data::load_labels(flags.target_labels);
  }

  if (flags.zscore) {
    apply_zscore({&source.features, &target}, {&source.features, &target});
  }
  source.features = capls::preprocess::l2_normalize_rows(source.features);
  target = capls::preprocess::l2_normalize_rows(target);

  const auto opts = pipeline_options(flags);
  const auto result = capls::uda::run_uda(
      source, target, opts, truth.has_value() ? &*truth : nullptr);
  write_predictions(flags.pred_out, result.labels);

  capls::data::ExperimentReport report;
  report.config = common_config(flags, "uda");
  report.config["target_features"] = flags.target_features;
  report.config["target_labels"] = flags.target_labels;
  report.config["dim_effective"] = result.model.projection.d_sub();
  report.config["preprocess_hash"] = capls::eval::hash_hex(
      capls::eval::preprocess_hash({&source.features.data, &target.data}));
  report.trace = trace_to_json(result.trace);
  report.metrics["n_source"] = source.rows();
  report.metrics["n_target"] = target.rows();
  report.metrics["n_selected_final"] = result.trace.back().n_selected;
  if (truth.has_value()) {
    report.metrics["baseline_accuracy"] = *result.trace.front().accuracy;
    report.metrics["final_accuracy"] = *result.trace.back().accuracy;
  }
  capls::data::save_report(report, flags.out);

  if (truth.has_value()) {
    std::printf("final accuracy: %.4f\n", *result.trace.back().accuracy);
  }
  std::printf("report written to %s\n", flags.out.c_str());
  return 0;
}

struct ZslRun {
  capls::zsl::ZslSplit split;
  std::string origin;  // "seed:N" or the split file path
};

json metrics_triple(const capls::zsl::GzslMetrics& m) {
  return json{{"acc_known", m.acc_known},
              {"acc_unseen", m.acc_unseen},
              {"harmonic", m.harmonic}};
}

json aggregate_stats(const std::vector<double>& values) {
  const double n = static_cast<double>(values.size());
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= n;
  double sem = 0.0;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    sem = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return json{{"mean", mean}, {"sem", sem}};
}

int cmd_zsl(const CommonFlags& flags, const ZslFlags& zf) {
  capls::LabeledDataset source =
      capls::data::load_features(flags.source_features, flags.source_labels);
  const auto opts = pipeline_options(flags);

  capls::data::ExperimentReport report;
  report.config = common_config(flags, "zsl");
  report.config["known_classes"] = zf.known_classes;

  const bool explicit_paths = !zf.target_train_features.empty();
  const bool full_target = !flags.target_features.empty();
  if (explicit_paths == full_target) {
    capls::raise(capls::ErrorCode::ConfigError,
                 "give either --target-features/--target-labels or the "
                 "explicit --target-train-*/--target-test-* paths");
  }
  if (full_target && flags.target_labels.empty()) {
    capls::raise(capls::ErrorCode::ConfigError,
                 "--target-features needs --target-labels for splitting");
  }
  if (explicit_paths &&
      (zf.target_train_labels.empty() || zf.target_test_features.empty())) {
    capls::raise(capls::ErrorCode::ConfigError,
                 "explicit mode needs --target-train-labels and "
                 "--target-test-features");
  }

  json per_split = json::array();
  json trace = json::array();
  std::vector<double> knowns, unseens, harmonics;

  auto run_one = [&](capls::LabeledDataset target_train,
                     capls::FeatureMatrix target_test,
                     const std::vector<int>* test_truth,
                     const capls::zsl::ZslSplit& split,
                     const std::string& origin) {
    capls::LabeledDataset src = source;
    if (flags.zscore) {
      std::vector<capls::FeatureMatrix*> train_pool{&src.features};
      if (target_train.rows() > 0) train_pool.push_back(&target_train.features);
      std::vector<capls::FeatureMatrix*> all = train_pool;
      all.push_back(&target_test);
      apply_zscore(train_pool, all);
    }
    src.features = capls::preprocess::l2_normalize_rows(src.features);
    if (target_train.rows() > 0) {
      target_train.features =
          capls::preprocess::l2_normalize_rows(target_train.features);
    }
    target_test = capls::preprocess::l2_normalize_rows(target_test);

    const auto result =
        capls::zsl::run_zsl(src, target_train, target_test, opts);
    if (!flags.pred_out.empty()) {
      write_predictions(flags.pred_out + "." + std::to_string(trace.size()),
                        result.labels);
    }

    json entry;
    entry["origin"] = origin;
    entry["seed"] = split.seed;
    entry["n_known"] = split.known_classes.size();
    entry["n_unseen"] = split.unseen_classes.size();
    entry["n_target_train"] = target_train.rows();
    entry["n_target_test"] = target_test.rows();
    entry["preprocess_hash"] =
        capls::eval::hash_hex(capls::eval::preprocess_hash(
            {&src.features.data, &target_train.features.data,
             &target_test.data}));
    trace.push_back(std::move(entry));

    if (test_truth != nullptr) {
      const auto m =
          capls::zsl::gzsl_metrics(result.labels, *test_truth, split);
      per_split.push_back(metrics_triple(m));
      knowns.push_back(m.acc_known);
      unseens.push_back(m.acc_unseen);
      harmonics.push_back(m.harmonic);
    }
  };

  if (explicit_paths) {
    capls::LabeledDataset target_train = capls::data::load_features(
        zf.target_train_features, zf.target_train_labels);
    capls::FeatureMatrix target_test =
        capls::data::load_feature_matrix(zf.target_test_features);
    std::optional<std::vector<int>> truth;
    if (!zf.target_test_labels.empty()) {
      truth = capls::data::load_labels(zf.target_test_labels);
    }
    // Pseudo-split: known classes are those present in the training rows.
    capls::zsl::ZslSplit split;
    std::vector<bool> seen(static_cast<std::size_t>(source.num_classes()),
                           false);
    for (int l : target_train.labels) seen[static_cast<std::size_t>(l)] = true;
    for (int c = 0; c < source.num_classes(); ++c) {
      (seen[static_cast<std::size_t>(c)] ? split.known_classes
                                         : split.unseen_classes)
          .push_back(c);
    }
    for (capls::Index i = 0; i < target_test.rows(); ++i) {
      split.target_test_rows.push_back(i);
    }
    report.config["target_train_features"] = zf.target_train_features;
    report.config["target_train_labels"] = zf.target_train_labels;
    report.config["target_test_features"] = zf.target_test_features;
    report.config["target_test_labels"] = zf.target_test_labels;
    run_one(std::move(target_train), std::move(target_test),
            truth.has_value() ? &*truth : nullptr, split, "explicit");
  } else {
    const capls::LabeledDataset target = capls::data::load_features(
        flags.target_features, flags.target_labels);
    report.config["target_features"] = flags.target_features;
    report.config["target_labels"] = flags.target_labels;

    std::vector<ZslRun> runs;
    if (!zf.split_files.empty()) {
      for (const auto& f : zf.split_files) {
        runs.push_back({capls::data::load_split(f), f});
      }
      report.config["split_files"] = zf.split_files;
    } else {
      std::vector<std::uint64_t> seeds = zf.split_seeds;
      if (seeds.empty()) seeds = {0, 1, 2, 3, 4};
      for (std::uint64_t s : seeds) {
        runs.push_back(
            {capls::zsl::make_split(target.labels,
                                    static_cast<int>(zf.known_classes), s),
             "seed:" + std::to_string(s)});
      }
      report.config["split_seeds"] = seeds;
    }

    for (const auto& run : runs) {
      // external split files may reference rows the target does not have
      for (const auto* rows :
           {&run.split.target_train_rows, &run.split.target_test_rows}) {
        for (capls::Index r : *rows) {
          if (r < 0 || r >= target.rows()) {
            capls::raise(capls::ErrorCode::ParseError,
                         run.origin + ": split row " + std::to_string(r) +
                             " outside the target's " +
                             std::to_string(target.rows()) + " rows");
          }
        }
      }
      capls::LabeledDataset target_train;
      target_train.features.domain = capls::Domain::Target;
      target_train.features.data.resize(
          static_cast<capls::Index>(run.split.target_train_rows.size()),
          target.features.cols());
      for (std::size_t i = 0; i < run.split.target_train_rows.size(); ++i) {
        target_train.features.data.row(static_cast<capls::Index>(i)) =
            target.features.data.row(run.split.target_train_rows[i]);
        target_train.labels.push_back(target.labels[static_cast<std::size_t>(
            run.split.target_train_rows[i])]);
      }
      capls::FeatureMatrix target_test;
      target_test.domain = capls::Domain::Target;
      target_test.data.resize(
          static_cast<capls::Index>(run.split.target_test_rows.size()),
          target.features.cols());
      std::vector<int> truth;
      for (std::size_t i = 0; i < run.split.target_test_rows.size(); ++i) {
        target_test.data.row(static_cast<capls::Index>(i)) =
            target.features.data.row(run.split.target_test_rows[i]);
        truth.push_back(target.labels[static_cast<std::size_t>(
            run.split.target_test_rows[i])]);
      }
      run_one(std::move(target_train), std::move(target_test), &truth,
              run.split, run.origin);
    }
  }

  report.trace = std::move(trace);
  report.metrics["per_split"] = per_split;
  if (!harmonics.empty()) {
    report.metrics["aggregate"] =
        json{{"acc_known", aggregate_stats(knowns)},
             {"acc_unseen", aggregate_stats(unseens)},
             {"harmonic", aggregate_stats(harmonics)}};
    std::printf("harmonic mean: %.4f\n",
                report.metrics["aggregate"]["harmonic"]["mean"].get<double>());
  }
  capls::data::save_report(report, flags.out);
  std::printf("report written to %s\n", flags.out.c_str());
  return 0;
}

int cmd_synth(const SynthFlags& sf) {
  capls::data::SynthConfig cfg;
  cfg.n_classes = static_cast<int>(sf.classes);
  cfg.n_per_class_source = static_cast<int>(sf.source_per_class);
  cfg.n_per_class_target = static_cast<int>(sf.target_per_class);
  cfg.dim = static_cast<int>(sf.dim);
  cfg.class_sep = sf.class_sep;
  cfg.shift = {sf.rotation, sf.translation, sf.noise};
  cfg.seed = sf.seed;

  const auto bundle = capls::data::generate_synthetic(cfg);
  const fs::path dir(sf.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);

  for (const auto& [name, ds] : bundle.domains) {
    if (sf.format == "csv" || sf.format == "both") {
      capls::data::save_features_csv(ds.features.data,
                                     dir / (name + "_features.csv"));
    }
    if (sf.format == "binary" || sf.format == "both") {
      capls::data::save_features_binary(ds.features.data,
                                        dir / (name + "_features.bin"));
    }
    capls::data::save_labels(ds.labels, dir / (name + "_labels.txt"));
  }
  std::printf("synthetic dataset written to %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"joint-subspace domain adaptation with confidence-aware "
               "pseudo-label selection"};
  app.require_subcommand(1);

  CommonFlags flags;
  ZslFlags zf;
  SynthFlags sf;

  auto add_common = [&](CLI::App* cmd, bool target_required) {
    cmd->add_option("--source-features", flags.source_features,
                    "source feature file (csv or binary)")
        ->required();
    cmd->add_option("--source-labels", flags.source_labels,
                    "source label file")
        ->required();
    auto* tf = cmd->add_option("--target-features", flags.target_features,
                               "target feature file");
    if (target_required) tf->required();
    cmd->add_option("--target-labels", flags.target_labels,
                    "target label file (evaluation only for uda)");
    cmd->add_option("--dim", flags.dim, "subspace dimensionality")
        ->default_val(128);
    cmd->add_option("--seed", flags.seed, "seed echoed into the report")
        ->default_val(0);
    cmd->add_option("--out", flags.out, "report path")
        ->default_val("report.json");
    cmd->add_option("--projection", flags.projection, "projection learner")
        ->check(CLI::IsMember({"slpp", "lda"}))
        ->default_val("slpp");
    cmd->add_flag("--zscore", flags.zscore,
                  "column-standardize features before row normalization");
    cmd->add_option("--temperature", flags.temperature,
                    "softmax distance temperature")
        ->default_val(1.0);
    cmd->add_option("--ridge", flags.ridge, "identity regularizer weight")
        ->default_val(1.0);
    cmd->add_option("--pred-out", flags.pred_out,
                    "optional path for predicted labels");
  };

  CLI::App* uda_cmd = app.add_subcommand(
      "uda", "iterative unsupervised adaptation with pseudo-label selection");
  add_common(uda_cmd, true);
  uda_cmd->add_option("--iters", flags.iters, "self-training iterations")
      ->default_val(20);

  CLI::App* zsl_cmd = app.add_subcommand(
      "zsl", "zero-shot condition: known/unseen class generalization");
  add_common(zsl_cmd, false);
  zsl_cmd->add_option("--known-classes", zf.known_classes,
                      "number of known classes for automatic splits")
      ->default_val(35);
  zsl_cmd->add_option("--split-seeds", zf.split_seeds,
                      "seeds for automatic known/unseen splits")
      ->delimiter(',');
  zsl_cmd->add_option("--split-file", zf.split_files,
                      "externally supplied split JSON (repeatable)");
  zsl_cmd->add_option("--target-train-features", zf.target_train_features,
                      "explicit labelled-target feature file");
  zsl_cmd->add_option("--target-train-labels", zf.target_train_labels,
                      "explicit labelled-target label file");
  zsl_cmd->add_option("--target-test-features", zf.target_test_features,
                      "explicit test feature file");
  zsl_cmd->add_option("--target-test-labels", zf.target_test_labels,
                      "explicit test label file (evaluation only)");

  CLI::App* synth_cmd =
      app.add_subcommand("synth", "generate a seeded synthetic domain pair");
  synth_cmd->add_option("--classes", sf.classes)->default_val(10);
  synth_cmd->add_option("--source-per-class", sf.source_per_class)
      ->default_val(20);
  synth_cmd->add_option("--target-per-class", sf.target_per_class)
      ->default_val(20);
  synth_cmd->add_option("--dim", sf.dim)->default_val(32);
  synth_cmd->add_option("--class-sep", sf.class_sep)->default_val(4.0);
  synth_cmd->add_option("--rotation", sf.rotation,
                        "target rotation angle, radians")
      ->default_val(0.0);
  synth_cmd->add_option("--translation", sf.translation)->default_val(0.0);
  synth_cmd->add_option("--noise", sf.noise)->default_val(0.0);
  synth_cmd->add_option("--seed", sf.seed)->default_val(0);
  synth_cmd->add_option("--out-dir", sf.out_dir)->default_val(".");
  synth_cmd->add_option("--format", sf.format)
      ->check(CLI::IsMember({"csv", "binary", "both"}))
      ->default_val("csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (uda_cmd->parsed()) return cmd_uda(flags);
    if (zsl_cmd->parsed()) return cmd_zsl(flags, zf);
    return cmd_synth(sf);
  } catch (const capls::Error& e) {
    std::cerr << e.what() << '\n';
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
