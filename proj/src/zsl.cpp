#include "capls/zsl.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "capls/eval.hpp"
#include "capls/preprocess.hpp"
#include "capls/rng.hpp"

namespace capls::zsl {

ZslSplit make_split(const std::vector<int>& labels, int n_known,
                    std::uint64_t seed) {
  if (labels.empty()) raise(ErrorCode::DegenerateData, "no labels supplied");
  std::map<int, std::vector<Index>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] < 0) {
      raise(ErrorCode::LabelOutOfRange,
            "negative label at row " + std::to_string(i));
    }
    by_class[labels[i]].push_back(static_cast<Index>(i));
  }
  const int total = static_cast<int>(by_class.size());
  if (n_known < 1 || n_known >= total) {
    raise(ErrorCode::ConfigError,
          "known-class count must be in [1, " + std::to_string(total) +
              "), got " + std::to_string(n_known));
  }
  for (const auto& [c, rows] : by_class) {
    if (rows.size() < 2) {
      raise(ErrorCode::InsufficientClassSize,
            "class " + std::to_string(c) + " has fewer than 2 instances");
    }
  }

  Rng rng(seed);
  std::vector<int> class_ids;
  class_ids.reserve(by_class.size());
  for (const auto& [c, rows] : by_class) class_ids.push_back(c);
  rng.shuffle(class_ids);

  ZslSplit split;
  split.seed = seed;
  split.known_classes.assign(class_ids.begin(), class_ids.begin() + n_known);
  split.unseen_classes.assign(class_ids.begin() + n_known, class_ids.end());
  std::sort(split.known_classes.begin(), split.known_classes.end());
  std::sort(split.unseen_classes.begin(), split.unseen_classes.end());

  const std::set<int> known(split.known_classes.begin(),
                            split.known_classes.end());
  for (auto& [c, rows] : by_class) {
    rng.shuffle(rows);
    const std::size_t n_test = rows.size() / 2;  // floor(n_c / 2)
    split.target_test_rows.insert(split.target_test_rows.end(), rows.begin(),
                                  rows.begin() + n_test);
    if (known.count(c) != 0) {
      split.target_train_rows.insert(split.target_train_rows.end(),
                                     rows.begin() + n_test, rows.end());
    }
  }
  std::sort(split.target_test_rows.begin(), split.target_test_rows.end());
  std::sort(split.target_train_rows.begin(), split.target_train_rows.end());
  return split;
}

ZslResult run_zsl(const LabeledDataset& source,
                  const LabeledDataset& target_labeled,
                  const FeatureMatrix& target_test,
                  const PipelineOptions& opts) {
  if (opts.d_sub < 1) raise(ErrorCode::ConfigError, "d_sub must be positive");
  source.validate();
  if (source.rows() < 2) {
    raise(ErrorCode::DegenerateData, "source dataset too small");
  }
  const int c_total = source.num_classes();
  target_labeled.validate();
  for (std::size_t i = 0; i < target_labeled.labels.size(); ++i) {
    if (target_labeled.labels[i] >= c_total) {
      raise(ErrorCode::UnknownClassInTargetTrain,
            "labelled target row " + std::to_string(i) + " has class " +
                std::to_string(target_labeled.labels[i]) +
                " outside the source label set");
    }
  }

  LabeledDataset src;
  src.features = preprocess::l2_normalize_rows(source.features);
  src.labels = source.labels;
  LabeledDataset tl;
  if (target_labeled.rows() > 0) {
    tl.features = preprocess::l2_normalize_rows(target_labeled.features);
    tl.features.domain = Domain::Target;
    tl.labels = target_labeled.labels;
  }
  FeatureMatrix test = preprocess::l2_normalize_rows(target_test);
  test.domain = Domain::Target;

  const LabeledDataset combined = concat(src, tl);
  const Index d_eff = slpp::clamp_subspace_dim(
      opts.d_sub, combined.features.cols(), combined.rows());

  const slpp::ProjectionMatrix p =
      opts.projection == ProjectionKind::Lda
          ? eval::learn_lda_projection(combined, d_eff, opts.ridge, opts.solver)
          : slpp::learn_projection(combined, d_eff, opts.ridge, opts.solver);

  ZslResult res;
  // Class means pool source and labelled-target instances; unseen classes
  // are represented by their source instances alone.
  res.model = subspace::fit_model(
      p, combined, {&src.features, &tl.features}, c_total);
  res.confidences = subspace::predict(res.model, test, opts.temperature);
  res.labels = res.confidences.predicted;
  return res;
}

double harmonic_mean(double a, double b) {
  if (a + b == 0.0) return 0.0;
  return 2.0 * a * b / (a + b);
}

GzslMetrics gzsl_metrics(const std::vector<int>& predicted,
                         const std::vector<int>& truth, const ZslSplit& split) {
  if (predicted.size() != truth.size() ||
      predicted.size() != split.target_test_rows.size()) {
    raise(ErrorCode::LengthMismatch,
          "predicted/truth/test-row counts disagree");
  }

  auto per_class_mean = [&](const std::vector<int>& classes) {
    double total = 0.0;
    for (int c : classes) {
      Index hits = 0;
      Index count = 0;
      for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] != c) continue;
        ++count;
        if (predicted[i] == c) ++hits;
      }
      if (count == 0) {
        raise(ErrorCode::EmptyTestClass,
              "class " + std::to_string(c) + " has no test rows");
      }
      total += static_cast<double>(hits) / static_cast<double>(count);
    }
    return classes.empty() ? 0.0 : total / static_cast<double>(classes.size());
  };

  GzslMetrics m;
  m.acc_known = per_class_mean(split.known_classes);
  m.acc_unseen = per_class_mean(split.unseen_classes);
  m.harmonic = harmonic_mean(m.acc_known, m.acc_unseen);
  return m;
}

}  // namespace capls::zsl
