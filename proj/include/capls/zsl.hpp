#pragma once

#include <cstdint>
#include <vector>

#include "capls/options.hpp"
#include "capls/subspace.hpp"
#include "capls/types.hpp"

namespace capls::zsl {

/// Known/unseen class partition plus the per-class half split of target
/// rows. Labelled target training rows exist only for known classes; test
/// rows span every class.
struct ZslSplit {
  std::vector<int> known_classes;    // sorted ascending
  std::vector<int> unseen_classes;   // sorted ascending
  std::vector<Index> target_train_rows;  // sorted ascending
  std::vector<Index> target_test_rows;   // sorted ascending
  std::uint64_t seed = 0;
};

struct GzslMetrics {
  double acc_known = 0.0;
  double acc_unseen = 0.0;
  double harmonic = 0.0;
};

/// Draws a seeded random known-class set of size n_known and, per class,
/// reserves floor(n_c / 2) rows for testing; the remaining rows become
/// training rows when their class is known. Deterministic given the seed.
ZslSplit make_split(const std::vector<int>& labels, int n_known,
                    std::uint64_t seed);

struct ZslResult {
  subspace::SubspaceModel model;
  std::vector<int> labels;
  subspace::ConfidenceTable confidences;
};

/// Single-pass zero-shot pipeline: learn the projection from source plus
/// labelled target, fit class means from both (unseen classes fall back to
/// source instances alone), and predict the held-out target rows over the
/// full class set. Test rows are touched only at prediction time.
/// target_labeled may be empty. opts.t_max is ignored.
ZslResult run_zsl(const LabeledDataset& source,
                  const LabeledDataset& target_labeled,
                  const FeatureMatrix& target_test,
                  const PipelineOptions& opts = {});

/// Per-class mean accuracy over known and unseen classes and their
/// harmonic mean (0 when both accuracies are 0).
GzslMetrics gzsl_metrics(const std::vector<int>& predicted,
                         const std::vector<int>& truth, const ZslSplit& split);

double harmonic_mean(double a, double b);

}  // namespace capls::zsl
