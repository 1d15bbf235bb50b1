#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "capls/options.hpp"
#include "capls/subspace.hpp"
#include "capls/types.hpp"

namespace capls::uda {

/// Snapshot of one self-training round. t == 0 is the source-only
/// initialization before any pseudo-label selection.
struct IterationStats {
  int t = 0;
  Index n_selected = 0;
  std::vector<int> empty_classes;  // classes with no predicted member
  std::optional<double> accuracy;  // vs ground truth, evaluation only
};

struct UdaResult {
  subspace::SubspaceModel model;
  std::vector<int> labels;  // final pseudo-labels, one per target row
  subspace::ConfidenceTable confidences;
  std::vector<IterationStats> trace;  // length t_max + 1
};

/// Class-wise confidence selection: for each class c, the instances
/// predicted as c are ranked by q[i][c] descending (ties to the lower row
/// index) and the top ceil(fraction * pool) of them — at least one when
/// the pool is non-empty — are returned as (row, pseudo-label) pairs,
/// ordered by class then rank. fraction must lie in (0, 1].
std::vector<std::pair<Index, int>> select_confident(
    const subspace::ConfidenceTable& q, double fraction);

/// The unsupervised adaptation loop: learn an initial projection from the
/// source alone, pseudo-label every target instance, then for
/// t = 1..t_max re-learn the projection from the source plus the fraction
/// t/t_max most confident pseudo-labelled targets per class and re-predict
/// all targets. Row normalization is applied internally; class means
/// always come from source instances only, while the centering mean pools
/// source and target projections. target_truth, when given, is used only
/// to record per-iteration accuracy in the trace.
UdaResult run_uda(const LabeledDataset& source, const FeatureMatrix& target,
                  const PipelineOptions& opts = {},
                  const std::vector<int>* target_truth = nullptr);

/// Source-only baseline: the t == 0 state of run_uda (no self-training).
UdaResult run_source_only(const LabeledDataset& source,
                          const FeatureMatrix& target,
                          const PipelineOptions& opts = {},
                          const std::vector<int>* target_truth = nullptr);

}  // namespace capls::uda
