#pragma once

#include <optional>
#include <utility>

#include "capls/types.hpp"

namespace capls::preprocess {

/// Scales every row to unit Euclidean norm. Throws ZeroVector when a row
/// norm falls below 1e-12 (a corrupt feature file upstream).
FeatureMatrix l2_normalize_rows(const FeatureMatrix& x);

struct ColumnStats {
  Vector mean;
  Vector stddev;  // population convention, floored at 1e-8
};

/// Column-wise standardization. When stats are omitted they are computed
/// from x (population std, zero-variance columns floored at 1e-8) and
/// returned for reuse on held-out data.
std::pair<FeatureMatrix, ColumnStats> zscore_columns(
    const FeatureMatrix& x, const std::optional<ColumnStats>& stats = {});

}  // namespace capls::preprocess
