#include "capls/preprocess.hpp"

#include <cmath>

namespace capls::preprocess {

FeatureMatrix l2_normalize_rows(const FeatureMatrix& x) {
  FeatureMatrix out;
  out.domain = x.domain;
  out.data = x.data;
  for (Index i = 0; i < out.data.rows(); ++i) {
    const double norm = out.data.row(i).norm();
    if (norm < 1e-12) {
      raise(ErrorCode::ZeroVector,
            "row " + std::to_string(i) + " has (near-)zero norm");
    }
    out.data.row(i) /= norm;
  }
  return out;
}

std::pair<FeatureMatrix, ColumnStats> zscore_columns(
    const FeatureMatrix& x, const std::optional<ColumnStats>& stats) {
  const Index n = x.rows();
  const Index d = x.cols();

  ColumnStats use;
  if (stats.has_value()) {
    if (stats->mean.size() != d || stats->stddev.size() != d) {
      raise(ErrorCode::DimensionMismatch,
            "column stats cover " + std::to_string(stats->mean.size()) +
                " columns but data has " + std::to_string(d));
    }
    use = *stats;
  } else {
    use.mean = x.data.colwise().mean();
    use.stddev.resize(d);
    for (Index j = 0; j < d; ++j) {
      // population convention: divide by n
      const double var =
          (x.data.col(j).array() - use.mean(j)).square().sum() /
          static_cast<double>(n);
      const double sd = std::sqrt(var);
      use.stddev(j) = sd < 1e-8 ? 1e-8 : sd;
    }
  }

  FeatureMatrix out;
  out.domain = x.domain;
  out.data = (x.data.rowwise() - use.mean.transpose()).array().rowwise() /
             use.stddev.transpose().array();
  return {std::move(out), std::move(use)};
}

}  // namespace capls::preprocess
