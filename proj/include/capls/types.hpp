#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "capls/errors.hpp"

namespace capls {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class Domain { Source, Target };

/// Row-wise instance features: row i holds the feature vector of instance i.
struct FeatureMatrix {
  Matrix data;
  Domain domain = Domain::Source;

  Index rows() const { return data.rows(); }
  Index cols() const { return data.cols(); }
};

/// Features plus one integer class id per row.
struct LabeledDataset {
  FeatureMatrix features;
  std::vector<int> labels;

  Index rows() const { return features.rows(); }

  /// Number of classes implied by the labels (max id + 1); 0 when empty.
  int num_classes() const;

  /// Checks label count against rows and label range [0, n_classes).
  /// When n_classes is not given, only non-negativity is enforced.
  void validate(std::optional<int> n_classes = {}) const;
};

/// Throws NonFiniteValue naming the first offending coordinate.
void require_finite(const Matrix& m, const std::string& what);

/// Row-concatenation of two datasets; both must share feature dimension.
LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b);

}  // namespace capls
