#include "capls/types.hpp"

#include <algorithm>
#include <cmath>

namespace capls {

int LabeledDataset::num_classes() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

void LabeledDataset::validate(std::optional<int> n_classes) const {
  if (static_cast<Index>(labels.size()) != features.rows()) {
    raise(ErrorCode::LengthMismatch,
          "label count " + std::to_string(labels.size()) +
              " does not match feature rows " +
              std::to_string(features.rows()));
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool bad = labels[i] < 0 ||
                     (n_classes.has_value() && labels[i] >= *n_classes);
    if (bad) {
      raise(ErrorCode::LabelOutOfRange,
            "label " + std::to_string(labels[i]) + " at row " +
                std::to_string(i) + " is out of range");
    }
  }
}

void require_finite(const Matrix& m, const std::string& what) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (!std::isfinite(m(i, j))) {
        raise(ErrorCode::NonFiniteValue,
              what + " has a non-finite value at row " + std::to_string(i) +
                  ", column " + std::to_string(j));
      }
    }
  }
}

LabeledDataset concat(const LabeledDataset& a, const LabeledDataset& b) {
  if (a.rows() == 0) return b;
  if (b.rows() == 0) return a;
  if (a.features.cols() != b.features.cols()) {
    raise(ErrorCode::DimensionMismatch,
          "cannot concatenate feature dimensions " +
              std::to_string(a.features.cols()) + " and " +
              std::to_string(b.features.cols()));
  }
  LabeledDataset out;
  out.features.domain = a.features.domain;
  out.features.data.resize(a.rows() + b.rows(), a.features.cols());
  out.features.data.topRows(a.rows()) = a.features.data;
  out.features.data.bottomRows(b.rows()) = b.features.data;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  return out;
}

}  // namespace capls
