#include "capls/eval.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

namespace capls::eval {

double per_image_accuracy(const std::vector<int>& predicted,
                          const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty()) {
    raise(ErrorCode::LengthMismatch,
          "predicted has " + std::to_string(predicted.size()) +
              " entries, truth has " + std::to_string(truth.size()));
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] == truth[i]) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

Eigen::MatrixXi confusion_matrix(const std::vector<int>& predicted,
                                 const std::vector<int>& truth,
                                 int n_classes) {
  if (predicted.size() != truth.size()) {
    raise(ErrorCode::LengthMismatch, "predicted/truth sizes disagree");
  }
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] < 0 || truth[i] >= n_classes || predicted[i] < 0 ||
        predicted[i] >= n_classes) {
      raise(ErrorCode::LabelOutOfRange,
            "label outside [0, " + std::to_string(n_classes) + ") at row " +
                std::to_string(i));
    }
    m(truth[i], predicted[i]) += 1;
  }
  return m;
}

std::vector<int> run_baseline_1nn(const LabeledDataset& source,
                                  const LabeledDataset* target_labeled,
                                  const FeatureMatrix& test) {
  LabeledDataset train = source;
  if (target_labeled != nullptr && target_labeled->rows() > 0) {
    train = concat(source, *target_labeled);
  }
  if (train.rows() == 0) {
    raise(ErrorCode::EmptyTrainingSet, "no training instances for 1NN");
  }
  if (train.features.cols() != test.cols()) {
    raise(ErrorCode::DimensionMismatch,
          "train and test feature dimensions differ");
  }

  std::vector<int> out(static_cast<std::size_t>(test.rows()));
  for (Index i = 0; i < test.rows(); ++i) {
    Index best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (Index r = 0; r < train.rows(); ++r) {
      const double d =
          (train.features.data.row(r) - test.data.row(i)).squaredNorm();
      if (d < best_d) {  // strict: ties keep the lower row index
        best_d = d;
        best = r;
      }
    }
    out[static_cast<std::size_t>(i)] =
        train.labels[static_cast<std::size_t>(best)];
  }
  return out;
}

slpp::ProjectionMatrix learn_lda_projection(const LabeledDataset& data,
                                            Index d_sub, double ridge,
                                            const linalg::SolveOptions& opts) {
  data.validate();
  const Index n = data.rows();
  if (n < 2) raise(ErrorCode::DegenerateData, "LDA needs at least 2 instances");
  if (d_sub < 1) raise(ErrorCode::ConfigError, "d_sub must be positive");
  if (ridge <= 0.0) raise(ErrorCode::ConfigError, "ridge must be positive");
  const Index d = data.features.cols();
  if (d_sub > d) {
    raise(ErrorCode::KTooLarge, "d_sub = " + std::to_string(d_sub) +
                                    " exceeds feature dimension " +
                                    std::to_string(d));
  }
  const int c_total = data.num_classes();

  std::vector<Index> counts(static_cast<std::size_t>(c_total), 0);
  Matrix class_means = Matrix::Zero(c_total, d);
  for (Index i = 0; i < n; ++i) {
    const int c = data.labels[static_cast<std::size_t>(i)];
    class_means.row(c) += data.features.data.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  int populated = 0;
  for (int c = 0; c < c_total; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      class_means.row(c) /=
          static_cast<double>(counts[static_cast<std::size_t>(c)]);
      ++populated;
    }
  }
  if (populated < 2) {
    raise(ErrorCode::DegenerateData,
          "LDA needs at least 2 classes; between-class scatter is zero");
  }
  const Vector global_mean = data.features.data.colwise().mean();

  Matrix within = Matrix::Zero(d, d);
  {
    Matrix centered = data.features.data;
    for (Index i = 0; i < n; ++i) {
      centered.row(i) -= class_means.row(data.labels[static_cast<std::size_t>(i)]);
    }
    within = centered.transpose() * centered;
  }
  Matrix between = Matrix::Zero(d, d);
  for (int c = 0; c < c_total; ++c) {
    if (counts[static_cast<std::size_t>(c)] == 0) continue;
    const Vector diff = class_means.row(c).transpose() - global_mean;
    between += static_cast<double>(counts[static_cast<std::size_t>(c)]) *
               (diff * diff.transpose());
  }
  within.diagonal().array() += ridge;

  auto pairs = linalg::solve_generalized_sym(linalg::SymMatrix(std::move(between)),
                                             linalg::SymMatrix(std::move(within)),
                                             d_sub, opts);
  return slpp::ProjectionMatrix{std::move(pairs.vectors)};
}

uda::UdaResult run_baseline_lda_subspace(const LabeledDataset& source,
                                         const FeatureMatrix& target,
                                         const PipelineOptions& opts,
                                         const std::vector<int>* target_truth) {
  PipelineOptions lda_opts = opts;
  lda_opts.projection = ProjectionKind::Lda;
  return uda::run_uda(source, target, lda_opts, target_truth);
}

std::uint64_t preprocess_hash(const std::vector<const Matrix*>& matrices) {
  const std::uint64_t prime = 1099511628211ull;
  std::uint64_t h = 14695981039346656037ull;
  auto fold = [&](const void* p, std::size_t len) {
    const unsigned char* bytes = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < len; ++i) {
      h ^= bytes[i];
      h *= prime;
    }
  };
  for (const Matrix* m : matrices) {
    if (m == nullptr) continue;
    const std::uint64_t rows = static_cast<std::uint64_t>(m->rows());
    const std::uint64_t cols = static_cast<std::uint64_t>(m->cols());
    fold(&rows, 8);
    fold(&cols, 8);
    for (Index i = 0; i < m->rows(); ++i) {
      for (Index j = 0; j < m->cols(); ++j) {
        const double v = (*m)(i, j);
        fold(&v, 8);
      }
    }
  }
  return h;
}

std::string hash_hex(std::uint64_t h) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return s;
}

}  // namespace capls::eval
