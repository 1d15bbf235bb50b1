#include "capls/slpp.hpp"

#include <algorithm>
#include <vector>

namespace capls::slpp {

SimilarityGraph build_similarity(const LabeledDataset& data) {
  data.validate();
  const Index n = data.rows();
  if (n < 1) raise(ErrorCode::DegenerateData, "empty dataset");

  SimilarityGraph g;
  g.w.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      g.w(i, j) = data.labels[static_cast<std::size_t>(i)] ==
                          data.labels[static_cast<std::size_t>(j)]
                      ? 1.0
                      : 0.0;
    }
  }
  g.degree = g.w.rowwise().sum();
  g.laplacian = -g.w;
  g.laplacian.diagonal() += g.degree;
  return g;
}

std::pair<Matrix, Matrix> scatter_matrices(const LabeledDataset& data,
                                           double ridge) {
  data.validate();
  const Index n = data.rows();
  const Index d = data.features.cols();
  const int n_classes = data.num_classes();

  // With instances as columns of X: X D X^T = sum_i deg_i x_i x_i^T where
  // deg_i is the size of instance i's class, and X W X^T = sum_c s_c s_c^T
  // with s_c the per-class feature sum. Same matrices as going through the
  // explicit n x n graph, without materializing it.
  std::vector<double> counts(static_cast<std::size_t>(n_classes), 0.0);
  Matrix class_sums = Matrix::Zero(n_classes, d);
  for (Index i = 0; i < n; ++i) {
    const int c = data.labels[static_cast<std::size_t>(i)];
    counts[static_cast<std::size_t>(c)] += 1.0;
    class_sums.row(c) += data.features.data.row(i);
  }
  Vector degree(n);
  for (Index i = 0; i < n; ++i) {
    degree(i) = counts[static_cast<std::size_t>(
        data.labels[static_cast<std::size_t>(i)])];
  }

  Matrix a =
      data.features.data.transpose() * degree.asDiagonal() * data.features.data;
  Matrix b = a - class_sums.transpose() * class_sums;
  b.diagonal().array() += ridge;
  return {std::move(a), std::move(b)};
}

ProjectionMatrix learn_projection(const LabeledDataset& data, Index d_sub,
                                  double ridge,
                                  const linalg::SolveOptions& opts) {
  data.validate();
  if (data.rows() < 2) {
    raise(ErrorCode::DegenerateData,
          "projection learning needs at least 2 instances");
  }
  if (d_sub < 1) raise(ErrorCode::ConfigError, "d_sub must be positive");
  if (ridge <= 0.0) raise(ErrorCode::ConfigError, "ridge must be positive");
  const Index d = data.features.cols();
  if (d_sub > d) {
    raise(ErrorCode::KTooLarge, "d_sub = " + std::to_string(d_sub) +
                                    " exceeds feature dimension " +
                                    std::to_string(d));
  }

  auto [a, b] = scatter_matrices(data, ridge);
  auto pairs = linalg::solve_generalized_sym(
      linalg::SymMatrix(std::move(a)), linalg::SymMatrix(std::move(b)), d_sub,
      opts);
  return ProjectionMatrix{std::move(pairs.vectors)};
}

Index clamp_subspace_dim(Index requested, Index d_in, Index n) {
  Index k = std::min(requested, std::min(d_in, n - 1));
  return std::max<Index>(k, 1);
}

}  // namespace capls::slpp
