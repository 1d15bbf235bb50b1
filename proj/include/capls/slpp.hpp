#pragma once

#include "capls/linalg.hpp"
#include "capls/types.hpp"

namespace capls::slpp {

/// Label-match similarity graph over a labelled dataset: w[i][j] = 1 iff
/// labels match (self-edges included), degree its row sums, and
/// laplacian = diag(degree) - w.
struct SimilarityGraph {
  Matrix w;
  Vector degree;
  Matrix laplacian;
};

/// Linear map into the learned subspace; column k is the k-th direction.
struct ProjectionMatrix {
  Matrix p;  // d_in x d_sub
  Index d_in() const { return p.rows(); }
  Index d_sub() const { return p.cols(); }
};

SimilarityGraph build_similarity(const LabeledDataset& data);

/// Learns the supervised locality preserving projection: the d_sub top
/// generalized eigenvectors of
///   X D X^T p = lambda (X L X^T + ridge I) p
/// with instances as columns of X. The Gram matrices are accumulated from
/// per-class sums, which is algebraically identical to materializing the
/// similarity graph but O(d^2 (n + C)) instead of O(d n^2).
ProjectionMatrix learn_projection(const LabeledDataset& data, Index d_sub,
                                  double ridge = 1.0,
                                  const linalg::SolveOptions& opts = {});

/// The Gram pair (A, B) of the eigenproblem above; exposed so callers can
/// evaluate trace ratios of candidate projections.
std::pair<Matrix, Matrix> scatter_matrices(const LabeledDataset& data,
                                           double ridge = 1.0);

/// Subspace dimension actually usable for a training set: requested
/// clamped to min(d_in, n - 1), at least 1.
Index clamp_subspace_dim(Index requested, Index d_in, Index n);

}  // namespace capls::slpp
