// Independent oracles used by the tests. These deliberately take different
// numerical routes than the library: the generalized eigensolver oracle
// forms B^-1 A densely and runs a shifted power iteration with deflation,
// projections are checked against naive triple loops, and the recognition
// pipeline is re-coded with straight-line loops.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "capls/rng.hpp"
#include "capls/types.hpp"

namespace oracles {

using capls::Index;
using capls::Matrix;
using capls::Rng;
using capls::Vector;

struct EigenPairsOracle {
  Vector values;
  Matrix vectors;  // B-orthonormal columns
};

// All eigenpairs of A p = lambda B p, largest eigenvalue first. M = B^-1 A
// is self-adjoint under the B inner product, so power iteration with
// B-orthogonal deflation applies; a positive shift keeps the magnitude
// ordering aligned with the value ordering. The iteration runs on a
// repeatedly squared copy of the shifted operator (same eigenvectors,
// ratios raised to the 32nd power) and stops on a residual certificate
// against the original pencil, never on increment size.
inline EigenPairsOracle power_method_generalized(const Matrix& a,
                                                 const Matrix& b) {
  const Index n = a.rows();
  const Matrix m = Eigen::FullPivLU<Matrix>(b).solve(a);
  const double shift = m.cwiseAbs().rowwise().sum().maxCoeff() + 1.0;
  const double res_scale = a.norm() + b.norm();

  Matrix s = m + shift * Matrix::Identity(n, n);
  for (int squaring = 0; squaring < 5; ++squaring) {
    s /= s.norm();
    s = (s * s).eval();
  }

  EigenPairsOracle out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  Rng rng(12345);

  for (Index k = 0; k < n; ++k) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = rng.next_gaussian();

    auto deflate = [&](Vector& x) {
      for (Index j = 0; j < k; ++j) {
        const Vector pj = out.vectors.col(j);
        x -= (pj.dot(b * x)) * pj;
      }
    };

    deflate(v);
    v /= std::sqrt(v.dot(b * v));
    double mu = v.dot(a * v) / v.dot(b * v);
    for (long it = 0; it < 100000; ++it) {
      Vector w = s * v;
      deflate(w);
      v = w / std::sqrt(w.dot(b * w));
      mu = v.dot(a * v) / v.dot(b * v);
      // certificate: eigenvalue error is O(residual) for this SPD pencil
      if ((a * v - mu * (b * v)).norm() <= 1e-10 * res_scale) break;
    }
    out.values(k) = mu;
    out.vectors.col(k) = v;
  }
  return out;
}

// Plain triple-loop matrix product.
inline Matrix naive_matmul(const Matrix& a, const Matrix& b) {
  Matrix c = Matrix::Zero(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (Index k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  }
  return c;
}

inline double trace_ratio(const Matrix& p, const Matrix& a, const Matrix& b) {
  return (p.transpose() * a * p).trace() / (p.transpose() * b * p).trace();
}

// Random projection with B-orthonormal columns (Gram-Schmidt in the B
// inner product, run twice for stability).
inline Matrix random_b_orthonormal(Index dim, Index k, const Matrix& b,
                                   Rng& rng) {
  Matrix p(dim, k);
  for (Index j = 0; j < k; ++j) {
    Vector v(dim);
    for (Index i = 0; i < dim; ++i) v(i) = rng.next_gaussian();
    for (int pass = 0; pass < 2; ++pass) {
      for (Index prev = 0; prev < j; ++prev) {
        v -= (p.col(prev).dot(b * v)) * p.col(prev);
      }
    }
    p.col(j) = v / std::sqrt(v.dot(b * v));
  }
  return p;
}

// The recognition pipeline re-coded directly: project rows, center with
// the pool mean, renormalize, average per class, renormalize, then take
// the nearest class mean (ties to the lowest class id).
inline std::vector<int> ncm_pipeline(const Matrix& projection,
                                     const Matrix& train_rows,
                                     const std::vector<int>& train_labels,
                                     const std::vector<Matrix>& mean_pool,
                                     const Matrix& test_rows, int n_classes) {
  const Index d_sub = projection.cols();

  Vector pool_mean = Vector::Zero(d_sub);
  double pooled = 0.0;
  for (const Matrix& m : mean_pool) {
    const Matrix z = naive_matmul(m, projection);
    for (Index i = 0; i < z.rows(); ++i) {
      pool_mean += z.row(i).transpose();
      pooled += 1.0;
    }
  }
  pool_mean /= pooled;

  auto center_rows = [&](const Matrix& rows) {
    Matrix z = naive_matmul(rows, projection);
    for (Index i = 0; i < z.rows(); ++i) {
      z.row(i) -= pool_mean.transpose();
      z.row(i) /= z.row(i).norm();
    }
    return z;
  };

  const Matrix ztrain = center_rows(train_rows);
  Matrix means = Matrix::Zero(n_classes, d_sub);
  std::vector<int> counts(static_cast<std::size_t>(n_classes), 0);
  for (Index i = 0; i < ztrain.rows(); ++i) {
    means.row(train_labels[static_cast<std::size_t>(i)]) += ztrain.row(i);
    counts[static_cast<std::size_t>(train_labels[static_cast<std::size_t>(i)])]++;
  }
  for (int c = 0; c < n_classes; ++c) {
    means.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
    means.row(c) /= means.row(c).norm();
  }

  const Matrix ztest = center_rows(test_rows);
  std::vector<int> labels;
  for (Index i = 0; i < ztest.rows(); ++i) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int c = 0; c < n_classes; ++c) {
      const double d = (ztest.row(i) - means.row(c)).norm();
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    labels.push_back(best);
  }
  return labels;
}

// Random symmetric matrix with entries in [-1, 1].
inline Matrix random_symmetric(Index n, Rng& rng) {
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j <= i; ++j) {
      const double v = 2.0 * rng.next_unit() - 1.0;
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

// Random SPD matrix G G^T + 0.5 I.
inline Matrix random_spd(Index n, Rng& rng) {
  Matrix g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) g(i, j) = rng.next_gaussian();
  }
  Matrix m = g * g.transpose() / static_cast<double>(n);
  m.diagonal().array() += 0.5;
  return m;
}

}  // namespace oracles
