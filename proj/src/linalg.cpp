#include "capls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace capls::linalg {

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    raise(ErrorCode::DimensionMismatch,
          "symmetric matrix must be square and non-empty, got " +
              std::to_string(m_.rows()) + "x" + std::to_string(m_.cols()));
  }
  for (Index j = 0; j < m_.cols(); ++j) {
    for (Index i = j + 1; i < m_.rows(); ++i) {
      m_(j, i) = m_(i, j);
    }
  }
}

SymMatrix SymMatrix::identity(Index dim) {
  return SymMatrix(Matrix::Identity(dim, dim));
}

Matrix cholesky(const SymMatrix& b) {
  const Index n = b.dim();
  const Matrix& a = b.mat();
  Matrix l = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    double diag = a(j, j);
    for (Index k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      raise(ErrorCode::NotPositiveDefinite,
            "pivot " + std::to_string(j) + " is non-positive");
    }
    l(j, j) = std::sqrt(diag);
    for (Index i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

namespace {

// Flip a column so its largest-magnitude entry is positive; ties take the
// first such entry.
void fix_sign(Eigen::Ref<Matrix> vectors, Index col) {
  Index best = 0;
  double mag = 0.0;
  for (Index i = 0; i < vectors.rows(); ++i) {
    const double m = std::abs(vectors(i, col));
    if (m > mag) {
      mag = m;
      best = i;
    }
  }
  if (vectors(best, col) < 0.0) vectors.col(col) = -vectors.col(col);
}

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = j + 1; i < a.rows(); ++i) s += 2.0 * a(i, j) * a(i, j);
  }
  return std::sqrt(s);
}

// Cyclic Jacobi on a symmetric matrix: full spectrum plus the accumulated
// rotation matrix. Throws NonConvergence when the sweep budget runs out.
void jacobi_eigs(Matrix& a, Matrix& v, const SolveOptions& opts) {
  const Index n = a.rows();
  v = Matrix::Identity(n, n);
  const double scale = a.norm();
  if (scale == 0.0) return;

  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= opts.sweep_tol * scale) return;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e153) {
          t = 1.0 / (2.0 * theta);  // avoids theta^2 overflow
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        const double app = a(p, p);
        const double aqq = a(q, q);
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Index i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const double aip = a(i, p);
          const double aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(p, i) = a(i, p);
          a(i, q) = s * aip + c * aiq;
          a(q, i) = a(i, q);
        }
        for (Index i = 0; i < n; ++i) {
          const double vip = v(i, p);
          const double viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  if (off_diagonal_norm(a) > opts.sweep_tol * scale) {
    raise(ErrorCode::NonConvergence,
          "Jacobi sweeps exhausted after " + std::to_string(opts.max_sweeps));
  }
}

}  // namespace

EigenPairs symmetric_eigs(const SymMatrix& a, Index k,
                          const SolveOptions& opts) {
  const Index n = a.dim();
  if (k < 1) raise(ErrorCode::ConfigError, "k must be positive");
  if (k > n) {
    raise(ErrorCode::KTooLarge, "k = " + std::to_string(k) +
                                    " exceeds dimension " + std::to_string(n));
  }
  Matrix work = a.mat();
  Matrix rot;
  jacobi_eigs(work, rot, opts);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return work(i, i) > work(j, j); });

  EigenPairs out;
  out.values.resize(k);
  out.vectors.resize(n, k);
  for (Index c = 0; c < k; ++c) {
    out.values(c) = work(order[static_cast<std::size_t>(c)],
                         order[static_cast<std::size_t>(c)]);
    out.vectors.col(c) = rot.col(order[static_cast<std::size_t>(c)]);
    fix_sign(out.vectors, c);
  }
  return out;
}

EigenPairs solve_generalized_sym(const SymMatrix& a, const SymMatrix& b,
                                 Index k, const SolveOptions& opts) {
  if (a.dim() != b.dim()) {
    raise(ErrorCode::DimensionMismatch,
          "A is " + std::to_string(a.dim()) + "-dim but B is " +
              std::to_string(b.dim()) + "-dim");
  }
  if (k < 1) raise(ErrorCode::ConfigError, "k must be positive");
  if (k > a.dim()) {
    raise(ErrorCode::KTooLarge, "k = " + std::to_string(k) +
                                    " exceeds dimension " +
                                    std::to_string(a.dim()));
  }

  // Reduce A p = lambda B p to the standard problem C y = lambda y with
  // C = L^-1 A L^-T, then back-substitute p = L^-T y. The p's inherit
  // B-orthonormality from the orthonormal y's.
  const Matrix l = cholesky(b);
  Matrix c = l.triangularView<Eigen::Lower>().solve(a.mat());
  c = l.triangularView<Eigen::Lower>().solve(c.transpose()).transpose();
  c = 0.5 * (c + c.transpose()).eval();

  EigenPairs reduced = symmetric_eigs(SymMatrix(std::move(c)), k, opts);

  EigenPairs out;
  out.values = std::move(reduced.values);
  out.vectors =
      l.transpose().triangularView<Eigen::Upper>().solve(reduced.vectors);
  for (Index col = 0; col < k; ++col) fix_sign(out.vectors, col);

  // Post-solve residual guard from the contract.
  const double na = a.mat().norm();
  const double nb = b.mat().norm();
  for (Index col = 0; col < k; ++col) {
    const Vector p = out.vectors.col(col);
    const double lambda = out.values(col);
    const double residual = (a.mat() * p - lambda * (b.mat() * p)).norm();
    if (residual > 1e-6 * (na + std::abs(lambda) * nb)) {
      raise(ErrorCode::NonConvergence,
            "generalized eigenpair " + std::to_string(col) +
                " violates the residual bound");
    }
  }
  return out;
}

}  // namespace capls::linalg
