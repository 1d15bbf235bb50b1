#pragma once

#include "capls/types.hpp"

namespace capls::linalg {

/// Dense symmetric matrix. Symmetry is exact by construction: the
/// constructor mirrors the lower triangle onto the upper one.
class SymMatrix {
 public:
  explicit SymMatrix(Matrix m);

  static SymMatrix identity(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }

 private:
  Matrix m_;
};

/// Eigen-decomposition result. values are sorted non-increasing and
/// vectors column k belongs to values[k].
struct EigenPairs {
  Vector values;
  Matrix vectors;
};

struct SolveOptions {
  /// Jacobi sweep budget before NonConvergence is raised.
  int max_sweeps = 1000;
  /// Sweep convergence: off-diagonal Frobenius norm relative to ||A||_F.
  double sweep_tol = 1e-14;
};

/// Cholesky factor L with L L^T == b. Throws NotPositiveDefinite when a
/// pivot is non-positive or non-finite.
Matrix cholesky(const SymMatrix& b);

/// k largest eigenpairs of a symmetric matrix by cyclic Jacobi rotations.
/// Vectors are orthonormal; each is sign-fixed so its largest-magnitude
/// entry is positive; ties between equal eigenvalues keep solver order.
EigenPairs symmetric_eigs(const SymMatrix& a, Index k,
                          const SolveOptions& opts = {});

/// k largest-eigenvalue solutions of A p = lambda B p for symmetric A and
/// SPD B, via Cholesky reduction to a standard symmetric problem. Returned
/// vectors are B-orthonormal and satisfy, per pair,
///   ||A p - lambda B p||_2 <= 1e-6 (||A||_F + |lambda| ||B||_F).
EigenPairs solve_generalized_sym(const SymMatrix& a, const SymMatrix& b,
                                 Index k, const SolveOptions& opts = {});

}  // namespace capls::linalg
