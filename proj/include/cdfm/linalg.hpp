#pragma once

#include <Eigen/Dense>

namespace cdfm {

// Eigendecomposition of a symmetric matrix with eigenvalues in descending
// order. Eigenvector signs follow a fixed convention: the entry of largest
// magnitude in each column is made positive (first such entry on ties), so
// repeated runs and degenerate spectra still produce one canonical basis.
struct SymEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // columns match values
};

SymEigen sym_eigen_desc(const Eigen::MatrixXd& m);

// Applies the sign convention above to each column in place.
void canonicalize_column_signs(Eigen::MatrixXd& m);

// Solves S = A S A' + Q for the stationary covariance of a VAR(1) process
// (vectorized Kronecker solve; intended for small state dimensions).
// Requires spectral radius of A strictly below one.
Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q);

// Largest eigenvalue magnitude of a general (possibly non-symmetric) matrix.
double spectral_radius(const Eigen::MatrixXd& m);

// Lower Cholesky factor of an SPD (or diagonal PSD) matrix; throws
// NumericError if the matrix is not positive definite and not diagonal-PSD.
Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& m);

bool is_diagonal(const Eigen::MatrixXd& m, double tol = 0.0);

}  // namespace cdfm
