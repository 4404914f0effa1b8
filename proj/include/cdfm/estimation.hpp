#pragma once

#include <Eigen/Dense>

#include "cdfm/model.hpp"

namespace cdfm {

// Principal-component estimates of loadings and factors:
// loadings_hat = Q_r D_r^{1/2} and factors_hat rows D_r^{-1} loadings_hat' x_t,
// so that loadings_hat' loadings_hat = D_r and the factor sample second
// moment is the identity.
struct PcaEstimate {
  Eigen::MatrixXd loadings_hat;  // d x r
  Eigen::MatrixXd factors_hat;   // T x r
  Eigen::VectorXd eigenvalues;   // r, descending, all positive
};

// True loadings rotated so their Gram matrix is diagonal with descending
// entries; the basis PCA estimates converge to.
struct AlignedTruth {
  Eigen::MatrixXd lambda0;   // d x r
  Eigen::MatrixXd rotation;  // r x r orthogonal
  bool degenerate = false;   // set when the Gram spectrum has (near) ties
};

struct LoadingErrors {
  double max_row_l2 = 0.0;  // max_i || est_i - truth_i ||_2 after sign matching
  double max_entry = 0.0;
};

// (1/T) sum_t x_t x_t' without mean subtraction.
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& series);

// Unit-diagonal rescaling of the sample covariance. Throws on a column with
// zero sample second moment.
Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& series);

// Divides each column by its root sample second moment, so that
// sample_covariance(standardize_columns(x)) == sample_correlation(x).
Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& series);

// PCA estimate from a symmetric PSD matrix and the series it summarizes.
// The series must be consistent with cov for the factor constraint to hold
// (pass the standardized series when cov is a correlation matrix).
PcaEstimate pca_estimate(const Eigen::MatrixXd& cov, int r, const Eigen::MatrixXd& series);

AlignedTruth align_truth(const LoadingsMatrix& loadings);

// Maximal row and entry discrepancies after resolving each column's sign
// ambiguity in favor of the estimate.
LoadingErrors loading_errors(const PcaEstimate& est, const AlignedTruth& truth);

}  // namespace cdfm
