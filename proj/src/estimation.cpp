#include "cdfm/estimation.hpp"

#include <cmath>

#include "cdfm/common.hpp"
#include "cdfm/linalg.hpp"

namespace cdfm {

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& series) {
  if (series.rows() < 1) throw ValidationError("sample_covariance: empty series");
  return series.transpose() * series / static_cast<double>(series.rows());
}

Eigen::MatrixXd standardize_columns(const Eigen::MatrixXd& series) {
  const double T = static_cast<double>(series.rows());
  Eigen::MatrixXd out = series;
  for (Eigen::Index j = 0; j < series.cols(); ++j) {
    const double m2 = series.col(j).squaredNorm() / T;
    if (m2 <= 0.0) throw ValidationError("standardize_columns: column with zero second moment");
    out.col(j) /= std::sqrt(m2);
  }
  return out;
}

Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& series) {
  Eigen::MatrixXd cov = sample_covariance(series);
  Eigen::VectorXd inv_sd(cov.rows());
  for (Eigen::Index i = 0; i < cov.rows(); ++i) {
    if (cov(i, i) <= 0.0) throw ValidationError("sample_correlation: column with zero second moment");
    inv_sd(i) = 1.0 / std::sqrt(cov(i, i));
  }
  Eigen::MatrixXd corr = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
  corr.diagonal().setOnes();
  return corr;
}

PcaEstimate pca_estimate(const Eigen::MatrixXd& cov, int r, const Eigen::MatrixXd& series) {
  if (cov.rows() != cov.cols()) throw ValidationError("pca_estimate: covariance not square");
  if (r < 1 || r > cov.rows()) throw ValidationError("pca_estimate: invalid factor count");
  if (series.cols() != cov.rows())
    throw ValidationError("pca_estimate: series width does not match covariance");

  const SymEigen e = sym_eigen_desc(cov);
  if (e.values(r - 1) <= 0.0)
    throw NumericError("pca_estimate: rank deficiency, top-r eigenvalues not all positive");

  PcaEstimate out;
  out.eigenvalues = e.values.head(r);
  out.loadings_hat = e.vectors.leftCols(r) * out.eigenvalues.cwiseSqrt().asDiagonal();
  out.factors_hat = series * out.loadings_hat * out.eigenvalues.cwiseInverse().asDiagonal();
  return out;
}

AlignedTruth align_truth(const LoadingsMatrix& loadings) {
  const Eigen::MatrixXd gram = loadings.lambda.transpose() * loadings.lambda;
  const SymEigen e = sym_eigen_desc(gram);

  AlignedTruth out;
  out.rotation = e.vectors;
  out.lambda0 = loadings.lambda * e.vectors;
  // Flag near-ties in the spectrum; the rotation is then arbitrary within
  // the tied eigenspace.
  const double scale = std::max(std::abs(e.values(0)), 1.0);
  for (Eigen::Index j = 0; j + 1 < e.values.size(); ++j)
    if (std::abs(e.values(j) - e.values(j + 1)) <= 1e-10 * scale) out.degenerate = true;
  return out;
}

LoadingErrors loading_errors(const PcaEstimate& est, const AlignedTruth& truth) {
  if (est.loadings_hat.rows() != truth.lambda0.rows() ||
      est.loadings_hat.cols() != truth.lambda0.cols())
    throw ValidationError("loading_errors: shape mismatch");

  Eigen::MatrixXd aligned = truth.lambda0;
  for (Eigen::Index j = 0; j < aligned.cols(); ++j) {
    const double with = (est.loadings_hat.col(j) - aligned.col(j)).norm();
    const double against = (est.loadings_hat.col(j) + aligned.col(j)).norm();
    if (against < with) aligned.col(j) = -aligned.col(j);
  }
  const Eigen::MatrixXd diff = est.loadings_hat - aligned;
  LoadingErrors out;
  out.max_entry = diff.cwiseAbs().maxCoeff();
  out.max_row_l2 = diff.rowwise().norm().maxCoeff();
  return out;
}

}  // namespace cdfm
