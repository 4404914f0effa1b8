#include "cdfm/linalg.hpp"

#include <cmath>

#include "cdfm/common.hpp"

namespace cdfm {

void canonicalize_column_signs(Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    Eigen::Index imax = 0;
    double best = -1.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double a = std::abs(m(i, j));
      if (a > best) {
        best = a;
        imax = i;
      }
    }
    if (m(imax, j) < 0.0) m.col(j) = -m.col(j);
  }
}

SymEigen sym_eigen_desc(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("sym_eigen_desc: matrix not square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NumericError("sym_eigen_desc: eigensolver failed");
  const Eigen::Index n = m.rows();
  SymEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  // Eigen returns ascending order.
  for (Eigen::Index j = 0; j < n; ++j) {
    out.values(j) = solver.eigenvalues()(n - 1 - j);
    out.vectors.col(j) = solver.eigenvectors().col(n - 1 - j);
  }
  canonicalize_column_signs(out.vectors);
  return out;
}

Eigen::MatrixXd solve_discrete_lyapunov(const Eigen::MatrixXd& a, const Eigen::MatrixXd& q) {
  const Eigen::Index r = a.rows();
  if (a.cols() != r || q.rows() != r || q.cols() != r)
    throw ValidationError("solve_discrete_lyapunov: dimension mismatch");
  if (spectral_radius(a) >= 1.0)
    throw ValidationError("solve_discrete_lyapunov: transition is not stable");
  Eigen::MatrixXd kron(r * r, r * r);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < r; ++j)
      kron.block(i * r, j * r, r, r) = a(i, j) * a;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(r * r, r * r) - kron;
  Eigen::VectorXd vec_q(r * r);
  for (Eigen::Index j = 0; j < r; ++j) vec_q.segment(j * r, r) = q.col(j);
  Eigen::VectorXd vec_s = lhs.partialPivLu().solve(vec_q);
  Eigen::MatrixXd s(r, r);
  for (Eigen::Index j = 0; j < r; ++j) s.col(j) = vec_s.segment(j * r, r);
  // Symmetrize away round-off.
  return 0.5 * (s + s.transpose());
}

double spectral_radius(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("spectral_radius: matrix not square");
  if (m.rows() == 0) return 0.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("spectral_radius: eigensolver failed");
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

bool is_diagonal(const Eigen::MatrixXd& m, double tol) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (i != j && std::abs(m(i, j)) > tol) return false;
  return true;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("cholesky_factor: matrix not square");
  if (is_diagonal(m)) {
    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (m(i, i) < 0.0) throw NumericError("cholesky_factor: negative diagonal entry");
      l(i, i) = std::sqrt(m(i, i));
    }
    return l;
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NumericError("cholesky_factor: matrix is not positive definite");
  return llt.matrixL();
}

}  // namespace cdfm
