#include "cdfm/model.hpp"

#include <cmath>
#include <numeric>

#include "cdfm/common.hpp"
#include "cdfm/linalg.hpp"

namespace cdfm {

FactorProcess FactorProcess::var1(Eigen::MatrixXd transition, Eigen::MatrixXd innovation_cov) {
  FactorProcess p;
  p.kind = FactorProcessKind::Var1;
  p.transition = std::move(transition);
  p.innovation_cov = std::move(innovation_cov);
  return p;
}

namespace {

bool specs_equal(const MixingSpec& a, const MixingSpec& b) {
  if (a.kind != b.kind || a.mu.size() != b.mu.size()) return false;
  if (a.mu != b.mu) return false;
  switch (a.kind) {
    case MixingKind::PointMass:
      return true;
    case MixingKind::PndBeta:
      return a.beta_a == b.beta_a && a.beta_b == b.beta_b;
    case MixingKind::RestrictedNormal:
      return a.sigma == b.sigma;
  }
  return false;
}

}  // namespace

void CdfmConfig::validate() const {
  if (d < 1 || T < 1 || r < 1 || K < 1) throw ValidationError("CdfmConfig: d, T, r, K must be >= 1");
  if (weights.size() != K) throw ValidationError("CdfmConfig: weights length must equal K");
  if (weights.minCoeff() < 0.0) throw ValidationError("CdfmConfig: negative mixture weight");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw ValidationError("CdfmConfig: mixture weights must sum to one");
  if (static_cast<int>(components.size()) != K)
    throw ValidationError("CdfmConfig: expected K mixture components");
  for (const auto& c : components) {
    c.validate();
    if (c.dim() != r) throw ValidationError("CdfmConfig: component dimension must equal r");
  }
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l)
      if (specs_equal(components[k], components[l]))
        throw ValidationError("CdfmConfig: mixture components must be pairwise distinct");
  if (factor_process.kind == FactorProcessKind::Var1) {
    const auto& fp = factor_process;
    if (fp.transition.rows() != r || fp.transition.cols() != r ||
        fp.innovation_cov.rows() != r || fp.innovation_cov.cols() != r)
      throw ValidationError("CdfmConfig: VAR(1) matrices must be r x r");
    if (spectral_radius(fp.transition) >= 1.0)
      throw ValidationError("CdfmConfig: VAR(1) transition must have spectral radius < 1");
  }
  if (error_cov.size() != 0) {
    if (error_cov.rows() != d || error_cov.cols() != d)
      throw ValidationError("CdfmConfig: error covariance must be d x d");
    if ((error_cov - error_cov.transpose()).cwiseAbs().maxCoeff() >
        1e-10 * (1.0 + error_cov.cwiseAbs().maxCoeff()))
      throw ValidationError("CdfmConfig: error covariance must be symmetric");
  }
  if (normalize_errors && error_cov.size() != 0 && !is_diagonal(error_cov))
    throw ValidationError("CdfmConfig: normalize_errors requires a diagonal error covariance");
  if (fixed_sizes) {
    if (static_cast<int>(fixed_sizes->size()) != K)
      throw ValidationError("CdfmConfig: fixed_sizes length must equal K");
    int total = 0;
    for (int n : *fixed_sizes) {
      if (n < 0) throw ValidationError("CdfmConfig: negative community size");
      total += n;
    }
    if (total != d) throw ValidationError("CdfmConfig: fixed community sizes must sum to d");
  }
}

Eigen::MatrixXd CdfmConfig::effective_error_cov() const {
  if (error_cov.size() == 0) return Eigen::MatrixXd::Identity(d, d);
  return error_cov;
}

std::vector<int> Membership::sizes() const {
  std::vector<int> n(K, 0);
  for (Eigen::Index i = 0; i < z.size(); ++i) ++n[z(i)];
  return n;
}

Eigen::MatrixXd Membership::one_hot() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(z.size(), K);
  for (Eigen::Index i = 0; i < z.size(); ++i) m(i, z(i)) = 1.0;
  return m;
}

void Membership::validate() const {
  if (K < 1) throw ValidationError("Membership: K must be >= 1");
  for (Eigen::Index i = 0; i < z.size(); ++i)
    if (z(i) < 0 || z(i) >= K) throw ValidationError("Membership: label out of range");
}

void LoadingsMatrix::validate(double tol) const {
  for (Eigen::Index i = 0; i < lambda.rows(); ++i)
    if (lambda.row(i).norm() > 1.0 + tol)
      throw ValidationError("LoadingsMatrix: row outside the unit disc");
}

Membership draw_membership(const CdfmConfig& config, Rng& rng) {
  config.validate();
  Membership m;
  m.K = config.K;
  m.z.resize(config.d);
  if (config.fixed_sizes) {
    int i = 0;
    for (int k = 0; k < config.K; ++k)
      for (int c = 0; c < (*config.fixed_sizes)[k]; ++c) m.z(i++) = k;
    return m;
  }
  std::vector<double> w(config.weights.data(), config.weights.data() + config.K);
  for (int i = 0; i < config.d; ++i) m.z(i) = rng.discrete(w);
  return m;
}

LoadingsMatrix draw_loadings(const CdfmConfig& config, const Membership& membership, Rng& rng) {
  config.validate();
  membership.validate();
  if (membership.K != config.K || membership.d() != config.d)
    throw ValidationError("draw_loadings: membership inconsistent with config");
  LoadingsMatrix out;
  out.lambda.resize(config.d, config.r);
  for (int i = 0; i < config.d; ++i) {
    const auto row = sample_mixing(config.components[membership.z(i)], 1, rng);
    out.lambda.row(i) = row[0].transpose();
  }
  return out;
}

Eigen::MatrixXd simulate_factors(const CdfmConfig& config, Rng& rng, int var1_burn_in) {
  config.validate();
  const int T = config.T;
  const int r = config.r;
  Eigen::MatrixXd f(T, r);
  if (config.factor_process.kind == FactorProcessKind::IidGaussian) {
    for (int t = 0; t < T; ++t)
      for (int j = 0; j < r; ++j) f(t, j) = rng.normal();
    return f;
  }
  const Eigen::MatrixXd& a = config.factor_process.transition;
  const Eigen::MatrixXd& q = config.factor_process.innovation_cov;
  const Eigen::MatrixXd chol_q = cholesky_factor(q);
  // Start from the stationary law, then burn in.
  const Eigen::MatrixXd stationary = solve_discrete_lyapunov(a, q);
  const Eigen::MatrixXd chol_s = cholesky_factor(stationary);
  Eigen::VectorXd state = chol_s * rng.normal_vector(r);
  for (int t = 0; t < var1_burn_in; ++t) state = a * state + chol_q * rng.normal_vector(r);
  for (int t = 0; t < T; ++t) {
    state = a * state + chol_q * rng.normal_vector(r);
    f.row(t) = state.transpose();
  }
  return f;
}

CdfmDraw simulate_series(const CdfmConfig& config, Rng& rng) {
  config.validate();
  CdfmDraw draw;
  draw.config = config;
  draw.membership = draw_membership(config, rng);
  draw.loadings = draw_loadings(config, draw.membership, rng);
  draw.factors = simulate_factors(config, rng);

  Eigen::MatrixXd sigma_eps = config.effective_error_cov();
  if (config.normalize_errors) {
    for (int i = 0; i < config.d; ++i) {
      const double s = 1.0 - draw.loadings.lambda.row(i).squaredNorm();
      sigma_eps(i, i) = std::max(s, 0.0);
    }
  }

  draw.series = draw.factors * draw.loadings.lambda.transpose();
  if (sigma_eps.cwiseAbs().maxCoeff() > 0.0) {
    const Eigen::MatrixXd chol = cholesky_factor(sigma_eps);
    for (int t = 0; t < config.T; ++t)
      draw.series.row(t) += (chol * rng.normal_vector(config.d)).transpose();
  }
  return draw;
}

Eigen::MatrixXd population_covariance(const LoadingsMatrix& loadings,
                                      const Eigen::MatrixXd& error_cov) {
  if (error_cov.rows() != loadings.d() || error_cov.cols() != loadings.d())
    throw ValidationError("population_covariance: dimension mismatch");
  return loadings.lambda * loadings.lambda.transpose() + error_cov;
}

Eigen::MatrixXd expected_block_matrix(const std::vector<Eigen::VectorXd>& means,
                                      const std::vector<int>& sizes) {
  if (means.size() != sizes.size())
    throw ValidationError("expected_block_matrix: means/sizes length mismatch");
  const int K = static_cast<int>(means.size());
  const int d = std::accumulate(sizes.begin(), sizes.end(), 0);
  Eigen::MatrixXd out(d, d);
  int row0 = 0;
  for (int k = 0; k < K; ++k) {
    int col0 = 0;
    for (int l = 0; l < K; ++l) {
      out.block(row0, col0, sizes[k], sizes[l]).setConstant(means[k].dot(means[l]));
      col0 += sizes[l];
    }
    row0 += sizes[k];
  }
  return out;
}

}  // namespace cdfm
