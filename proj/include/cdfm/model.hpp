#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cdfm/mixtures.hpp"
#include "cdfm/rng.hpp"

namespace cdfm {

enum class FactorProcessKind { IidGaussian, Var1 };

struct FactorProcess {
  FactorProcessKind kind = FactorProcessKind::IidGaussian;
  Eigen::MatrixXd transition;      // r x r, Var1 only
  Eigen::MatrixXd innovation_cov;  // r x r SPD, Var1 only

  static FactorProcess iid_gaussian() { return {}; }
  static FactorProcess var1(Eigen::MatrixXd transition, Eigen::MatrixXd innovation_cov);
};

// Full generative description of the community factor model:
// d observed series over T steps, r factors, K mixture components with
// weights p, one mixing component per community, and idiosyncratic errors
// with covariance error_cov.
struct CdfmConfig {
  int d = 0;
  int T = 0;
  int r = 0;
  int K = 0;
  Eigen::VectorXd weights;            // length K, sums to one
  std::vector<MixingSpec> components; // length K
  FactorProcess factor_process;
  Eigen::MatrixXd error_cov;          // d x d; empty means identity
  // When set, the diagonal of the error covariance is replaced per node by
  // 1 - ||lambda_i||^2 so every component series has unit second moment.
  bool normalize_errors = false;
  // Deterministic community sizes (contiguous blocks) instead of i.i.d.
  // draws from the weights.
  std::optional<std::vector<int>> fixed_sizes;

  void validate() const;
  Eigen::MatrixXd effective_error_cov() const;  // identity when unset
};

// Community assignment of the d nodes; labels are 0-based internally.
struct Membership {
  Eigen::VectorXi z;  // length d, values in {0, ..., K-1}
  int K = 0;

  int d() const { return static_cast<int>(z.size()); }
  std::vector<int> sizes() const;
  Eigen::MatrixXd one_hot() const;  // d x K
  void validate() const;
};

// d x r loadings; every row must lie in the closed unit disc.
struct LoadingsMatrix {
  Eigen::MatrixXd lambda;

  int d() const { return static_cast<int>(lambda.rows()); }
  int r() const { return static_cast<int>(lambda.cols()); }
  void validate(double tol = 1e-12) const;
};

struct CdfmDraw {
  CdfmConfig config;
  Membership membership;
  LoadingsMatrix loadings;
  Eigen::MatrixXd factors;  // T x r
  Eigen::MatrixXd series;   // T x d
};

// Labels drawn i.i.d. from the mixture weights, or contiguous blocks when
// fixed_sizes is set.
Membership draw_membership(const CdfmConfig& config, Rng& rng);

// Row i sampled from the component of node i's community.
LoadingsMatrix draw_loadings(const CdfmConfig& config, const Membership& membership, Rng& rng);

// T x r factor path. The VAR(1) path starts from its stationary law
// (discrete Lyapunov solve) and additionally burns in var1_burn_in steps.
Eigen::MatrixXd simulate_factors(const CdfmConfig& config, Rng& rng, int var1_burn_in = 500);

// Composes membership, loadings, factors and errors into X = F Lambda' + E.
CdfmDraw simulate_series(const CdfmConfig& config, Rng& rng);

// Lambda Lambda' + error_cov.
Eigen::MatrixXd population_covariance(const LoadingsMatrix& loadings,
                                      const Eigen::MatrixXd& error_cov);

// Block matrix [(mu_k' mu_l) J_{n_k, n_l}] of inner products of component
// means, the community-averaged shape of Lambda Lambda'.
Eigen::MatrixXd expected_block_matrix(const std::vector<Eigen::VectorXd>& means,
                                      const std::vector<int>& sizes);

}  // namespace cdfm
