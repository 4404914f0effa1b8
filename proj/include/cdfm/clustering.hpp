#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "cdfm/rng.hpp"

namespace cdfm {

struct LloydOptions {
  int max_iter = 0;      // 0: max(100, ceil(4 log d))
  double tol = 0.0;      // extra stop rule on objective decrease; 0 disables
  // When supplied, per-step misclustering against these labels is recorded.
  std::optional<Eigen::VectorXi> truth;
};

struct ClusteringResult {
  Eigen::VectorXi z_hat;                  // length d, labels 0..K-1
  std::vector<Eigen::VectorXd> means_hat; // K cluster means
  int iterations = 0;
  double objective = 0.0;                 // (1/d) sum ||x_i - m_{z(i)}||^2
  std::vector<double> objective_history;  // value after each update step
  std::vector<double> misclustering_history;  // filled when truth supplied
  bool empty_cluster_event = false;       // some mean was reseeded
};

// Signal-separation summary of a K-component configuration:
// smallest/largest distance between component means, smallest community
// proportion, the two signal-to-noise ratios, and the failure-probability
// term delta(d, sigma, Delta, eps).
struct SeparationStats {
  double delta = 0.0;       // min pairwise mean distance
  double m_max = 0.0;       // max pairwise mean distance
  double alpha = 0.0;       // min_k n_k / d
  double sigma = 0.0;       // sub-Gaussian parameter (input)
  double eps = 0.0;         // loading estimation error (input)
  double rho_sigma = 0.0;
  double rho_eps = 0.0;     // +inf when eps = 0
  double delta_bound = 0.0; // 1/d + 2 exp(-Delta/sigma) + 2 exp(-Delta^2/(8 eps sigma))
  int d = 0, K = 0, r = 0;
};

struct InitQualityReport {
  double g0 = 0.0;              // cluster-wise misclustering of the initialization
  double mean_dev = 0.0;        // max_k ||m0_k - mu_k|| / Delta
  double g0_threshold = 0.0;
  double mean_threshold = 0.0;
  bool good = false;
};

struct TheoremBound {
  double bound = 0.0;  // max of the two exponential terms
  double term_subgassian = 0.0;   // exp(-Delta^2 / (16 sigma^2))
  double term_estimation = 0.0;   // exp(-Delta^2 / (8 eps sigma))
  // Hypothesis ratios; the theorem's absolute constants are unspecified, so
  // these are reported raw rather than thresholded.
  double d_alpha_over_K_log_d = 0.0;
  double rho_sigma_over_sqrt_K = 0.0;
  double rho_eps_over_sqrt_K = 0.0;     // +inf when eps = 0
  double separation_product = 0.0;      // Delta^2 / (eps sigma), +inf when eps = 0
  double separation_required = 0.0;     // r log 3
  bool separation_ok = false;           // separation_product >= r log 3
};

// K distinct starting means chosen by squared-distance-weighted sampling.
std::vector<Eigen::VectorXd> kmeans_pp_init(const std::vector<Eigen::VectorXd>& points, int K,
                                            Rng& rng);

// Alternates nearest-mean assignment (ties to the lowest cluster index) and
// centroid updates until assignments stabilize. A cluster left empty is
// reseeded at the point farthest from its current mean and flagged.
ClusteringResult lloyd(const std::vector<Eigen::VectorXd>& points, int K,
                       const std::vector<Eigen::VectorXd>& init_means,
                       const LloydOptions& options = {});

// Fraction of disagreeing labels minimized over relabelings: exhaustive for
// K <= 8, optimal assignment matching on the confusion matrix beyond.
double misclustering_rate(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true, int K);

SeparationStats separation_stats(const std::vector<Eigen::VectorXd>& true_means,
                                 const std::vector<int>& sizes, int d, int K, int r, double sigma,
                                 double eps);

// Evaluates the two sufficient initialization conditions: cluster-wise
// misclustering below a separation-driven threshold, or initial means close
// to the true means. Inputs are label-aligned (cluster k of the init
// corresponds to true community k).
InitQualityReport init_quality(const Eigen::VectorXi& z0,
                               const std::vector<Eigen::VectorXd>& means0,
                               const Eigen::VectorXi& z_true,
                               const std::vector<Eigen::VectorXd>& true_means,
                               const SeparationStats& stats);

TheoremBound theorem_bound(const SeparationStats& stats);

namespace detail {
// Both misclustering back ends, exposed for cross-checking.
double misclustering_exhaustive(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true, int K);
double misclustering_matching(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true, int K);
}  // namespace detail

}  // namespace cdfm
