#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "cdfm/rng.hpp"

namespace cdfm {

// Node of the recursive splitting tree. Children exist iff the node's test
// rejected the single-Gaussian null at the chosen threshold.
struct SigClustNode {
  std::vector<int> point_indices;  // ascending
  double p_value = 1.0;
  bool tested = false;  // false when the node was too small to test
  std::unique_ptr<SigClustNode> left;
  std::unique_ptr<SigClustNode> right;

  bool is_leaf() const { return !left; }
};

struct ChooseKResult {
  int k_hat = 0;
  std::unique_ptr<SigClustNode> tree;
};

// Within-group variation over total variation for a binary split; in [0,1].
double cluster_index(const std::vector<Eigen::VectorXd>& points,
                     const std::vector<int>& labels2);

// Tests whether the points look like one Gaussian cloud: the observed
// 2-means cluster index is compared against its distribution under a
// Gaussian null with the sample mean and sample covariance eigenvalues.
// Returns the fraction of simulated indices at or below the observed one.
double sigclust_test(const std::vector<Eigen::VectorXd>& points, int n_sim, Rng& rng);

struct ChooseKOptions {
  int n_sim = 1000;
  int max_k = 20;
  int min_split_size = 0;  // 0: max(4, 4 * dim)
};

// Recursive splitting: test each node, split by 2-means while p < tau,
// stop otherwise. The leaf count estimates the number of communities.
// Deterministic in seed; each node's randomness is derived from its index
// set so results do not depend on traversal order or on tau.
ChooseKResult choose_k(const std::vector<Eigen::VectorXd>& points, double tau, int n_sim,
                       int max_k, std::uint64_t seed);
ChooseKResult choose_k(const std::vector<Eigen::VectorXd>& points, double tau, std::uint64_t seed,
                       const ChooseKOptions& options);

}  // namespace cdfm
