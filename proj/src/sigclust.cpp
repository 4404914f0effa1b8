#include "cdfm/sigclust.hpp"

#include <algorithm>
#include <cmath>

#include "cdfm/clustering.hpp"
#include "cdfm/common.hpp"
#include "cdfm/linalg.hpp"

namespace cdfm {

namespace {

// A 2-means split kept symmetric between observed and simulated data:
// three k-means++ restarts, best objective wins.
Eigen::VectorXi two_means_split(const std::vector<Eigen::VectorXd>& points, Rng& rng) {
  ClusteringResult best;
  best.objective = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < 3; ++restart) {
    const auto init = kmeans_pp_init(points, 2, rng);
    ClusteringResult res = lloyd(points, 2, init);
    if (res.objective < best.objective) best = std::move(res);
  }
  return best.z_hat;
}

struct GaussianNull {
  Eigen::VectorXd mean;
  Eigen::VectorXd eig_sd;  // sqrt of (floored) sample covariance eigenvalues
};

GaussianNull fit_null(const std::vector<Eigen::VectorXd>& points) {
  const int n = static_cast<int>(points.size());
  const int r = static_cast<int>(points[0].size());
  GaussianNull null;
  null.mean = Eigen::VectorXd::Zero(r);
  for (const auto& p : points) null.mean += p;
  null.mean /= n;
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(r, r);
  for (const auto& p : points) {
    const Eigen::VectorXd c = p - null.mean;
    cov += c * c.transpose();
  }
  cov /= (n - 1);
  const SymEigen e = sym_eigen_desc(cov);
  const double floor = std::max(1e-12, 1e-9 * std::max(e.values(0), 0.0));
  null.eig_sd = e.values.cwiseMax(floor).cwiseSqrt();
  return null;
}

// The cluster index is invariant under rotations, so the null can be
// sampled in the covariance eigenbasis directly.
std::vector<Eigen::VectorXd> sample_null(const GaussianNull& null, int n, Rng& rng) {
  const int r = static_cast<int>(null.mean.size());
  std::vector<Eigen::VectorXd> pts(n);
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd p(r);
    for (int j = 0; j < r; ++j) p(j) = null.mean(j) + null.eig_sd(j) * rng.normal();
    pts[i] = std::move(p);
  }
  return pts;
}

double split_cluster_index(const std::vector<Eigen::VectorXd>& points, Rng& rng) {
  const Eigen::VectorXi z = two_means_split(points, rng);
  std::vector<int> labels(z.data(), z.data() + z.size());
  return cluster_index(points, labels);
}

double node_p_value(const std::vector<Eigen::VectorXd>& points, int n_sim, Rng& rng) {
  if (points.size() < 4) throw ValidationError("sigclust_test: need at least 4 points");
  if (n_sim < 1) throw ValidationError("sigclust_test: n_sim must be >= 1");

  const double observed = split_cluster_index(points, rng);
  const GaussianNull null = fit_null(points);

  const int n = static_cast<int>(points.size());
  const std::uint64_t sim_base = rng.raw();
  int at_or_below = 0;
  for (int s = 0; s < n_sim; ++s) {
    Rng sim_rng(derive_seed(sim_base, static_cast<std::uint64_t>(s)));
    const auto sim = sample_null(null, n, sim_rng);
    if (split_cluster_index(sim, sim_rng) <= observed) ++at_or_below;
  }
  return static_cast<double>(at_or_below) / n_sim;
}

std::uint64_t hash_indices(const std::vector<int>& idx) {
  std::uint64_t h = 1469598103934665603ULL;  // FNV-1a
  for (int i : idx) {
    h ^= static_cast<std::uint64_t>(i) + 1;
    h *= 1099511628211ULL;
  }
  return h;
}

struct TreeBuilder {
  const std::vector<Eigen::VectorXd>& points;
  double tau;
  ChooseKOptions opts;
  std::uint64_t seed;
  int leaves = 1;

  std::unique_ptr<SigClustNode> build(std::vector<int> indices) {
    auto node = std::make_unique<SigClustNode>();
    node->point_indices = std::move(indices);
    const int n = static_cast<int>(node->point_indices.size());
    if (n < opts.min_split_size || leaves >= opts.max_k) return node;

    std::vector<Eigen::VectorXd> sub(n);
    for (int i = 0; i < n; ++i) sub[i] = points[node->point_indices[i]];

    // Node randomness depends only on the index set, so the tree shape is
    // reproducible and monotone in tau.
    Rng node_rng(derive_seed(seed, hash_indices(node->point_indices)));
    node->p_value = node_p_value(sub, opts.n_sim, node_rng);
    node->tested = true;
    if (node->p_value >= tau) return node;

    Rng split_rng(derive_seed(seed, hash_indices(node->point_indices), 7));
    const Eigen::VectorXi z = two_means_split(sub, split_rng);
    std::vector<int> left_idx, right_idx;
    for (int i = 0; i < n; ++i)
      (z(i) == 0 ? left_idx : right_idx).push_back(node->point_indices[i]);
    if (left_idx.empty() || right_idx.empty()) return node;  // degenerate split

    ++leaves;
    node->left = build(std::move(left_idx));
    node->right = build(std::move(right_idx));
    return node;
  }
};

}  // namespace

double cluster_index(const std::vector<Eigen::VectorXd>& points,
                     const std::vector<int>& labels2) {
  const int n = static_cast<int>(points.size());
  if (n < 2 || static_cast<int>(labels2.size()) != n)
    throw ValidationError("cluster_index: need n >= 2 points with matching labels");
  const int r = static_cast<int>(points[0].size());

  Eigen::VectorXd grand = Eigen::VectorXd::Zero(r);
  Eigen::VectorXd group[2] = {Eigen::VectorXd::Zero(r), Eigen::VectorXd::Zero(r)};
  int count[2] = {0, 0};
  for (int i = 0; i < n; ++i) {
    if (labels2[i] != 0 && labels2[i] != 1)
      throw ValidationError("cluster_index: labels must be binary");
    grand += points[i];
    group[labels2[i]] += points[i];
    ++count[labels2[i]];
  }
  if (count[0] == 0 || count[1] == 0)
    throw ValidationError("cluster_index: both groups must be nonempty");
  grand /= n;
  group[0] /= count[0];
  group[1] /= count[1];

  double within = 0.0, total = 0.0;
  for (int i = 0; i < n; ++i) {
    within += (points[i] - group[labels2[i]]).squaredNorm();
    total += (points[i] - grand).squaredNorm();
  }
  if (total <= 0.0) throw ValidationError("cluster_index: total variation is zero");
  return within / total;
}

double sigclust_test(const std::vector<Eigen::VectorXd>& points, int n_sim, Rng& rng) {
  return node_p_value(points, n_sim, rng);
}

ChooseKResult choose_k(const std::vector<Eigen::VectorXd>& points, double tau,
                       std::uint64_t seed, const ChooseKOptions& options) {
  if (!(tau > 0.0) || !(tau < 1.0)) throw ValidationError("choose_k: tau must be in (0, 1)");
  if (points.empty()) throw ValidationError("choose_k: no points");

  ChooseKOptions opts = options;
  if (opts.min_split_size <= 0)
    opts.min_split_size = std::max(4, 4 * static_cast<int>(points[0].size()));

  std::vector<int> all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) all[i] = static_cast<int>(i);

  TreeBuilder builder{points, tau, opts, seed};
  ChooseKResult result;
  result.tree = builder.build(std::move(all));
  result.k_hat = builder.leaves;
  return result;
}

ChooseKResult choose_k(const std::vector<Eigen::VectorXd>& points, double tau, int n_sim,
                       int max_k, std::uint64_t seed) {
  ChooseKOptions opts;
  opts.n_sim = n_sim;
  opts.max_k = max_k;
  return choose_k(points, tau, seed, opts);
}

}  // namespace cdfm
