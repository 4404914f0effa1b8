#include "cdfm/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "cdfm/common.hpp"

namespace cdfm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int nearest_mean(const Eigen::VectorXd& x, const std::vector<Eigen::VectorXd>& means) {
  int best = 0;
  double best_d = (x - means[0]).squaredNorm();
  for (int k = 1; k < static_cast<int>(means.size()); ++k) {
    const double d = (x - means[k]).squaredNorm();
    if (d < best_d) {  // strict: ties stay with the lowest index
      best_d = d;
      best = k;
    }
  }
  return best;
}

double kmeans_objective(const std::vector<Eigen::VectorXd>& points, const Eigen::VectorXi& z,
                        const std::vector<Eigen::VectorXd>& means) {
  double s = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) s += (points[i] - means[z(i)]).squaredNorm();
  return s / static_cast<double>(points.size());
}

}  // namespace

std::vector<Eigen::VectorXd> kmeans_pp_init(const std::vector<Eigen::VectorXd>& points, int K,
                                            Rng& rng) {
  const int d = static_cast<int>(points.size());
  if (K < 1 || d < 1) throw ValidationError("kmeans_pp_init: need K >= 1 and points");
  if (K > d) throw ValidationError("kmeans_pp_init: more clusters than points");

  std::vector<Eigen::VectorXd> means;
  means.reserve(K);
  means.push_back(points[rng.uniform_int(d)]);

  std::vector<double> dist2(d);
  for (int i = 0; i < d; ++i) dist2[i] = (points[i] - means[0]).squaredNorm();

  while (static_cast<int>(means.size()) < K) {
    const double total = std::accumulate(dist2.begin(), dist2.end(), 0.0);
    if (total <= 0.0)
      throw ValidationError("kmeans_pp_init: fewer than K distinct points");
    const double u = rng.uniform() * total;
    double acc = 0.0;
    int chosen = d - 1;
    for (int i = 0; i < d; ++i) {
      acc += dist2[i];
      if (u < acc) {
        chosen = i;
        break;
      }
    }
    means.push_back(points[chosen]);
    for (int i = 0; i < d; ++i)
      dist2[i] = std::min(dist2[i], (points[i] - means.back()).squaredNorm());
  }
  return means;
}

ClusteringResult lloyd(const std::vector<Eigen::VectorXd>& points, int K,
                       const std::vector<Eigen::VectorXd>& init_means,
                       const LloydOptions& options) {
  const int d = static_cast<int>(points.size());
  if (d < 1) throw ValidationError("lloyd: no points");
  if (static_cast<int>(init_means.size()) != K)
    throw ValidationError("lloyd: init_means length must equal K");
  const int dim = static_cast<int>(points[0].size());

  int max_iter = options.max_iter;
  if (max_iter <= 0)
    max_iter = std::max(100, static_cast<int>(std::ceil(4.0 * std::log(std::max(d, 2)))));

  ClusteringResult res;
  res.means_hat = init_means;
  res.z_hat = Eigen::VectorXi::Constant(d, -1);

  double prev_objective = kInf;
  for (int it = 0; it < max_iter; ++it) {
    // Assignment step.
    Eigen::VectorXi z(d);
    for (int i = 0; i < d; ++i) z(i) = nearest_mean(points[i], res.means_hat);

    // Centroid step, reseeding any emptied cluster at the point farthest
    // from its stale mean.
    std::vector<Eigen::VectorXd> sums(K, Eigen::VectorXd::Zero(dim));
    std::vector<int> counts(K, 0);
    for (int i = 0; i < d; ++i) {
      sums[z(i)] += points[i];
      ++counts[z(i)];
    }
    for (int k = 0; k < K; ++k) {
      if (counts[k] > 0) {
        res.means_hat[k] = sums[k] / counts[k];
        continue;
      }
      res.empty_cluster_event = true;
      int far_i = 0;
      double far_d = -1.0;
      for (int i = 0; i < d; ++i) {
        const double dd = (points[i] - res.means_hat[k]).squaredNorm();
        if (dd > far_d) {
          far_d = dd;
          far_i = i;
        }
      }
      res.means_hat[k] = points[far_i];
    }

    const double obj = kmeans_objective(points, z, res.means_hat);
    res.objective_history.push_back(obj);
    if (options.truth)
      res.misclustering_history.push_back(misclustering_rate(z, *options.truth, K));
    res.iterations = it + 1;

    const bool stable = (z.array() == res.z_hat.array()).all();
    res.z_hat = z;
    res.objective = obj;
    if (stable) break;
    if (options.tol > 0.0 && prev_objective - obj >= 0.0 && prev_objective - obj <= options.tol)
      break;
    prev_objective = obj;
  }
  return res;
}

namespace detail {

double misclustering_exhaustive(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true,
                                int K) {
  const int d = static_cast<int>(z_hat.size());
  std::vector<int> perm(K);
  std::iota(perm.begin(), perm.end(), 0);
  int best = d + 1;
  do {
    int mism = 0;
    for (int i = 0; i < d; ++i)
      if (perm[z_hat(i)] != z_true(i)) ++mism;
    best = std::min(best, mism);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / d;
}

// Hungarian algorithm (potentials form) minimizing total mismatch; O(K^3).
double misclustering_matching(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true, int K) {
  const int d = static_cast<int>(z_hat.size());
  Eigen::MatrixXd agree = Eigen::MatrixXd::Zero(K, K);
  for (int i = 0; i < d; ++i) agree(z_hat(i), z_true(i)) += 1.0;
  // cost(h, t) = mismatches if estimated label h is renamed to true label t.
  Eigen::MatrixXd cost(K, K);
  for (int h = 0; h < K; ++h)
    for (int t = 0; t < K; ++t) cost(h, t) = agree.row(h).sum() - agree(h, t);

  const int n = K;
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0);  // match[col] = row
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<bool> used(n + 1, false);
    std::vector<int> way(n + 1, 0);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
  return total / d;
}

}  // namespace detail

double misclustering_rate(const Eigen::VectorXi& z_hat, const Eigen::VectorXi& z_true, int K) {
  if (z_hat.size() != z_true.size())
    throw ValidationError("misclustering_rate: label vectors of different length");
  if (z_hat.size() == 0) throw ValidationError("misclustering_rate: empty labels");
  if (K <= 8) return detail::misclustering_exhaustive(z_hat, z_true, K);
  return detail::misclustering_matching(z_hat, z_true, K);
}

SeparationStats separation_stats(const std::vector<Eigen::VectorXd>& true_means,
                                 const std::vector<int>& sizes, int d, int K, int r, double sigma,
                                 double eps) {
  if (static_cast<int>(true_means.size()) != K || static_cast<int>(sizes.size()) != K)
    throw ValidationError("separation_stats: expected K means and K sizes");
  if (!(sigma > 0.0)) throw ValidationError("separation_stats: sigma must be positive");
  if (eps < 0.0) throw ValidationError("separation_stats: eps must be nonnegative");
  if (std::accumulate(sizes.begin(), sizes.end(), 0) != d)
    throw ValidationError("separation_stats: community sizes must sum to d");

  SeparationStats s;
  s.d = d;
  s.K = K;
  s.r = r;
  s.sigma = sigma;
  s.eps = eps;
  s.delta = kInf;
  s.m_max = 0.0;
  for (int k = 0; k < K; ++k)
    for (int l = k + 1; l < K; ++l) {
      const double dist = (true_means[k] - true_means[l]).norm();
      s.delta = std::min(s.delta, dist);
      s.m_max = std::max(s.m_max, dist);
    }
  if (K == 1) s.delta = s.m_max = 0.0;

  s.alpha = kInf;
  for (int n : sizes) s.alpha = std::min(s.alpha, static_cast<double>(n) / d);

  s.rho_sigma = (s.delta / sigma) * std::sqrt(s.alpha / (1.0 + static_cast<double>(K) * r / d));
  s.rho_eps = eps > 0.0 ? std::sqrt(s.alpha) * s.delta / eps : kInf;
  s.delta_bound = 1.0 / d + 2.0 * std::exp(-s.delta / sigma) +
                  (eps > 0.0 ? 2.0 * std::exp(-s.delta * s.delta / (8.0 * eps * sigma)) : 0.0);
  return s;
}

InitQualityReport init_quality(const Eigen::VectorXi& z0,
                               const std::vector<Eigen::VectorXd>& means0,
                               const Eigen::VectorXi& z_true,
                               const std::vector<Eigen::VectorXd>& true_means,
                               const SeparationStats& stats) {
  const int K = stats.K;
  const int d = static_cast<int>(z0.size());
  if (z_true.size() != d || static_cast<int>(means0.size()) != K ||
      static_cast<int>(true_means.size()) != K)
    throw ValidationError("init_quality: inconsistent dimensions");

  // n0(l, k): points of true community l initially placed in cluster k.
  Eigen::MatrixXi n0 = Eigen::MatrixXi::Zero(K, K);
  for (int i = 0; i < d; ++i) n0(z_true(i), z0(i)) += 1;

  InitQualityReport rep;
  for (int k = 0; k < K; ++k) {
    const int assigned_k = n0.col(k).sum();
    const int true_k = n0.row(k).sum();
    const int wrong_in = assigned_k - n0(k, k);
    const int lost_out = true_k - n0(k, k);
    const double in_ratio = assigned_k > 0 ? static_cast<double>(wrong_in) / assigned_k : 0.0;
    const double out_ratio = true_k > 0 ? static_cast<double>(lost_out) / true_k : 0.0;
    rep.g0 = std::max({rep.g0, in_ratio, out_ratio});
  }

  rep.mean_dev = 0.0;
  for (int k = 0; k < K; ++k)
    rep.mean_dev = std::max(rep.mean_dev, (means0[k] - true_means[k]).norm());
  rep.mean_dev = stats.delta > 0.0 ? rep.mean_dev / stats.delta
                                   : (rep.mean_dev > 0.0 ? kInf : 0.0);

  const double root_penalty =
      std::pow(stats.alpha, -0.25) * std::sqrt(stats.sigma / std::max(stats.delta, 1e-300));
  const double g0_raw = 0.5 - (std::sqrt(6.0) + 1.0) / stats.rho_sigma -
                        (2.1 * std::sqrt(stats.alpha) + 1.0) / stats.rho_eps - root_penalty;
  const double mean_raw = 0.5 - 1.0 / stats.rho_sigma -
                          (1.1 * std::sqrt(stats.alpha) + 1.0) / stats.rho_eps - root_penalty;
  const double ratio = stats.m_max > 0.0 ? stats.delta / stats.m_max : 1.0;
  rep.g0_threshold = std::max(0.0, g0_raw * ratio);
  rep.mean_threshold = std::max(0.0, mean_raw);
  rep.good = (rep.g0 <= rep.g0_threshold) || (rep.mean_dev <= rep.mean_threshold);
  return rep;
}

TheoremBound theorem_bound(const SeparationStats& stats) {
  TheoremBound b;
  b.term_subgassian = std::exp(-stats.delta * stats.delta / (16.0 * stats.sigma * stats.sigma));
  b.term_estimation = stats.eps > 0.0
                          ? std::exp(-stats.delta * stats.delta / (8.0 * stats.eps * stats.sigma))
                          : 0.0;
  b.bound = std::max(b.term_subgassian, b.term_estimation);

  const double log_d = std::log(std::max(stats.d, 2));
  b.d_alpha_over_K_log_d = stats.d * stats.alpha / (stats.K * log_d);
  b.rho_sigma_over_sqrt_K = stats.rho_sigma / std::sqrt(stats.K);
  b.rho_eps_over_sqrt_K = stats.rho_eps / std::sqrt(stats.K);
  b.separation_product =
      stats.eps > 0.0 ? stats.delta * stats.delta / (stats.eps * stats.sigma) : kInf;
  b.separation_required = stats.r * std::log(3.0);
  b.separation_ok = b.separation_product >= b.separation_required;
  return b;
}

}  // namespace cdfm
