#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cdfm/rng.hpp"

namespace cdfm {

enum class MixingKind { PointMass, PndBeta, RestrictedNormal };

// One mixture component on the closed unit disc {y : ||y||_2 <= 1}.
//
//   PointMass        all mass at mu.
//   PndBeta          direction of N(mu, I) scaled by an independent
//                    Beta(beta_a, beta_b) radius.
//   RestrictedNormal N(mu, sigma) conditioned on the disc.
struct MixingSpec {
  MixingKind kind = MixingKind::PointMass;
  Eigen::VectorXd mu;
  Eigen::MatrixXd sigma;  // RestrictedNormal only
  double beta_a = 0.0;    // PndBeta only
  double beta_b = 0.0;    // PndBeta only

  int dim() const { return static_cast<int>(mu.size()); }
  void validate() const;  // throws ValidationError

  static MixingSpec point_mass(Eigen::VectorXd mu);
  static MixingSpec pnd_beta(Eigen::VectorXd mu, double a, double b);
  static MixingSpec restricted_normal(Eigen::VectorXd mu, Eigen::MatrixXd sigma);
};

// Weighted sum of independent one-degree noncentral chi-squared variables,
// sum_j weights[j] * chi2_1(noncentrality[j]^2).
struct GeneralizedChiSq {
  Eigen::VectorXd weights;        // all strictly positive
  Eigen::VectorXd noncentrality;  // same length as weights

  void validate() const;
};

// Draws n points from the component. Every returned point satisfies
// ||y||_2 <= 1; the restricted-normal path uses rejection sampling and
// throws NumericError once a single draw exceeds max_attempts rejections.
std::vector<Eigen::VectorXd> sample_mixing(const MixingSpec& spec, int n, Rng& rng,
                                           long max_attempts = 10'000'000);

// CDF of the generalized chi-squared variable at y >= 0, computed from the
// oscillatory integral representation
//
//   F(y) = 1/2 - (1/pi) * Integral_0^inf sin(theta(y,u)) / (u rho(u)) du.
//
// The bulk of the integral is handled by adaptive Simpson; the oscillatory
// tail is summed half-period by half-period with alternating-series
// acceleration. Result is clamped to [0, 1]. Throws NumericError if the
// tail fails to settle below abs_tol.
double gchisq_cdf(const GeneralizedChiSq& g, double y, double abs_tol = 1e-8);

// P(N(mu, sigma) lands in the unit disc) = F_{Y'Y}(1) for the quadratic
// form induced by the eigendecomposition of sigma.
double disc_probability(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma);

// Log-density of the restricted normal component at y: the Gaussian
// log-density minus log of the disc mass, -inf outside the disc.
double restricted_normal_logpdf(const MixingSpec& spec, const Eigen::VectorXd& y);

// Gaussian log-density helper shared by the fitting objectives.
double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& sigma);

}  // namespace cdfm
