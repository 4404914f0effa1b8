#include "cdfm/mixtures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cdfm/common.hpp"
#include "cdfm/linalg.hpp"

namespace cdfm {

namespace {
constexpr double kPi = std::numbers::pi;
}

MixingSpec MixingSpec::point_mass(Eigen::VectorXd mu) {
  MixingSpec s;
  s.kind = MixingKind::PointMass;
  s.mu = std::move(mu);
  s.validate();
  return s;
}

MixingSpec MixingSpec::pnd_beta(Eigen::VectorXd mu, double a, double b) {
  MixingSpec s;
  s.kind = MixingKind::PndBeta;
  s.mu = std::move(mu);
  s.beta_a = a;
  s.beta_b = b;
  s.validate();
  return s;
}

MixingSpec MixingSpec::restricted_normal(Eigen::VectorXd mu, Eigen::MatrixXd sigma) {
  MixingSpec s;
  s.kind = MixingKind::RestrictedNormal;
  s.mu = std::move(mu);
  s.sigma = std::move(sigma);
  s.validate();
  return s;
}

void MixingSpec::validate() const {
  if (mu.size() == 0) throw ValidationError("MixingSpec: empty mean vector");
  switch (kind) {
    case MixingKind::PointMass:
      if (mu.norm() > 1.0 + 1e-12)
        throw ValidationError("MixingSpec: point mass lies outside the unit disc");
      break;
    case MixingKind::PndBeta:
      if (!(beta_a > 0.0) || !(beta_b > 0.0))
        throw ValidationError("MixingSpec: Beta parameters must be positive");
      if (mu.norm() == 0.0)
        throw ValidationError("MixingSpec: direction mean must be nonzero");
      break;
    case MixingKind::RestrictedNormal: {
      if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
        throw ValidationError("MixingSpec: sigma dimension mismatch");
      if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + sigma.cwiseAbs().maxCoeff()))
        throw ValidationError("MixingSpec: sigma is not symmetric");
      const SymEigen e = sym_eigen_desc(0.5 * (sigma + sigma.transpose()));
      if (e.values.minCoeff() <= 0.0)
        throw ValidationError("MixingSpec: sigma is not positive definite");
      break;
    }
  }
}

void GeneralizedChiSq::validate() const {
  if (weights.size() == 0) throw ValidationError("GeneralizedChiSq: empty weights");
  if (weights.size() != noncentrality.size())
    throw ValidationError("GeneralizedChiSq: weights/noncentrality length mismatch");
  if (weights.minCoeff() <= 0.0)
    throw ValidationError("GeneralizedChiSq: weights must be strictly positive");
}

std::vector<Eigen::VectorXd> sample_mixing(const MixingSpec& spec, int n, Rng& rng,
                                           long max_attempts) {
  if (n < 1) throw ValidationError("sample_mixing: n must be >= 1");
  spec.validate();
  const int r = spec.dim();
  std::vector<Eigen::VectorXd> out;
  out.reserve(n);

  switch (spec.kind) {
    case MixingKind::PointMass:
      for (int i = 0; i < n; ++i) out.push_back(spec.mu);
      break;

    case MixingKind::PndBeta:
      for (int i = 0; i < n; ++i) {
        Eigen::VectorXd y = spec.mu + rng.normal_vector(r);
        double norm = y.norm();
        while (norm < 1e-300) {  // essentially impossible, but keep the ratio defined
          y = spec.mu + rng.normal_vector(r);
          norm = y.norm();
        }
        const double radius = rng.beta(spec.beta_a, spec.beta_b);
        out.push_back((radius / norm) * y);
      }
      break;

    case MixingKind::RestrictedNormal: {
      const Eigen::MatrixXd chol = cholesky_factor(spec.sigma);
      for (int i = 0; i < n; ++i) {
        long attempts = 0;
        for (;;) {
          if (++attempts > max_attempts)
            throw NumericError("sample_mixing: rejection cap reached; disc mass is numerically zero");
          Eigen::VectorXd y = spec.mu + chol * rng.normal_vector(r);
          if (y.norm() <= 1.0) {
            out.push_back(std::move(y));
            break;
          }
        }
      }
      break;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Generalized chi-squared CDF.
// ---------------------------------------------------------------------------

namespace {

struct ImhofTerms {
  const Eigen::VectorXd& delta;  // weights
  const Eigen::VectorXd& b;     // noncentrality
  double y;

  double theta(double u) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < delta.size(); ++j) {
      const double du = delta(j) * u;
      s += std::atan(du) + b(j) * b(j) * du / (1.0 + du * du);
    }
    return 0.5 * s - 0.5 * u * y;
  }

  double theta_deriv(double u) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < delta.size(); ++j) {
      const double d = delta(j);
      const double t = 1.0 + d * d * u * u;
      s += d / t + b(j) * b(j) * d * (1.0 - d * d * u * u) / (t * t);
    }
    return 0.5 * s - 0.5 * y;
  }

  double log_rho(double u) const {
    double s = 0.0;
    for (Eigen::Index j = 0; j < delta.size(); ++j) {
      const double du = delta(j) * u;
      s += 0.25 * std::log1p(du * du) + 0.5 * (b(j) * du) * (b(j) * du) / (1.0 + du * du);
    }
    return s;
  }

  double integrand(double u) const {
    if (u == 0.0) {
      // Limit u -> 0: sin(theta)/(u rho) -> (sum delta_j (1 + b_j^2) - y) / 2.
      double mean = 0.0;
      for (Eigen::Index j = 0; j < delta.size(); ++j) mean += delta(j) * (1.0 + b(j) * b(j));
      return 0.5 * (mean - y);
    }
    return std::sin(theta(u)) * std::exp(-log_rho(u)) / u;
  }
};

double adaptive_simpson_rec(const ImhofTerms& f, double a, double b, double fa, double fm,
                            double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f.integrand(lm);
  const double frm = f.integrand(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0) throw NumericError("gchisq_cdf: adaptive quadrature depth exhausted");
  if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const ImhofTerms& f, double a, double b, double tol) {
  const double fa = f.integrand(a);
  const double fb = f.integrand(b);
  const double fm = f.integrand(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// 15-point Gauss-Legendre rule on [-1, 1].
constexpr int kGlN = 15;
constexpr double kGlX[kGlN] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272, -0.7244177313601700,
    -0.5709721726085388, -0.3941513470775634, -0.2011940939974345, 0.0,
    0.2011940939974345,  0.3941513470775634,  0.5709721726085388,  0.7244177313601700,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
constexpr double kGlW[kGlN] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719, 0.1395706779261543,
    0.1662692058169939, 0.1861610000155622, 0.1984314853271116, 0.2025782419255613,
    0.1984314853271116, 0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

double gauss_legendre(const ImhofTerms& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < kGlN; ++i) s += kGlW[i] * f.integrand(c + h * kGlX[i]);
  return h * s;
}

// Root of theta(u) = target on [lo, inf) where theta is strictly decreasing
// with derivative magnitude in [y/4, 3y/4].
double phase_root(const ImhofTerms& f, double lo, double theta_lo, double target) {
  double hi = lo + (theta_lo - target) / (0.25 * f.y);
  double theta_hi = f.theta(hi);
  int guard = 0;
  while (theta_hi > target) {  // only round-off should land here
    hi += (theta_hi - target) / (0.25 * f.y) + 1e-12 * hi;
    theta_hi = f.theta(hi);
    if (++guard > 64) throw NumericError("gchisq_cdf: tail phase bracketing failed");
  }
  double a = lo, bnd = hi;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (a + bnd);
    if (f.theta(mid) > target)
      a = mid;
    else
      bnd = mid;
  }
  return 0.5 * (a + bnd);
}

// Sums the alternating half-period contributions past u = start using
// iterated averaging of the partial sums.
double imhof_tail(const ImhofTerms& f, double start, double abs_tol) {
  const double theta_start = f.theta(start);
  double target = std::floor(theta_start / kPi) * kPi;
  if (target >= theta_start) target -= kPi;

  double u_prev = phase_root(f, start, theta_start, target);
  double total = gauss_legendre(f, start, u_prev);

  std::vector<double> partial;
  partial.reserve(4096);
  double sum = 0.0;
  double prev_estimate = std::numeric_limits<double>::infinity();
  constexpr int kMaxSegments = 200000;
  for (int k = 0; k < kMaxSegments; ++k) {
    target -= kPi;
    const double u_next = phase_root(f, u_prev, target + kPi, target);
    const double z = gauss_legendre(f, u_prev, u_next);
    u_prev = u_next;
    sum += z;
    partial.push_back(sum);

    if (std::abs(z) < 0.1 * abs_tol && partial.size() >= 4) return total + sum;

    if (partial.size() >= 8) {
      // Euler transform on the most recent partial sums.
      const std::size_t m = std::min<std::size_t>(partial.size(), 24);
      std::vector<double> row(partial.end() - m, partial.end());
      while (row.size() > 1) {
        for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
        row.pop_back();
      }
      const double estimate = row[0];
      if (std::abs(estimate - prev_estimate) < 0.1 * abs_tol) return total + estimate;
      prev_estimate = estimate;
    }
  }
  throw NumericError("gchisq_cdf: oscillatory tail did not converge at the configured tolerance");
}

}  // namespace

double gchisq_cdf(const GeneralizedChiSq& g, double y, double abs_tol) {
  g.validate();
  if (y < 0.0) throw ValidationError("gchisq_cdf: y must be nonnegative");
  if (y < 1e-14) return 0.0;

  const ImhofTerms f{g.weights, g.noncentrality, y};

  // Past u_star the phase decreases at a rate between y/4 and 3y/4, so the
  // integrand oscillates with bounded period and the tail can be summed by
  // half-periods.
  double scale = 0.0;
  for (Eigen::Index j = 0; j < g.weights.size(); ++j)
    scale += (1.0 + g.noncentrality(j) * g.noncentrality(j)) / g.weights(j);
  const double u_star = std::sqrt(2.0 * scale / y);

  const double bulk = adaptive_simpson(f, 0.0, u_star, 0.25 * abs_tol);
  const double tail = imhof_tail(f, u_star, abs_tol);
  const double cdf = 0.5 - (bulk + tail) / kPi;
  return std::clamp(cdf, 0.0, 1.0);
}

double disc_probability(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
  if (sigma.rows() != mu.size() || sigma.cols() != mu.size())
    throw ValidationError("disc_probability: dimension mismatch");
  const SymEigen e = sym_eigen_desc(0.5 * (sigma + sigma.transpose()));
  if (e.values.minCoeff() <= 0.0)
    throw ValidationError("disc_probability: sigma is not positive definite");
  GeneralizedChiSq g;
  g.weights = e.values;
  g.noncentrality = e.values.cwiseSqrt().cwiseInverse().asDiagonal() * (e.vectors.transpose() * mu);
  return gchisq_cdf(g, 1.0);
}

double mvn_logpdf(const Eigen::VectorXd& y, const Eigen::VectorXd& mu,
                  const Eigen::MatrixXd& sigma) {
  const Eigen::Index r = y.size();
  const Eigen::MatrixXd chol = cholesky_factor(sigma);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < r; ++i) log_det += 2.0 * std::log(chol(i, i));
  const Eigen::VectorXd w = chol.triangularView<Eigen::Lower>().solve(y - mu);
  return -0.5 * (r * std::log(2.0 * kPi) + log_det + w.squaredNorm());
}

double restricted_normal_logpdf(const MixingSpec& spec, const Eigen::VectorXd& y) {
  if (spec.kind != MixingKind::RestrictedNormal)
    throw ValidationError("restricted_normal_logpdf: spec is not a restricted normal");
  spec.validate();
  if (y.size() != spec.mu.size())
    throw ValidationError("restricted_normal_logpdf: dimension mismatch");
  if (y.norm() > 1.0) return -std::numeric_limits<double>::infinity();
  const double p = std::max(disc_probability(spec.mu, spec.sigma), 1e-300);
  return mvn_logpdf(y, spec.mu, spec.sigma) - std::log(p);
}

}  // namespace cdfm
