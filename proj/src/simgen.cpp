#include "hqr/simgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hqr/quantreg.hpp"

namespace hqr::simgen {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw invalid_level_error("tail mass alpha must lie in (0,1)");
}

double coeff_power_sum(const std::vector<double>& coeffs, double kappa) {
  double s = 0.0;
  for (double a : coeffs) {
    if (a < 0) throw domain_error("moving-maximum coefficients must be nonnegative");
    s += std::pow(a, kappa);
  }
  return s;
}

}  // namespace

double mm_exponential_shift(double a, double alpha) {
  require_alpha(alpha);
  if (a < 0) throw domain_error("coefficient a must be nonnegative");
  const double target = 1.0 - alpha;
  auto cdf_at = [&](double b) {
    double f = 1.0 - std::exp(-b);
    if (a == 0.0) return f;
    return f * (1.0 - std::exp(-b / a));
  };
  double lo = 0.0, hi = 1.0;
  while (cdf_at(hi) < target) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (cdf_at(mid) < target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * (1.0 + hi)) break;
  }
  return 0.5 * (lo + hi);
}

double frechet_mm_quantile(const std::vector<double>& coeffs, double kappa,
                           double alpha) {
  require_alpha(alpha);
  if (kappa <= 0) throw domain_error("frechet tail index must be positive");
  double s = coeff_power_sum(coeffs, kappa);
  if (s <= 0) throw domain_error("all-zero moving-maximum coefficients");
  return std::pow(s / (-std::log1p(-alpha)), 1.0 / kappa);
}

MMProcessSpec make_exponential_mm(double a, double alpha) {
  MMProcessSpec spec;
  spec.family = MMFamily::exponential_mm;
  spec.a = a;
  spec.alpha = alpha;
  spec.shift = mm_exponential_shift(a, alpha);
  return spec;
}

MMProcessSpec make_frechet_mm(std::vector<double> coeffs, double kappa, double alpha) {
  MMProcessSpec spec;
  spec.family = MMFamily::frechet_mm;
  spec.coeffs = std::move(coeffs);
  spec.kappa = kappa;
  spec.alpha = alpha;
  spec.shift = frechet_mm_quantile(spec.coeffs, kappa, alpha);
  return spec;
}

Eigen::VectorXd simulate_mm_exponential(Eigen::Index n, double a, double alpha,
                                        RngStream& rng) {
  double b = mm_exponential_shift(a, alpha);
  Eigen::VectorXd e(n);
  double prev = rng.exponential();  // burn-in so the first value is stationary
  for (Eigen::Index i = 0; i < n; ++i) {
    double eps = rng.exponential();
    e[i] = std::max(eps, a * prev) - b;
    prev = eps;
  }
  return e;
}

Eigen::VectorXd simulate_mm_frechet(Eigen::Index n, const std::vector<double>& coeffs,
                                    double kappa, double alpha, RngStream& rng) {
  double q = frechet_mm_quantile(coeffs, kappa, alpha);
  const std::size_t L = coeffs.size();
  std::vector<double> recent(L, 0.0);  // recent[j] = eps_{i-j}
  for (std::size_t j = L; j-- > 1;) recent[j] = rng.frechet(kappa);
  Eigen::VectorXd e(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (std::size_t j = L; j-- > 1;) recent[j] = recent[j - 1];
    recent[0] = rng.frechet(kappa);
    double m = 0.0;
    for (std::size_t j = 0; j < L; ++j) m = std::max(m, coeffs[j] * recent[j]);
    e[i] = m - q;
  }
  return e;
}

Eigen::VectorXd simulate(const MMProcessSpec& spec, Eigen::Index n, RngStream& rng) {
  if (spec.family == MMFamily::exponential_mm)
    return simulate_mm_exponential(n, spec.a, spec.alpha, rng);
  return simulate_mm_frechet(n, spec.coeffs, spec.kappa, spec.alpha, rng);
}

Eigen::MatrixXd polynomial_design(Eigen::Index n, int p) {
  if (p < 1 || n < p) throw dimension_error("polynomial design requires n >= p >= 1");
  Eigen::MatrixXd X(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    double t = static_cast<double>(i + 1) / static_cast<double>(n);
    double pow_t = 1.0;
    for (int j = 0; j < p; ++j) {
      X(i, j) = pow_t;
      pow_t *= t;
    }
  }
  return X;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> trend_dataset(const TrendModelSpec& spec,
                                                          RngStream& rng) {
  Eigen::MatrixXd X = polynomial_design(spec.n, spec.p);
  Eigen::VectorXd beta(spec.p);
  beta[0] = spec.intercept;
  for (int j = 1; j < spec.p; ++j) {
    beta[j] = spec.slopes.empty() ? static_cast<double>(j + 1)
                                  : spec.slopes[static_cast<std::size_t>(j - 1)];
  }
  Eigen::VectorXd y = X * beta;
  if (spec.noise) {
    Eigen::VectorXd e = simulate(*spec.noise, spec.n, rng);
    if (!spec.hetero_scale.empty()) {
      if (static_cast<Eigen::Index>(spec.hetero_scale.size()) != spec.n)
        throw dimension_error("hetero_scale length does not match n");
      double mean = std::accumulate(spec.hetero_scale.begin(), spec.hetero_scale.end(),
                                    0.0) /
                    static_cast<double>(spec.n);
      for (Eigen::Index i = 0; i < spec.n; ++i)
        e[i] *= spec.hetero_scale[static_cast<std::size_t>(i)] / mean;
    }
    y += e;
  }
  return {std::move(X), std::move(y)};
}

double analytic_rho_mm_exp(double alpha1, double alpha2, int lag) {
  require_alpha(alpha1);
  require_alpha(alpha2);
  if (alpha1 < alpha2)
    throw domain_error("alpha1 must be the less extreme (larger) tail mass");
  lag = std::abs(lag);
  if (lag >= 2) return 0.0;
  double sd = std::sqrt(alpha1 * (1.0 - alpha1) * alpha2 * (1.0 - alpha2));
  if (lag == 0) {
    if (alpha1 == alpha2) return 1.0;
    // Joint exceedance over two thresholds of the same series is the more
    // extreme event.
    return (alpha2 - alpha1 * alpha2) / sd;
  }
  // Lag one: the two maxima share one innovation. F(b_k)^2 = 1 - alpha_k.
  double f1 = std::sqrt(1.0 - alpha1);
  double f2 = std::sqrt(1.0 - alpha2);
  double joint_cdf = f1 * f2 * std::min(f1, f2);
  double p_both = 1.0 - (1.0 - alpha1) - (1.0 - alpha2) + joint_cdf;
  return (p_both - alpha1 * alpha2) / sd;
}

double analytic_tau_mm_frechet(Eigen::Index n, double alpha, double kappa,
                               const std::vector<double>& coeffs) {
  require_alpha(alpha);
  if (n < 1 || kappa <= 0) throw domain_error("analytic tau requires n >= 1, kappa > 0");
  double s = coeff_power_sum(coeffs, kappa);
  if (s <= 0) throw domain_error("all-zero moving-maximum coefficients");
  double nl = -std::log1p(-alpha);
  return std::sqrt(static_cast<double>(n) * alpha) * kappa * (1.0 - alpha) /
         (alpha * std::pow(s, 1.0 / kappa)) * std::pow(nl, 1.0 + 1.0 / kappa);
}

double tas_bound_mm_frechet(const std::vector<double>& coeffs, double kappa, int k) {
  if (k < 0) throw domain_error("lag must be nonnegative");
  double s = coeff_power_sum(coeffs, kappa);
  if (s <= 0) throw domain_error("all-zero moving-maximum coefficients");
  if (static_cast<std::size_t>(k) >= coeffs.size()) return 0.0;
  return 2.0 * std::pow(coeffs[static_cast<std::size_t>(k)], kappa) / s;
}

Eigen::VectorXd bahadur_linear_form(const Eigen::VectorXd& e, const Eigen::VectorXd& gamma,
                                    const Eigen::MatrixXd& Z, double alpha) {
  require_alpha(alpha);
  const Eigen::Index n = e.size();
  if (gamma.size() != n || Z.rows() != n)
    throw dimension_error("bahadur_linear_form: mismatched lengths");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(Z.cols());
  const double level = 1.0 - alpha;
  for (Eigen::Index i = 0; i < n; ++i)
    out += quantreg::psi(gamma[i] * e[i], level) * Z.row(i).transpose();
  return out / std::sqrt(static_cast<double>(n) * alpha);
}

}  // namespace hqr::simgen
