#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hqr/rng.hpp"

namespace hqr::simgen {

enum class MMFamily { exponential_mm, frechet_mm };

// Moving-maximum auxiliary process, centered so that pr(e > 0) = alpha.
// The exponential family is the two-term max(eps_i, a*eps_{i-1}) variant;
// the frechet family takes a finite coefficient vector a_0..a_L.
struct MMProcessSpec {
  MMFamily family = MMFamily::exponential_mm;
  double a = 0.0;                // exponential two-term coefficient
  std::vector<double> coeffs{1.0};  // frechet coefficients
  double kappa = 1.0;            // frechet tail index
  double alpha = 0.05;
  double shift = 0.0;            // derived centering constant
};

MMProcessSpec make_exponential_mm(double a, double alpha);
MMProcessSpec make_frechet_mm(std::vector<double> coeffs, double kappa, double alpha);

// Centering shift b solving pr(max(eps_i, a*eps_{i-1}) > b) = alpha for
// unit-rate exponential innovations (bisection to 1e-12).
double mm_exponential_shift(double a, double alpha);

// (1-alpha)-quantile of max_l a_l * eps_{i-l} for Frechet(kappa) innovations.
double frechet_mm_quantile(const std::vector<double>& coeffs, double kappa, double alpha);

Eigen::VectorXd simulate_mm_exponential(Eigen::Index n, double a, double alpha,
                                        RngStream& rng);
Eigen::VectorXd simulate_mm_frechet(Eigen::Index n, const std::vector<double>& coeffs,
                                    double kappa, double alpha, RngStream& rng);
Eigen::VectorXd simulate(const MMProcessSpec& spec, Eigen::Index n, RngStream& rng);

// Polynomial trend model y_i = intercept + sum_j slopes_j t_i^{j-1} + noise_i
// on t_i = i/n. Slopes default to beta_j = j for j = 2..p.
struct TrendModelSpec {
  Eigen::Index n = 0;
  int p = 2;
  double intercept = 1.0;
  std::vector<double> slopes;               // empty => beta_j = j
  std::optional<MMProcessSpec> noise;       // nullopt => zero noise
  std::vector<double> hetero_scale;         // empty => homoskedastic
};

Eigen::MatrixXd polynomial_design(Eigen::Index n, int p);
std::pair<Eigen::MatrixXd, Eigen::VectorXd> trend_dataset(const TrendModelSpec& spec,
                                                          RngStream& rng);

// Limit indicator correlation for the a = 1 exponential moving-maximum
// process, cross quantile levels alpha1 >= alpha2, lags {0, 1} (zero beyond).
double analytic_rho_mm_exp(double alpha1, double alpha2, int lag);

// Closed-form tail scale tau_n for the Frechet moving-maximum process.
double analytic_tau_mm_frechet(Eigen::Index n, double alpha, double kappa,
                               const std::vector<double>& coeffs);

// Tail adversarial coupling bound 2 a_k^kappa / sum_l a_l^kappa.
double tas_bound_mm_frechet(const std::vector<double>& coeffs, double kappa, int k);

// (n*alpha)^{-1/2} sum_i psi_{1-alpha}(gamma_i e_i) z_i, evaluated on the true
// auxiliary values; simulation-only oracle.
Eigen::VectorXd bahadur_linear_form(const Eigen::VectorXd& e, const Eigen::VectorXd& gamma,
                                    const Eigen::MatrixXd& Z, double alpha);

}  // namespace hqr::simgen
