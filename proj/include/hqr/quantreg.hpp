#pragma once

#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "hqr/errors.hpp"

namespace hqr::quantreg {

struct SolverConfig {
  int max_iterations = 100000;
  // Slack on directional derivatives when declaring optimality, scaled by the
  // total pricing mass of the direction.
  double pricing_tol = 1e-10;
};

// Design matrix together with its Gram matrix, inverse square root and the
// rescaled rows z_i = Sigma^{-1/2} x_i (so that Z'Z/n = I).
struct DesignContext {
  Eigen::MatrixXd X;
  Eigen::MatrixXd sigma;
  Eigen::MatrixXd sigma_inv_sqrt;
  Eigen::MatrixXd Z;
  double r_n = 0.0;

  Eigen::Index n() const { return X.rows(); }
  Eigen::Index p() const { return X.cols(); }
};

struct QuantileFit {
  double level = 0.0;  // tau = 1 - alpha
  double alpha = 0.0;
  Eigen::VectorXd beta_hat;
  Eigen::VectorXd residuals;
  Eigen::VectorXd indicators;  // 1{residual > 0}
  double sparsity = std::numeric_limits<double>::quiet_NaN();
  double tau_hat = std::numeric_limits<double>::quiet_NaN();
  double loss = 0.0;
  std::vector<Eigen::Index> basis;  // observations interpolated at the vertex
};

// Asymmetric absolute loss rho_tau(u) = tau*u+ + (1-tau)*(-u)+.
double check_loss(double u, double level);

// Left derivative of the check loss: tau - 1{u <= 0}.
double psi(double u, double level);

// Inverse symmetric square root via cyclic Jacobi rotations. Throws
// not_positive_definite_error when an eigenvalue falls at or below
// 1e-12 times the largest.
Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& M);

DesignContext design_context(Eigen::MatrixXd X);

// Exact vertex solution of min_beta sum_i rho_tau(y_i - x_i'beta).
QuantileFit fit_quantile_regression(
    const DesignContext& ctx, const Eigen::VectorXd& y, double level,
    const SolverConfig& cfg = {},
    const std::vector<Eigen::Index>* warm_basis = nullptr);

}  // namespace hqr::quantreg
