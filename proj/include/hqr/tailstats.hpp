#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "hqr/quantreg.hpp"

namespace hqr::tailstats {

enum class TaperKind { bartlett, flat_top, truncated };

// Lag-window weights w(l/b). bandwidth == 0 means "choose ceil(n^{1/3}) at
// use time".
struct TaperSpec {
  TaperKind kind = TaperKind::flat_top;
  int bandwidth = 0;
};

double taper_weight(const TaperSpec& taper, int lag);
int default_bandwidth(Eigen::Index n);
TaperSpec resolve_taper(TaperSpec taper, Eigen::Index n);

// Siddiqui difference-quotient estimate of the residual density at the fitted
// quantile: 2h / (q_{tau+h} - q_{tau-h}) on the empirical quantile function.
double sparsity_at_level(const Eigen::VectorXd& residuals, double level,
                         std::optional<double> bandwidth = {});

// Tail scale (n*alpha)^{1/2} f(0) / alpha.
double tau_hat(Eigen::Index n, double alpha, double sparsity);

// Sample Pearson correlation of (I1_i, I2_{i+lag}) over the overlapping range.
double cross_correlation(const Eigen::VectorXd& I1, const Eigen::VectorXd& I2, int lag);

// Truncated design cross-product n^{-1} sum_i z_i z_{i+lag}'.
Eigen::MatrixXd upsilon(const Eigen::MatrixXd& Z, int lag);

// Precomputed upsilon matrices for |lag| <= max_lag on a fixed design.
class UpsilonCache {
 public:
  UpsilonCache() = default;
  UpsilonCache(const Eigen::MatrixXd& Z, int max_lag);
  const Eigen::MatrixXd& get(int lag) const;
  int max_lag() const { return max_lag_; }

 private:
  int max_lag_ = -1;
  std::vector<Eigen::MatrixXd> by_lag_;  // index lag + max_lag
};

// Tapered long-run covariance sum_{|l|<=b} w(l/b) rho(l) upsilon(l).
Eigen::MatrixXd tapered_gamma(const Eigen::VectorXd& I1, const Eigen::VectorXd& I2,
                              const Eigen::MatrixXd& Z, const TaperSpec& taper);
Eigen::MatrixXd tapered_gamma(const Eigen::VectorXd& I1, const Eigen::VectorXd& I2,
                              const UpsilonCache& ups, const TaperSpec& taper);

struct LongRunCovPair {
  Eigen::MatrixXd gamma_11, gamma_12, gamma_21, gamma_22;
  TaperSpec taper;
  std::pair<double, double> levels;  // tail masses (alpha1, alpha2)
};

LongRunCovPair long_run_cov_pair(const Eigen::VectorXd& I1, const Eigen::VectorXd& I2,
                                 const Eigen::MatrixXd& Z, TaperSpec taper,
                                 double alpha1, double alpha2);
LongRunCovPair long_run_cov_pair(const Eigen::VectorXd& I1, const Eigen::VectorXd& I2,
                                 const UpsilonCache& ups, const TaperSpec& taper,
                                 double alpha1, double alpha2);

// Contrast selecting all coefficients except the first (the intercept).
Eigen::MatrixXd contrast_matrix(int p);

// A Sigma^{-1/2} { tau1^{-2} G11 - tau1^{-1} tau2^{-1} (G12 + G21)
//                  + tau2^{-2} G22 } Sigma^{-1/2} A'. Not symmetrized.
Eigen::MatrixXd phi_matrix(const Eigen::MatrixXd& A, const quantreg::DesignContext& ctx,
                           double tau1, double tau2, const LongRunCovPair& cov);

}  // namespace hqr::tailstats
