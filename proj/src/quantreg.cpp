#include "hqr/quantreg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

namespace hqr::quantreg {

namespace {

void require_level(double level) {
  if (!(level > 0.0 && level < 1.0))
    throw invalid_level_error("quantile level must lie strictly inside (0,1)");
}

// Greedy volume-maximizing row selection: repeatedly pick the row with the
// largest component orthogonal to the span of the rows already chosen.
// Candidates are scanned in `order`; returns p indices or throws.
std::vector<Eigen::Index> greedy_basis(const Eigen::MatrixXd& X,
                                       const std::vector<Eigen::Index>& order) {
  const Eigen::Index p = X.cols();
  Eigen::MatrixXd R(static_cast<Eigen::Index>(0), p);  // orthonormal rows found so far
  std::vector<Eigen::Index> chosen;
  std::vector<char> used(static_cast<std::size_t>(X.rows()), 0);
  for (Eigen::Index step = 0; step < p; ++step) {
    double best_norm = 0.0;
    Eigen::Index best = -1;
    Eigen::VectorXd best_dir;
    for (Eigen::Index idx : order) {
      if (used[static_cast<std::size_t>(idx)]) continue;
      Eigen::VectorXd v = X.row(idx).transpose();
      for (Eigen::Index k = 0; k < R.rows(); ++k)
        v -= R.row(k).dot(X.row(idx)) * R.row(k).transpose();
      double nv = v.norm();
      if (nv > best_norm) {
        best_norm = nv;
        best = idx;
        best_dir = v;
      }
    }
    if (best < 0 || best_norm < 1e-12)
      throw singular_design_error("design matrix is rank deficient");
    used[static_cast<std::size_t>(best)] = 1;
    chosen.push_back(best);
    R.conservativeResize(R.rows() + 1, p);
    R.row(R.rows() - 1) = best_dir.transpose() / best_norm;
  }
  return chosen;
}

// Candidate ordering for the starting basis: observations whose least-squares
// residual is closest to the level-tau residual quantile first. Starting near
// the target quantile keeps the pivot count small.
std::vector<Eigen::Index> warm_start_order(const DesignContext& ctx,
                                           const Eigen::VectorXd& y, double level) {
  const Eigen::Index n = ctx.n();
  Eigen::MatrixXd sigma_inv = ctx.sigma_inv_sqrt * ctx.sigma_inv_sqrt;
  Eigen::VectorXd beta_ls = sigma_inv * (ctx.X.transpose() * y) / static_cast<double>(n);
  Eigen::VectorXd r = y - ctx.X * beta_ls;
  std::vector<double> sorted(r.data(), r.data() + n);
  std::sort(sorted.begin(), sorted.end());
  double pos = level * static_cast<double>(n - 1);
  double q = sorted[static_cast<std::size_t>(pos)];
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    double da = std::fabs(r[a] - q), db = std::fabs(r[b] - q);
    if (da != db) return da < db;
    return a < b;
  });
  return order;
}

}  // namespace

double check_loss(double u, double level) {
  require_level(level);
  return level * std::max(u, 0.0) + (1.0 - level) * std::max(-u, 0.0);
}

double psi(double u, double level) {
  require_level(level);
  return u <= 0.0 ? level - 1.0 : level;
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& M) {
  const Eigen::Index p = M.rows();
  if (M.cols() != p) throw dimension_error("sym_inv_sqrt expects a square matrix");
  double scale = M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + scale))
    throw dimension_error("sym_inv_sqrt expects a symmetric matrix");

  // Cyclic Jacobi sweeps until the off-diagonal mass is negligible.
  Eigen::MatrixXd A = 0.5 * (M + M.transpose());
  Eigen::MatrixXd V = Eigen::MatrixXd::Identity(p, p);
  for (int sweep = 0; sweep < 128; ++sweep) {
    double off = 0.0;
    for (Eigen::Index i = 0; i < p; ++i)
      for (Eigen::Index j = i + 1; j < p; ++j) off += A(i, j) * A(i, j);
    if (std::sqrt(off) <= 1e-12 * (1.0 + A.norm())) break;
    for (Eigen::Index q = 1; q < p; ++q) {
      for (Eigen::Index r = 0; r < q; ++r) {
        if (std::fabs(A(r, q)) <= 1e-300) continue;
        double theta = (A(q, q) - A(r, r)) / (2.0 * A(r, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        Eigen::VectorXd Ar = A.row(r), Aq = A.row(q);
        A.row(r) = c * Ar - s * Aq;
        A.row(q) = s * Ar + c * Aq;
        Eigen::VectorXd Acr = A.col(r), Acq = A.col(q);
        A.col(r) = c * Acr - s * Acq;
        A.col(q) = s * Acr + c * Acq;
        Eigen::VectorXd Vr = V.col(r), Vq = V.col(q);
        V.col(r) = c * Vr - s * Vq;
        V.col(q) = s * Vr + c * Vq;
      }
    }
  }
  Eigen::VectorXd eig = A.diagonal();
  double max_eig = eig.maxCoeff();
  if (max_eig <= 0 || eig.minCoeff() <= 1e-12 * max_eig)
    throw not_positive_definite_error(
        "matrix is not positive definite (eigenvalue ratio below 1e-12)");
  Eigen::MatrixXd result = V * eig.cwiseSqrt().cwiseInverse().asDiagonal() * V.transpose();
  return 0.5 * (result + result.transpose());
}

DesignContext design_context(Eigen::MatrixXd X) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (p < 1 || n < p) throw dimension_error("design requires n >= p >= 1");
  if (!X.allFinite()) throw domain_error("design matrix contains non-finite entries");
  DesignContext ctx;
  ctx.sigma = (X.transpose() * X) / static_cast<double>(n);
  try {
    ctx.sigma_inv_sqrt = sym_inv_sqrt(ctx.sigma);
  } catch (const not_positive_definite_error& e) {
    throw singular_design_error(std::string("singular or ill-conditioned design: ") +
                                e.what());
  }
  ctx.Z = X * ctx.sigma_inv_sqrt;
  ctx.r_n = ctx.Z.rowwise().norm().maxCoeff();
  ctx.X = std::move(X);
  return ctx;
}

QuantileFit fit_quantile_regression(const DesignContext& ctx, const Eigen::VectorXd& y,
                                    double level, const SolverConfig& cfg,
                                    const std::vector<Eigen::Index>* warm_basis) {
  require_level(level);
  const Eigen::Index n = ctx.n();
  const Eigen::Index p = ctx.p();
  if (y.size() != n) throw dimension_error("response length does not match design");

  std::vector<Eigen::Index> basis;
  if (warm_basis && static_cast<Eigen::Index>(warm_basis->size()) == p) {
    basis = *warm_basis;
  } else {
    basis = greedy_basis(ctx.X, warm_start_order(ctx, y, level));
  }

  Eigen::MatrixXd Xh(p, p);
  Eigen::VectorXd yh(p);
  auto load_basis = [&]() {
    for (Eigen::Index k = 0; k < p; ++k) {
      Xh.row(k) = ctx.X.row(basis[static_cast<std::size_t>(k)]);
      yh[k] = y[basis[static_cast<std::size_t>(k)]];
    }
  };
  load_basis();
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(Xh);

  Eigen::VectorXd beta = lu.solve(yh);
  Eigen::VectorXd r = y - ctx.X * beta;
  std::vector<char> in_basis(static_cast<std::size_t>(n), 0);
  for (Eigen::Index i : basis) {
    in_basis[static_cast<std::size_t>(i)] = 1;
    r[i] = 0.0;
  }

  Eigen::MatrixXd G(n, p);       // G.col(k) = X * Xh^{-1} e_k
  std::vector<double> break_t;   // line-search breakpoints
  std::vector<Eigen::Index> break_i;
  std::vector<std::size_t> perm;

  bool converged = false;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    G.noalias() = ctx.X * lu.solve(Eigen::MatrixXd::Identity(p, p));

    // Pricing: one-sided directional derivatives along +/- each basis
    // direction; the most negative one identifies the leaving observation.
    double best_deriv = 0.0;
    Eigen::Index best_k = -1;
    double best_sign = 1.0;
    for (Eigen::Index k = 0; k < p; ++k) {
      double d_plus = 1.0 - level;
      double d_minus = level;
      double mass = 1.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (in_basis[static_cast<std::size_t>(i)]) continue;
        double g = G(i, k);
        double ri = r[i];
        if (ri > 0.0) {
          d_plus -= g * level;
          d_minus += g * level;
        } else if (ri < 0.0) {
          d_plus -= g * (level - 1.0);
          d_minus += g * (level - 1.0);
        } else {
          d_plus += level * std::max(-g, 0.0) + (1.0 - level) * std::max(g, 0.0);
          d_minus += level * std::max(g, 0.0) + (1.0 - level) * std::max(-g, 0.0);
        }
        mass += std::fabs(g);
      }
      double tol = cfg.pricing_tol * mass;
      if (d_plus < -tol && d_plus < best_deriv) {
        best_deriv = d_plus;
        best_k = k;
        best_sign = 1.0;
      }
      if (d_minus < -tol && d_minus < best_deriv) {
        best_deriv = d_minus;
        best_k = k;
        best_sign = -1.0;
      }
    }
    if (best_k < 0) {
      converged = true;
      break;
    }

    // Piecewise-linear line search along best_sign * direction best_k: walk
    // breakpoints (residual zero crossings) until the slope turns nonnegative.
    break_t.clear();
    break_i.clear();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (in_basis[static_cast<std::size_t>(i)]) continue;
      double step_rate = best_sign * G(i, best_k);
      if (step_rate == 0.0) continue;
      double t = r[i] / step_rate;
      if (t > 0.0) {
        break_t.push_back(t);
        break_i.push_back(i);
      }
    }
    if (break_t.empty())
      throw convergence_error("descent direction without breakpoints", beta);
    perm.resize(break_t.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
      if (break_t[a] != break_t[b]) return break_t[a] < break_t[b];
      return break_i[a] < break_i[b];
    });
    double slope = best_deriv;
    Eigen::Index entering = -1;
    double t_star = 0.0;
    for (std::size_t m : perm) {
      slope += std::fabs(G(break_i[m], best_k));
      if (slope >= 0.0) {
        entering = break_i[m];
        t_star = break_t[m];
        break;
      }
    }
    if (entering < 0)
      throw convergence_error("unbounded descent in quantile LP", beta);

    Eigen::Index leaving = basis[static_cast<std::size_t>(best_k)];
    r -= (best_sign * t_star) * G.col(best_k);
    r[entering] = 0.0;
    r[leaving] = -best_sign * t_star;
    in_basis[static_cast<std::size_t>(leaving)] = 0;
    in_basis[static_cast<std::size_t>(entering)] = 1;
    basis[static_cast<std::size_t>(best_k)] = entering;
    Xh.row(best_k) = ctx.X.row(entering);
    yh[best_k] = y[entering];
    lu.compute(Xh);
    beta = lu.solve(yh);
  }
  if (!converged)
    throw convergence_error("quantile regression did not converge", beta);

  // Recompute the vertex exactly and assemble the fit.
  beta = lu.solve(yh);
  QuantileFit fit;
  fit.level = level;
  fit.alpha = 1.0 - level;
  fit.beta_hat = beta;
  fit.residuals = y - ctx.X * beta;
  for (Eigen::Index i : basis) fit.residuals[i] = 0.0;
  fit.indicators = (fit.residuals.array() > 0.0).cast<double>();
  fit.loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) fit.loss += check_loss(fit.residuals[i], level);
  fit.basis = std::move(basis);
  return fit;
}

}  // namespace hqr::quantreg
