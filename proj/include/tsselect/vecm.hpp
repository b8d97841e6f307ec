#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "tsselect/dgp.hpp"
#include "tsselect/errors.hpp"
#include "tsselect/regress.hpp"

namespace tsselect {

/// Rank-one VECM for X = (Y, Z)':
///   dX_t = Phi + alpha [rho, beta'] (1, X_{t-1})' + sum_k Gamma_k dX_{t-k} + w_t
/// With drift the constant is unrestricted (Phi present, rho absent); without drift it
/// sits inside the cointegrating vector (rho present, Phi absent).
struct VecmFit {
  Eigen::Vector2d alpha = Eigen::Vector2d::Zero();
  Eigen::VectorXd beta_rho;  // (1, beta_z[, rho]); coefficient on Y normalised to one
  double c1 = 0, c2 = 0;     // Y_{t-1} - (c1 + c2 Z_{t-1}) equals beta_rho' (X_{t-1}, 1)
  std::vector<Eigen::Matrix2d> gammas;
  std::optional<Eigen::Vector2d> phi;
  int k_star = 0;
  bool drift = false;
  Eigen::VectorXd eigenvalues;  // descending, in [0, 1)
  double trace_statistic = 0;   // rank 0 against rank 2
  Eigen::MatrixXd fitted_dx;    // T x 2, Lambda Omega_t + Pi r_t
  Eigen::MatrixXd residuals;    // T x 2
  int t_obs = 0;
};

namespace detail {

/// Regressor blocks on t = 1..T: lagged differences (and a constant when drift) in Z2,
/// levels (and a constant when no drift) in Z1.
inline void vecm_blocks(const SeriesPair& d, int k, bool drift, Eigen::MatrixXd& Z0,
                        Eigen::MatrixXd& Z1, Eigen::MatrixXd& Z2) {
  const int T = d.sample_len;
  Z0.resize(T, 2);
  Z1.resize(T, drift ? 2 : 3);
  Z2.resize(T, 2 * k + (drift ? 1 : 0));
  for (int t = 1; t <= T; ++t) {
    const int r = t - 1;
    Z0(r, 0) = d.dY(t);
    Z0(r, 1) = d.dZ(t);
    Z1(r, 0) = d.Y(t - 1);
    Z1(r, 1) = d.Z(t - 1);
    if (!drift) Z1(r, 2) = 1.0;
    for (int j = 1; j <= k; ++j) {
      Z2(r, 2 * (j - 1)) = d.dY(t - j);
      Z2(r, 2 * (j - 1) + 1) = d.dZ(t - j);
    }
    if (drift) Z2(r, 2 * k) = 1.0;
  }
}

/// Coefficients B (cols(A) x cols(Y)) of Y on A by QR; zero-column A gives an empty B.
inline Eigen::MatrixXd ls_coefficients(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Y) {
  if (A.cols() == 0) return Eigen::MatrixXd(0, Y.cols());
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  if (qr.rank() < A.cols()) throw rank_deficient_error(static_cast<std::size_t>(qr.rank()), "VECM: short-run regressors are collinear");
  return qr.solve(Y);
}

}  // namespace detail

/// Reduced-rank regression: partial Z2 out of dX and of the cointegrating block, solve
/// |lambda S11 - S10 S00^{-1} S01| = 0 via the Cholesky factor of S11, keep the leading
/// eigenvector as the cointegrating vector.
inline VecmFit reduced_rank_vecm(const SeriesPair& d, int k_star, bool drift) {
  if (k_star < 0 || k_star > 2) throw std::invalid_argument("reduced_rank_vecm: k_star must be 0, 1 or 2");
  if (d.presample_len < k_star + 1) throw std::invalid_argument("reduced_rank_vecm: not enough presample lags");
  Eigen::MatrixXd Z0, Z1, Z2;
  detail::vecm_blocks(d, k_star, drift, Z0, Z1, Z2);
  const int T = d.sample_len;

  const Eigen::MatrixXd Lambda = detail::ls_coefficients(Z2, Z0);  // Z2 -> dX
  const Eigen::MatrixXd B = detail::ls_coefficients(Z2, Z1);       // Z2 -> levels block
  const Eigen::MatrixXd R0 = Z2.cols() ? Eigen::MatrixXd(Z0 - Z2 * Lambda) : Z0;
  const Eigen::MatrixXd R1 = Z2.cols() ? Eigen::MatrixXd(Z1 - Z2 * B) : Z1;

  const double invT = 1.0 / T;
  const Eigen::MatrixXd S00 = invT * R0.transpose() * R0;
  const Eigen::MatrixXd S01 = invT * R0.transpose() * R1;
  const Eigen::MatrixXd S11 = invT * R1.transpose() * R1;

  Eigen::LLT<Eigen::MatrixXd> l11(S11);
  Eigen::LLT<Eigen::MatrixXd> l00(S00);
  if (l11.info() != Eigen::Success || l00.info() != Eigen::Success)
    throw numerical_error("VECM: moment matrix not positive definite");
  const Eigen::MatrixXd L = l11.matrixL();
  // C = L^{-1} S10 S00^{-1} S01 L^{-T}, symmetric.
  const Eigen::MatrixXd A = L.triangularView<Eigen::Lower>().solve(S01.transpose());
  const Eigen::MatrixXd C = A * l00.solve(A.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (C + C.transpose()));
  if (es.info() != Eigen::Success) throw numerical_error("VECM: eigen solver did not converge");

  const Eigen::Index m = C.rows();
  VecmFit f;
  f.k_star = k_star;
  f.drift = drift;
  f.t_obs = T;
  f.eigenvalues.resize(m);
  for (Eigen::Index i = 0; i < m; ++i)
    f.eigenvalues[i] = std::clamp(es.eigenvalues()[m - 1 - i], 0.0, 1.0 - 1e-12);
  f.trace_statistic = 0;
  for (Eigen::Index i = 0; i < 2; ++i) f.trace_statistic -= T * std::log(1.0 - f.eigenvalues[i]);

  Eigen::VectorXd v = L.transpose().triangularView<Eigen::Upper>().solve(es.eigenvectors().col(m - 1));
  if (std::abs(v[0]) < 1e-300) throw numerical_error("VECM: cointegrating vector has no weight on Y");
  v /= v[0];
  f.beta_rho = v;
  f.c2 = -v[1];
  f.c1 = drift ? 0.0 : -v[2];

  // alpha = S01 b (b' S11 b)^{-1}
  f.alpha = S01 * v / v.dot(S11 * v);
  const Eigen::MatrixXd Pi = f.alpha * v.transpose();  // 2 x cols(Z1)
  f.fitted_dx = R1 * Pi.transpose();
  if (Z2.cols()) f.fitted_dx += Z2 * Lambda;
  f.residuals = Z0 - f.fitted_dx;

  // Short-run coefficients of the restricted model: Lambda - B Pi'.
  if (Z2.cols()) {
    const Eigen::MatrixXd G = Lambda - B * Pi.transpose();  // cols(Z2) x 2
    for (int j = 0; j < k_star; ++j) f.gammas.push_back(G.middleRows(2 * j, 2).transpose());
    if (drift) f.phi = G.row(2 * k_star).transpose();
  }
  return f;
}

}  // namespace tsselect
