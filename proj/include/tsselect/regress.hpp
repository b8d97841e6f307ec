#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "tsselect/dgp.hpp"
#include "tsselect/errors.hpp"
#include "tsselect/taxonomy.hpp"

namespace tsselect {

struct RegressionFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd residuals;
  double rss = 0;
  int t_obs = 0;
  int c_count = 0;  // free coefficients, +2 when an estimated cointegrating vector feeds the model
  Eigen::VectorXd hat_diagonals;
  Eigen::MatrixXd coeff_covariance_scale;  // (X'X)^{-1}
  double sigma2_unbiased = 0;              // rss / (t_obs - c_count)

  int n_regressors() const { return static_cast<int>(coefficients.size()); }

  /// Residual variance on the regression's own degrees of freedom, rss / (T - k).
  double s2() const { return rss / (t_obs - n_regressors()); }

  double std_error(int j) const {
    return std::sqrt(s2() * coeff_covariance_scale(j, j));
  }
  double t_ratio(int j) const { return coefficients[j] / std_error(j); }
};

/// OLS by Householder QR.
///
/// Column j is rejected as dependent when |R_jj| <= 64 max(T, k) eps ||x_j||, i.e. when
/// less than that fraction of the column survives projection on the columns before it.
/// Hat diagonals are the squared row norms of the thin Q factor.
inline RegressionFit least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
  const auto T = X.rows();
  const auto k = X.cols();
  if (y.size() != T) throw std::invalid_argument("least_squares: response length mismatch");
  if (T <= k) throw std::invalid_argument("least_squares: need more observations than regressors");

  RegressionFit f;
  f.t_obs = static_cast<int>(T);
  f.c_count = static_cast<int>(k);
  if (k == 0) {
    f.residuals = y;
    f.rss = y.squaredNorm();
    f.hat_diagonals = Eigen::VectorXd::Zero(T);
    f.sigma2_unbiased = f.rss / static_cast<double>(T);
    return f;
  }

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  const auto& qrm = qr.matrixQR();
  const double tol = 64.0 * static_cast<double>(std::max(T, k)) * std::numeric_limits<double>::epsilon();
  for (Eigen::Index j = 0; j < k; ++j) {
    const double scale = X.col(j).norm();
    if (!(std::abs(qrm(j, j)) > tol * scale)) {
      throw rank_deficient_error(static_cast<std::size_t>(j),
                                 "regressor column " + std::to_string(j) +
                                     " is linearly dependent on earlier columns");
    }
  }
  const auto R = qrm.topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(T, k);
  f.coefficients = R.solve(Q.transpose() * y);
  f.residuals = y - X * f.coefficients;
  f.rss = f.residuals.squaredNorm();
  f.hat_diagonals = Q.rowwise().squaredNorm();
  const Eigen::MatrixXd Rinv = R.solve(Eigen::MatrixXd::Identity(k, k));
  f.coeff_covariance_scale = Rinv * Rinv.transpose();
  f.sigma2_unbiased = f.rss / static_cast<double>(T - k);
  return f;
}

/// Y_{t-1} - (c1 + c2 Z_{t-1}) uses these estimates.
struct CointVector {
  double c1 = 0;
  double c2 = 0;
};

enum class CointSource { model_11_00, engle_granger_stage1 };

/// Regression of Y_t on (1, Z_t). model_11_00 uses the sample t = 1..T; the Engle-Granger
/// stage 1 also uses the three presample observations that serve as lags.
inline CointVector cointegrating_vector(const SeriesPair& d, CointSource src,
                                        RegressionFit* fit_out = nullptr) {
  const int first = src == CointSource::model_11_00 ? 1 : -2;
  const int n = d.sample_len - first + 1;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int r = 0; r < n; ++r) {
    const int t = first + r;
    X(r, 0) = 1.0;
    X(r, 1) = d.Z(t);
    y[r] = d.Y(t);
  }
  RegressionFit f = least_squares(X, y);
  CointVector cv{f.coefficients[0], f.coefficients[1]};
  if (fit_out) *fit_out = std::move(f);
  return cv;
}

/// Value of a regressor role at sample time t.
inline double role_value(Role r, const SeriesPair& d, int t, const CointVector& cv) {
  switch (r) {
    case Role::Intercept: return 1.0;
    case Role::Trend: return static_cast<double>(t);
    case Role::YLag: return d.Y(t - 1);
    case Role::DY1: return d.dY(t - 1);
    case Role::DY2: return d.dY(t - 2);
    case Role::ZLevel: return d.Z(t);
    case Role::DZ: return d.dZ(t);
    case Role::DZ1: return d.dZ(t - 1);
    case Role::DZ2: return d.dZ(t - 2);
    case Role::EC: return d.Y(t - 1) - (cv.c1 + cv.c2 * d.Z(t - 1));
  }
  return 0.0;
}

/// Rows t = 1..T, one column per role.
inline Eigen::MatrixXd design_matrix(const std::vector<Role>& roles, const SeriesPair& d,
                                     const CointVector& cv = {}) {
  if (d.presample_len < 3) throw std::invalid_argument("design_matrix: need three presample lags");
  Eigen::MatrixXd X(d.sample_len, static_cast<Eigen::Index>(roles.size()));
  for (std::size_t j = 0; j < roles.size(); ++j)
    for (int t = 1; t <= d.sample_len; ++t)
      X(t - 1, static_cast<Eigen::Index>(j)) = role_value(roles[j], d, t, cv);
  return X;
}

/// dY_t minus the model's fixed terms, t = 1..T.
inline Eigen::VectorXd model_response(const ModelSpec& m, const SeriesPair& d) {
  Eigen::VectorXd y(d.sample_len);
  for (int t = 1; t <= d.sample_len; ++t) {
    double v = d.dY(t);
    for (const auto& f : m.fixed_terms) v -= f.coefficient * role_value(f.role, d, t, {});
    y[t - 1] = v;
  }
  return y;
}

inline RegressionFit fit_model(const ModelSpec& m, const SeriesPair& d, const CointVector& cv) {
  RegressionFit f;
  try {
    f = least_squares(design_matrix(m.free_coeffs, d, cv), model_response(m, d));
  } catch (const rank_deficient_error& e) {
    const Role r = m.free_coeffs[e.column()];
    throw rank_deficient_error(e.column(), "model " + m.id.to_string() + ": regressor " +
                                               role_name(r) + " is linearly dependent on the others");
  }
  if (m.has_cointegration) {
    f.c_count += 2;
    f.sigma2_unbiased = f.rss / static_cast<double>(f.t_obs - f.c_count);
  }
  return f;
}

inline RegressionFit fit_model(const ModelSpec& m, const SeriesPair& d,
                               CointSource src = CointSource::model_11_00) {
  return fit_model(m, d, m.has_cointegration ? cointegrating_vector(d, src) : CointVector{});
}

/// Second Cochrane-Orcutt step for a given rho: quasi-difference and refit on rows 2..T.
inline RegressionFit quasi_difference_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double rho) {
  const Eigen::Index T = y.size();
  const Eigen::MatrixXd Xs = X.bottomRows(T - 1) - rho * X.topRows(T - 1);
  const Eigen::VectorXd ys = y.tail(T - 1) - rho * y.head(T - 1);
  return least_squares(Xs, ys);
}

/// Two-step Cochrane-Orcutt: rho from e_t on e_{t-1}, quasi-difference response and regressors,
/// drop the first observation, refit. The returned fit has T - 1 observations.
inline RegressionFit cochrane_orcutt(const ModelSpec& m, const SeriesPair& d, const CointVector& cv,
                                     double* rho_out = nullptr) {
  const Eigen::MatrixXd X = design_matrix(m.free_coeffs, d, cv);
  const Eigen::VectorXd y = model_response(m, d);
  const RegressionFit ols = least_squares(X, y);
  const Eigen::Index T = y.size();
  const auto& e = ols.residuals;
  const double den = e.head(T - 1).squaredNorm();
  const double rho = den > 0 ? e.tail(T - 1).dot(e.head(T - 1)) / den : 0.0;
  if (rho_out) *rho_out = rho;
  if (!(std::abs(rho) < 1.0)) throw explosive_residual_error(rho);
  RegressionFit f = quasi_difference_fit(X, y, rho);
  if (m.has_cointegration) {
    f.c_count += 2;
    f.sigma2_unbiased = f.rss / static_cast<double>(f.t_obs - f.c_count);
  }
  return f;
}

}  // namespace tsselect
