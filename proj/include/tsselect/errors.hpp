#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsselect {

/// Base for failures that come from the numbers rather than from the caller:
/// degenerate designs, non-convergence, explosive residual processes.
class numerical_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Regressor matrix is rank deficient on this sample.
class rank_deficient_error : public numerical_error {
public:
  rank_deficient_error(std::size_t column, const std::string& what)
      : numerical_error(what), column_(column) {}

  /// Index of the first column found to be linearly dependent on earlier ones.
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// An observation with leverage one makes the leave-one-out identity undefined.
class degenerate_leverage_error : public numerical_error {
public:
  using numerical_error::numerical_error;
};

/// AR(1) residual coefficient with |rho| >= 1.
class explosive_residual_error : public numerical_error {
public:
  explicit explosive_residual_error(double rho)
      : numerical_error("residual autoregression is explosive (|rho| >= 1)"), rho_(rho) {}
  double rho() const noexcept { return rho_; }

private:
  double rho_;
};

/// A criterion formula evaluated outside its domain (model too large for T, RSS <= 0).
class criterion_domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Invalid run configuration; the CLI maps this to exit code 2.
class config_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tsselect
