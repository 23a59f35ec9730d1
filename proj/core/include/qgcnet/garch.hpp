#pragma once

#include <span>
#include <string>
#include <vector>

#include "qgcnet/core.hpp"

namespace qgc {

// sigma_t^2 = omega + gamma (x_{t-1} - mu)^2 + eta sigma_{t-1}^2
struct GarchParams {
  double mu = 0.0;
  double omega = 1.0;
  double gamma_arch = 0.0;
  double eta_garch = 0.0;
};

/// Throws InvalidConfig unless omega > 0, gamma, eta >= 0, gamma + eta < 1.
void check_params(const GarchParams& params);

struct FilterResult {
  GarchParams params;
  Vector sigma_path;
  /// Standardized residuals (x_t - mu) / sigma_t.
  Vector residuals;
  double log_likelihood = 0.0;
  /// Asymptotic standard errors of (mu, omega, gamma, eta) from the observed
  /// information; NaN where the Hessian is not negative definite.
  Eigen::Vector4d standard_errors = Eigen::Vector4d::Constant(std::nan(""));
};

/// Gaussian log-likelihood of the recursion started at sigma_1^2 = sample variance.
double garch_log_likelihood(std::span<const double> series, const GarchParams& params);

/// Gaussian quasi-maximum-likelihood GARCH(1,1) fit.
/// Errors: TooShort (T < 10), ConstantSeries, OptimizationFailed.
FilterResult fit_garch11(std::span<const double> series);

/// Simulates GARCH(1,1) with N(0,1) innovations after `burn_in` discarded steps.
Vector simulate_garch11(const GarchParams& params, Index length, std::uint64_t seed, Index burn_in = 500);

struct FilteredPanel {
  ReturnPanel panel;
  /// One entry per column that fell back to plain standardization.
  std::vector<std::string> warnings;
};

/// Replaces every column by its GARCH standardized residuals. Columns whose
/// fit fails are standardized as (x - mean) / sd instead.
FilteredPanel filter_panel(const ReturnPanel& panel);

}  // namespace qgc
