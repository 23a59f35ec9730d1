#pragma once

#include <cstdint>
#include <vector>

#include "qgcnet/core.hpp"

namespace qgc {

struct LambdaRule {
  enum class Kind { Zero, Power };
  Kind kind = Kind::Zero;
  double scale = 0.0;
  /// lambda_n = scale * n^-exponent; exponent > 0.5 keeps lambda_n = o(n^-1/2).
  double exponent = 0.6;

  double at(Index n) const;
};

/// y_t = x_t' beta* + xi_t with x_t a stable VAR(1) and xi_t = e_t - Phi^-1(tau),
/// e_t ~ N(0,1), so that the tau-quantile of xi is exactly 0.
struct QVARScenario {
  Vector beta_star;
  double tau = 0.5;
  Matrix var_coef;
  Matrix var_innovation_cov;
  Index n = 2000;
  LambdaRule lambda_rule;
  Index burn_in = 1000;

  /// Innovation density at its tau-quantile, phi(Phi^-1(tau)).
  double density_at_zero() const;
  /// Stationary covariance E[x x'] of the covariate VAR.
  Matrix omega0() const;
};

/// Errors: UnstableVAR, DimensionMismatch, InvalidTau.
void validate(const QVARScenario& scenario);

/// Reference scenario: p = 3 covariates with a stable, cross-coupled VAR.
QVARScenario default_scenario(double tau = 0.2, Index n = 2000);

struct QVARSample {
  Matrix design;
  Vector response;
};

QVARSample simulate_qvar(const QVARScenario& scenario, std::uint64_t seed);

struct LimitCheckReport {
  Index n = 0;
  Index n_reps = 0;
  double tau = 0.0;
  double lambda = 0.0;
  /// Z_r = sqrt(n) f(0) Omega0^{1/2} (beta_hat_r - beta*), one row per replicate.
  Matrix z;
  Vector z_mean;
  Matrix z_cov;
  /// ||cov(Z) - tau(1-tau) I||_F / ||tau(1-tau) I||_F.
  double cov_relative_error = 0.0;
  std::vector<double> ks_p_values;
  /// Median ||beta_hat - beta*||_2 over replicates.
  double median_error = 0.0;
  double mean_bound = 0.0;

  bool covariance_ok(double tolerance = 0.15) const { return cov_relative_error < tolerance; }
  bool normality_ok(double level = 0.01) const;
  bool mean_ok() const;
};

/// Fits the penalized quantile regression on n_reps independent samples.
/// Requires n_reps >= 200.
LimitCheckReport empirical_limit_check(const QVARScenario& scenario, Index n_reps, std::uint64_t seed);

}  // namespace qgc
