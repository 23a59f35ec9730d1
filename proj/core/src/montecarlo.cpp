#include "qgcnet/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <tbb/parallel_for.h>

#include "qgcnet/qreg.hpp"
#include "qgcnet/stats.hpp"

namespace qgc {

double LambdaRule::at(Index n) const {
  if (kind == Kind::Zero) return 0.0;
  return scale * std::pow(static_cast<double>(n), -exponent);
}

double QVARScenario::density_at_zero() const {
  return stats::normal_pdf(stats::normal_quantile(tau));
}

Matrix QVARScenario::omega0() const {
  // vec(S) = (I - A kron A)^-1 vec(Q)
  const Index p = var_coef.rows();
  Matrix kron(p * p, p * p);
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) kron.block(i * p, j * p, p, p) = var_coef(i, j) * var_coef;
  }
  const Matrix lhs = Matrix::Identity(p * p, p * p) - kron;
  const Vector vec_q = Eigen::Map<const Vector>(var_innovation_cov.data(), p * p);
  const Vector vec_s = lhs.partialPivLu().solve(vec_q);
  Matrix s = Eigen::Map<const Matrix>(vec_s.data(), p, p);
  return (s + s.transpose()) / 2.0;
}

void validate(const QVARScenario& scenario) {
  check_tau(scenario.tau);
  const Index p = scenario.beta_star.size();
  if (p < 1 || scenario.var_coef.rows() != p || scenario.var_coef.cols() != p ||
      scenario.var_innovation_cov.rows() != p || scenario.var_innovation_cov.cols() != p) {
    throw Error(Errc::DimensionMismatch, "scenario dimensions disagree");
  }
  if (scenario.n < 1 || scenario.burn_in < 0) {
    throw Error(Errc::InvalidConfig, "scenario needs n >= 1 and burn-in >= 0");
  }
  const Eigen::EigenSolver<Matrix> eig(scenario.var_coef);
  if (eig.eigenvalues().cwiseAbs().maxCoeff() >= 1.0) {
    throw Error(Errc::UnstableVAR, "covariate VAR spectral radius must be below 1");
  }
  const Eigen::LLT<Matrix> llt(scenario.var_innovation_cov);
  if (llt.info() != Eigen::Success) {
    throw Error(Errc::InvalidConfig, "VAR innovation covariance must be positive definite");
  }
  if (scenario.lambda_rule.kind == LambdaRule::Kind::Power &&
      (scenario.lambda_rule.scale < 0.0 || !(scenario.lambda_rule.exponent > 0.5))) {
    throw Error(Errc::InvalidConfig, "lambda rule must be nonnegative and o(n^-1/2)");
  }
}

QVARScenario default_scenario(double tau, Index n) {
  QVARScenario s;
  s.tau = tau;
  s.n = n;
  s.beta_star = Vector(3);
  s.beta_star << 0.5, -0.3, 0.2;
  s.var_coef = Matrix(3, 3);
  s.var_coef << 0.5, 0.1, 0.0,
                0.0, 0.3, 0.2,
                0.1, 0.0, 0.4;
  // Covariates on a large scale keep sqrt(n) lambda_n Omega0^{-1/2} small.
  s.var_innovation_cov = 100.0 * Matrix::Identity(3, 3);
  s.var_innovation_cov(0, 1) = s.var_innovation_cov(1, 0) = 30.0;
  return s;
}

QVARSample simulate_qvar(const QVARScenario& scenario, std::uint64_t seed) {
  validate(scenario);
  const Index p = scenario.beta_star.size();
  const Matrix chol = scenario.var_innovation_cov.llt().matrixL();
  const double shift = stats::normal_quantile(scenario.tau);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x = Vector::Zero(p);
  Vector e(p);
  QVARSample out{Matrix(scenario.n, p), Vector(scenario.n)};
  for (Index t = -scenario.burn_in; t < scenario.n; ++t) {
    for (Index i = 0; i < p; ++i) e(i) = normal(rng);
    x = scenario.var_coef * x + chol * e;
    const double xi = normal(rng) - shift;
    if (t >= 0) {
      out.design.row(t) = x.transpose();
      out.response(t) = x.dot(scenario.beta_star) + xi;
    }
  }
  return out;
}

bool LimitCheckReport::normality_ok(double level) const {
  return std::all_of(ks_p_values.begin(), ks_p_values.end(), [&](double p) { return p > level; });
}

bool LimitCheckReport::mean_ok() const {
  return z_mean.cwiseAbs().maxCoeff() <= mean_bound;
}

LimitCheckReport empirical_limit_check(const QVARScenario& scenario, Index n_reps, std::uint64_t seed) {
  validate(scenario);
  if (n_reps < 200) {
    throw Error(Errc::InvalidConfig, "the limit check needs at least 200 replicates");
  }
  const Index p = scenario.beta_star.size();
  const double lambda = scenario.lambda_rule.at(scenario.n);
  const double f0 = scenario.density_at_zero();
  const Eigen::SelfAdjointEigenSolver<Matrix> eig(scenario.omega0());
  const Matrix omega_half = eig.operatorSqrt();
  const double scale = std::sqrt(static_cast<double>(scenario.n)) * f0;

  LimitCheckReport report;
  report.n = scenario.n;
  report.n_reps = n_reps;
  report.tau = scenario.tau;
  report.lambda = lambda;
  report.z = Matrix(n_reps, p);
  std::vector<double> errors(static_cast<std::size_t>(n_reps));

  tbb::parallel_for(Index{0}, n_reps, [&](Index r) {
    const QVARSample sample = simulate_qvar(scenario, derive_seed(seed, static_cast<std::uint64_t>(r)));
    const QuantileFit fit = solve_qr_lasso({sample.design, sample.response, scenario.tau, lambda});
    const Vector diff = fit.coefficients - scenario.beta_star;
    report.z.row(r) = (scale * omega_half * diff).transpose();
    errors[r] = diff.norm();
  });

  report.z_mean = report.z.colwise().mean().transpose();
  const Matrix centered = report.z.rowwise() - report.z_mean.transpose();
  report.z_cov = centered.transpose() * centered / static_cast<double>(n_reps - 1);
  const double target = scenario.tau * (1.0 - scenario.tau);
  const Matrix ideal = target * Matrix::Identity(p, p);
  report.cov_relative_error = (report.z_cov - ideal).norm() / ideal.norm();
  for (Index j = 0; j < p; ++j) {
    const Vector col = report.z.col(j);
    report.ks_p_values.push_back(
        stats::ks_test_normal({col.data(), static_cast<std::size_t>(col.size())}, 0.0, std::sqrt(target)).p_value);
  }
  std::nth_element(errors.begin(), errors.begin() + static_cast<long>(errors.size() / 2), errors.end());
  report.median_error = errors[errors.size() / 2];
  report.mean_bound = 4.0 * std::sqrt(target / static_cast<double>(n_reps));
  return report;
}

}  // namespace qgc
