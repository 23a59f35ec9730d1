#include "qgcnet/linreg.hpp"

#include <algorithm>
#include <cmath>

#include "qgcnet/stats.hpp"

namespace qgc {

namespace {

void validate_problem(const LSProblem& problem) {
  if (problem.design.rows() < 1 || problem.design.cols() < 1 ||
      problem.design.rows() != problem.response.size()) {
    throw Error(Errc::DimensionMismatch, "least-squares design and response dimensions disagree");
  }
  if (!problem.design.allFinite() || !problem.response.allFinite()) {
    throw Error(Errc::NonFiniteValue, "least-squares data must be finite");
  }
  if (problem.lambda < 0.0 || !std::isfinite(problem.lambda)) {
    throw Error(Errc::NegativeLambda, "lambda must be a finite nonnegative number");
  }
}

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

}  // namespace

MeanFit solve_ols(const LSProblem& problem) {
  validate_problem(problem);
  const Index n = problem.design.rows();
  const Index k = problem.design.cols();
  if (n <= k) {
    throw Error(Errc::TooFewSamples, "OLS needs more samples than regressors");
  }
  const Eigen::ColPivHouseholderQR<Matrix> qr(problem.design);
  if (qr.rank() < k) {
    throw Error(Errc::RankDeficient, "OLS design is rank deficient");
  }
  MeanFit fit;
  fit.coefficients = qr.solve(problem.response);
  fit.residual_dof = n - k;
  const Vector resid = problem.response - problem.design * fit.coefficients;
  const double sigma2 = resid.squaredNorm() / static_cast<double>(n - k);

  // (X'X)^-1 = P R^-1 R^-T P' from the pivoted QR.
  const Matrix r_upper = qr.matrixR().topLeftCorner(k, k).template triangularView<Eigen::Upper>();
  const Matrix r_inv = r_upper.triangularView<Eigen::Upper>().solve(Matrix::Identity(k, k));
  const Matrix inner = r_inv * r_inv.transpose();
  const Matrix xtx_inv = qr.colsPermutation() * inner * qr.colsPermutation().transpose();
  fit.standard_errors = (sigma2 * xtx_inv.diagonal()).cwiseMax(0.0).cwiseSqrt();
  fit.lambda = 0.0;
  return fit;
}

bool t_test_nonzero(const MeanFit& fit, Index index, double alpha) {
  if (!fit.standard_errors) {
    throw Error(Errc::MissingStandardErrors, "fit carries no standard errors");
  }
  if (index < 0 || index >= fit.coefficients.size()) {
    throw Error(Errc::DimensionMismatch, "coefficient index out of range");
  }
  if (fit.residual_dof < 1) {
    throw Error(Errc::TooFewSamples, "t-test needs at least one residual degree of freedom");
  }
  const double coef = fit.coefficients(index);
  const double se = (*fit.standard_errors)(index);
  if (coef == 0.0) return false;
  if (se == 0.0) return true;
  const double critical = stats::student_t_quantile(1.0 - alpha / 2.0, static_cast<double>(fit.residual_dof));
  return std::abs(coef / se) > critical;
}

double lasso_objective(const LSProblem& problem, const Vector& coefficients) {
  const Vector resid = problem.response - problem.design * coefficients;
  return resid.squaredNorm() / static_cast<double>(resid.size()) +
         problem.lambda * coefficients.lpNorm<1>();
}

double lasso_lambda_max(const Matrix& design, const Vector& response) {
  // Same arithmetic as the coordinate update, so the zero fit is exact at the threshold.
  const double inv_n = 1.0 / static_cast<double>(design.rows());
  double top = 0.0;
  for (Index j = 0; j < design.cols(); ++j) {
    top = std::max(top, std::abs(design.col(j).dot(response) * inv_n));
  }
  return 2.0 * top;
}

MeanFit solve_lasso(const LSProblem& problem, const LassoOptions& options) {
  return solve_lasso(problem, Vector::Zero(problem.design.cols()), options);
}

MeanFit solve_lasso(const LSProblem& problem, const Vector& warm_start, const LassoOptions& options) {
  validate_problem(problem);
  const Matrix& x = problem.design;
  const Index n = x.rows();
  const Index k = x.cols();
  if (warm_start.size() != k) {
    throw Error(Errc::DimensionMismatch, "warm start length must equal column count");
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  const Vector col_sq = x.colwise().squaredNorm().transpose() * inv_n;

  Vector a = warm_start;
  Vector resid = problem.response - x * a;
  const double half_lambda = problem.lambda / 2.0;

  for (long cycle = 0; cycle < options.max_cycles; ++cycle) {
    double max_change = 0.0;
    for (Index j = 0; j < k; ++j) {
      if (col_sq(j) == 0.0) {
        a(j) = 0.0;
        continue;
      }
      const double old = a(j);
      const double rho = x.col(j).dot(resid) * inv_n + col_sq(j) * old;
      const double updated = soft_threshold(rho, half_lambda) / col_sq(j);
      if (updated != old) {
        resid.noalias() -= (updated - old) * x.col(j);
        a(j) = updated;
        max_change = std::max(max_change, std::abs(updated - old));
      }
    }
    if (max_change < options.tolerance) {
      MeanFit fit;
      fit.coefficients = std::move(a);
      fit.lambda = problem.lambda;
      fit.residual_dof = n - k;
      return fit;
    }
  }
  throw Error(Errc::NoConvergence, "lasso coordinate descent hit its cycle cap");
}

}  // namespace qgc
