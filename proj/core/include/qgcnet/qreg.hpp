#pragma once

#include <memory>

#include "qgcnet/core.hpp"

namespace qgc {

/// Coefficients with magnitude below this are reported as exact zeros.
inline constexpr double kZeroTolerance = 1e-10;

struct QRProblem {
  Matrix design;    // n x k, rows are samples
  Vector response;  // length n
  double tau = 0.5;
  double lambda = 0.0;
  /// Adds an unpenalized intercept.
  bool intercept = false;
};

/// rho_tau(u) = u (tau - 1{u <= 0}).
double check_loss(double u, double tau);

/// (1/n) sum rho_tau(y - a - X beta) + lambda ||beta||_1.
double qr_objective(const QRProblem& problem, const Vector& beta, double intercept = 0.0);

/// Unpenalized quantile regression. Requires lambda == 0.
QuantileFit solve_qr(const QRProblem& problem);

/// l1-penalized quantile regression; also valid when n < k.
QuantileFit solve_qr_lasso(const QRProblem& problem);

/// Smallest lambda for which beta = 0 is optimal, with the intercept
/// refitted when `intercept` is set. Exact unless residuals tie at zero, in
/// which case it is an upper bound.
double qr_lambda_max(const Matrix& design, const Vector& response, double tau, bool intercept = false);

/// Sets entries with |v| < tol to zero.
Vector truncate_small(Vector v, double tol = kZeroTolerance);

/// Sequence of penalized fits on fixed data. Each solve starts from the
/// optimal basis of the previous one, so sweeping a lambda grid costs a few
/// pivots per grid point.
class QuantileLassoPath {
 public:
  QuantileLassoPath(Matrix design, Vector response, double tau, bool intercept = false);
  ~QuantileLassoPath();
  QuantileLassoPath(QuantileLassoPath&&) noexcept;
  QuantileLassoPath& operator=(QuantileLassoPath&&) noexcept;

  QuantileFit solve(double lambda);

 private:
  struct Engine;
  std::unique_ptr<Engine> engine_;
};

}  // namespace qgc
