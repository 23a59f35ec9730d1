#pragma once

#include "qgcnet/core.hpp"

namespace qgc {

struct LSProblem {
  Matrix design;
  Vector response;
  double lambda = 0.0;
};

struct LassoOptions {
  /// Converged when no coefficient moves more than this in a full cycle.
  double tolerance = 1e-8;
  long max_cycles = 100000;
};

/// Ordinary least squares with classical standard errors sigma^2 (X'X)^-1,
/// sigma^2 = RSS / (n - k). Errors: TooFewSamples (n <= k), RankDeficient.
MeanFit solve_ols(const LSProblem& problem);

/// Two-sided Student-t test of coefficient `index` at level alpha with the
/// fit's residual degrees of freedom.
bool t_test_nonzero(const MeanFit& fit, Index index, double alpha);

/// Minimizes (1/n)||y - X a||^2 + lambda ||a||_1 by cyclic coordinate
/// descent with soft-thresholding.
MeanFit solve_lasso(const LSProblem& problem, const LassoOptions& options = {});

/// Same, starting from `warm_start` (length k).
MeanFit solve_lasso(const LSProblem& problem, const Vector& warm_start,
                    const LassoOptions& options = {});

double lasso_objective(const LSProblem& problem, const Vector& coefficients);

/// (2/n) max_l |X_l' y|: the smallest lambda with an all-zero solution.
double lasso_lambda_max(const Matrix& design, const Vector& response);

}  // namespace qgc
