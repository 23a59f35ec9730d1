#include "qgcnet/qreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace qgc {

double check_loss(double u, double tau) {
  check_tau(tau);
  return u * (tau - (u <= 0.0 ? 1.0 : 0.0));
}

namespace {

void validate_problem(const QRProblem& problem) {
  check_tau(problem.tau);
  if (problem.design.rows() < 1 || problem.design.cols() < 1) {
    throw Error(Errc::DimensionMismatch, "design must have n >= 1 rows and k >= 1 columns");
  }
  if (problem.design.rows() != problem.response.size()) {
    throw Error(Errc::DimensionMismatch, "design rows must equal response length");
  }
  if (!problem.design.allFinite() || !problem.response.allFinite()) {
    throw Error(Errc::NonFiniteValue, "quantile regression data must be finite");
  }
  if (problem.lambda < 0.0 || !std::isfinite(problem.lambda)) {
    throw Error(Errc::NegativeLambda, "lambda must be a finite nonnegative number");
  }
}

Matrix augmented_design(const Matrix& design, bool intercept) {
  if (!intercept) return design;
  Matrix out(design.rows(), design.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(design.cols()) = design;
  return out;
}

}  // namespace

double qr_objective(const QRProblem& problem, const Vector& beta, double intercept) {
  if (beta.size() != problem.design.cols()) {
    throw Error(Errc::DimensionMismatch, "beta length must equal design column count");
  }
  check_tau(problem.tau);
  const Vector resid = (problem.response - problem.design * beta).array() - intercept;
  double loss = 0.0;
  for (Index t = 0; t < resid.size(); ++t) {
    const double u = resid(t);
    loss += u * (problem.tau - (u <= 0.0 ? 1.0 : 0.0));
  }
  return loss / static_cast<double>(resid.size()) + problem.lambda * beta.lpNorm<1>();
}

namespace {

/// y_(ceil(n tau)), a minimizer of sum rho_tau(y_t - c) over c.
double order_statistic(const Vector& response, double tau) {
  std::vector<double> sorted(response.data(), response.data() + response.size());
  const auto pos = static_cast<std::size_t>(std::max(0.0, std::ceil(tau * static_cast<double>(sorted.size())) - 1.0));
  const auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(std::min(pos, sorted.size() - 1));
  std::nth_element(sorted.begin(), nth, sorted.end());
  return *nth;
}

}  // namespace

double qr_lambda_max(const Matrix& design, const Vector& response, double tau, bool intercept) {
  check_tau(tau);
  const Index n = design.rows();
  Vector resid = response;
  if (intercept && n > 0) {
    // With beta = 0 the intercept sits at an order statistic near the
    // tau-quantile; that row's score is then fixed by sum(psi) = 0.
    resid.array() -= order_statistic(response, tau);
  }
  Vector psi = Vector::Zero(n);
  std::vector<Index> zeros;
  for (Index t = 0; t < n; ++t) {
    if (resid(t) > 0.0) {
      psi(t) = tau;
    } else if (resid(t) < 0.0) {
      psi(t) = tau - 1.0;
    } else {
      zeros.push_back(t);
    }
  }
  const double free_score = intercept && zeros.size() == 1 ? -psi.sum() : 0.0;
  const double slop = 1e-9 * static_cast<double>(n);
  const bool exact = intercept && zeros.size() == 1 && free_score >= tau - 1.0 - slop && free_score <= tau + slop;
  if (exact) psi(zeros.front()) = std::clamp(free_score, tau - 1.0, tau);

  double best = 0.0;
  for (Index l = 0; l < design.cols(); ++l) {
    double fixed = design.col(l).dot(psi);
    double slack = 0.0;
    if (!exact) {
      // Ties leave the scores of zero residuals free in [tau - 1, tau]; bound
      // their contribution from above.
      for (Index t : zeros) slack += std::abs(design(t, l)) * std::max(tau, 1.0 - tau);
    }
    best = std::max(best, (std::abs(fixed) + slack) / static_cast<double>(n));
  }
  return best;
}

Vector truncate_small(Vector v, double tol) {
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) < tol) v(i) = 0.0;
  }
  return v;
}

// Simplex on the split-variable LP
//   min sum_v pos_cost[v] z_v^+ + neg_cost[v] z_v^-   s.t.  X b + r = y,
// stored in condensed form: each (z^+, z^-) pair shares one tableau column
// because the two columns are negatives of each other, and at most one half
// of a pair is basic. Variables 0..k-1 are coefficients, k..k+n-1 residuals.
// The tableau is n x k: rows are basic variables, columns nonbasic ones.
struct QuantileLassoPath::Engine {
  Matrix design;
  Vector response;
  double tau;
  bool intercept;
  Index n;
  Index k;

  Matrix tableau;
  Vector basic_values;
  std::vector<Index> basic;
  std::vector<Index> nonbasic;
  std::vector<int> basic_sign;
  std::vector<double> pos_cost;
  std::vector<double> neg_cost;
  std::optional<double> zero_threshold;

  struct Breakpoint {
    double step;
    Index var;
    Index row;
  };
  std::vector<Breakpoint> breakpoints;

  Engine(Matrix x, Vector y, double tau_, bool intercept_)
      : design(augmented_design(x, intercept_)),
        response(std::move(y)),
        tau(tau_),
        intercept(intercept_),
        n(design.rows()),
        k(design.cols()) {
    tableau = design;
    basic_values = response;
    basic.resize(static_cast<std::size_t>(n));
    basic_sign.resize(static_cast<std::size_t>(n));
    nonbasic.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < n; ++i) {
      basic[i] = k + i;
      basic_sign[i] = response(i) >= 0.0 ? 1 : -1;
    }
    for (Index j = 0; j < k; ++j) nonbasic[j] = j;
    pos_cost.assign(static_cast<std::size_t>(k + n), 0.0);
    neg_cost.assign(static_cast<std::size_t>(k + n), 0.0);
    for (Index i = 0; i < n; ++i) {
      pos_cost[k + i] = tau / static_cast<double>(n);
      neg_cost[k + i] = (1.0 - tau) / static_cast<double>(n);
    }
  }

  void set_lambda(double lambda) {
    for (Index v = 0; v < k; ++v) {
      const double c = (intercept && v == 0) ? 0.0 : lambda;
      pos_cost[v] = c;
      neg_cost[v] = c;
    }
  }

  int run() {
    double cost_scale = 0.0;
    for (Index v = 0; v < k + n; ++v) cost_scale = std::max({cost_scale, pos_cost[v], neg_cost[v]});
    const double tol = 1e-12 * std::max(cost_scale, 1e-300);
    const double col_tol = 1e-11;

    Vector gradient(n);
    const int max_pivots = static_cast<int>(50 * (n + k) + 1000);
    int degenerate_run = 0;
    bool bland = false;

    for (int pivots = 0;; ++pivots) {
      if (pivots > max_pivots) {
        throw Error(Errc::NoConvergence, "quantile simplex exceeded its pivot budget");
      }
      for (Index i = 0; i < n; ++i) {
        gradient(i) = basic_sign[i] > 0 ? pos_cost[basic[i]] : -neg_cost[basic[i]];
      }
      const Vector weights = tableau.transpose() * gradient;

      Index enter_col = -1;
      int dir = 0;
      double enter_rc = -tol;
      for (Index j = 0; j < k; ++j) {
        const Index q = nonbasic[j];
        const double up = pos_cost[q] - weights(j);
        const double down = neg_cost[q] + weights(j);
        const double rc = std::min(up, down);
        if (rc >= -tol) continue;
        const bool better = bland ? (enter_col < 0 || q < nonbasic[enter_col])
                                  : (rc < enter_rc || (rc == enter_rc && q < nonbasic[enter_col]));
        if (better) {
          enter_col = j;
          dir = up < down ? 1 : -1;
          enter_rc = rc;
        }
      }
      if (enter_col < 0) return pivots;

      // Walk the breakpoints of the piecewise-linear cost along the ray until
      // the directional slope turns nonnegative.
      breakpoints.clear();
      for (Index i = 0; i < n; ++i) {
        const double delta = -dir * tableau(i, enter_col);
        if (std::abs(delta) <= col_tol) continue;
        if (basic_sign[i] * delta >= 0.0) continue;
        const double dist = std::max(0.0, basic_sign[i] * basic_values(i));
        breakpoints.push_back({dist / std::abs(delta), basic[i], i});
      }
      std::sort(breakpoints.begin(), breakpoints.end(), [](const Breakpoint& a, const Breakpoint& b) {
        return a.step < b.step || (a.step == b.step && a.var < b.var);
      });
      double slope = enter_rc;
      std::size_t leave = breakpoints.size();
      for (std::size_t b = 0; b < breakpoints.size(); ++b) {
        const Index v = breakpoints[b].var;
        slope += (pos_cost[v] + neg_cost[v]) * std::abs(tableau(breakpoints[b].row, enter_col));
        if (slope >= -tol) {
          leave = b;
          break;
        }
      }
      if (leave == breakpoints.size()) {
        throw Error(Errc::Unbounded, "quantile regression objective is unbounded below");
      }
      for (std::size_t b = 0; b < leave; ++b) basic_sign[breakpoints[b].row] *= -1;

      const Index r = breakpoints[leave].row;
      degenerate_run = breakpoints[leave].step == 0.0 ? degenerate_run + 1 : 0;
      if (degenerate_run > 2 * (n + k)) bland = true;
      pivot(r, enter_col, dir);
    }
  }

  void pivot(Index r, Index j, int dir) {
    const double e = tableau(r, j);
    const Vector col = tableau.col(j);
    Eigen::RowVectorXd row = tableau.row(r) / e;
    row(j) = 1.0;
    tableau.noalias() -= col * row;
    tableau.col(j) = -col / e;
    tableau.row(r) = row;
    tableau(r, j) = 1.0 / e;

    const double entering_value = basic_values(r) / e;
    basic_values.noalias() -= col * entering_value;
    basic_values(r) = entering_value;

    std::swap(basic[r], nonbasic[j]);
    basic_sign[r] = entering_value > 0.0 ? 1 : (entering_value < 0.0 ? -1 : dir);
  }

  // Coefficients of the current basic solution, re-solved from the rows
  // whose residuals are nonbasic (exactly interpolated).
  Vector coefficients() const {
    Vector beta = Vector::Zero(k);
    std::vector<Index> coef_vars;
    std::vector<Index> coef_rows;
    for (Index i = 0; i < n; ++i) {
      if (basic[i] < k) {
        beta(basic[i]) = basic_values(i);
        coef_vars.push_back(basic[i]);
      }
    }
    for (Index j = 0; j < k; ++j) {
      if (nonbasic[j] >= k) coef_rows.push_back(nonbasic[j] - k);
    }
    const auto m = static_cast<Index>(coef_vars.size());
    if (m == 0 || static_cast<Index>(coef_rows.size()) != m) return beta;
    Matrix sub(m, m);
    Vector rhs(m);
    for (Index a = 0; a < m; ++a) {
      rhs(a) = response(coef_rows[a]);
      for (Index b = 0; b < m; ++b) sub(a, b) = design(coef_rows[a], coef_vars[b]);
    }
    const Eigen::FullPivLU<Matrix> lu(sub);
    if (!lu.isInvertible()) return beta;
    const Vector exact = lu.solve(rhs);
    if (!exact.allFinite()) return beta;
    double drift = 0.0;
    for (Index a = 0; a < m; ++a) drift = std::max(drift, std::abs(exact(a) - beta(coef_vars[a])));
    if (drift > 1e-6 * (1.0 + beta.lpNorm<Eigen::Infinity>())) return beta;
    for (Index a = 0; a < m; ++a) beta(coef_vars[a]) = exact(a);
    return beta;
  }
};

QuantileLassoPath::QuantileLassoPath(Matrix design, Vector response, double tau, bool intercept) {
  QRProblem probe{std::move(design), std::move(response), tau, 0.0, intercept};
  validate_problem(probe);
  engine_ = std::make_unique<Engine>(std::move(probe.design), std::move(probe.response), tau, intercept);
}

QuantileLassoPath::~QuantileLassoPath() = default;
QuantileLassoPath::QuantileLassoPath(QuantileLassoPath&&) noexcept = default;
QuantileLassoPath& QuantileLassoPath::operator=(QuantileLassoPath&&) noexcept = default;

QuantileFit QuantileLassoPath::solve(double lambda) {
  if (lambda < 0.0 || !std::isfinite(lambda)) {
    throw Error(Errc::NegativeLambda, "lambda must be a finite nonnegative number");
  }
  Engine& eng = *engine_;
  const Index offset = eng.intercept ? 1 : 0;
  QRProblem view{eng.design.rightCols(eng.k - offset), eng.response, eng.tau, lambda, false};
  QuantileFit fit;
  fit.tau = eng.tau;
  fit.lambda = lambda;

  if (!eng.zero_threshold) eng.zero_threshold = qr_lambda_max(view.design, eng.response, eng.tau, eng.intercept);
  if (lambda >= *eng.zero_threshold) {
    // beta = 0 is certified optimal here; the simplex could stop on a tied
    // nonzero vertex instead.
    fit.coefficients = Vector::Zero(eng.k - offset);
    if (eng.intercept) fit.intercept = order_statistic(eng.response, eng.tau);
  } else {
    eng.set_lambda(lambda);
    fit.pivots = eng.run();
    Vector all = truncate_small(eng.coefficients());
    if (eng.intercept) {
      fit.intercept = all(0);
      fit.coefficients = all.tail(eng.k - 1);
    } else {
      fit.coefficients = std::move(all);
    }
  }
  fit.objective_value = qr_objective(view, fit.coefficients, fit.intercept);
  return fit;
}

QuantileFit solve_qr_lasso(const QRProblem& problem) {
  validate_problem(problem);
  QuantileLassoPath path(problem.design, problem.response, problem.tau, problem.intercept);
  return path.solve(problem.lambda);
}

QuantileFit solve_qr(const QRProblem& problem) {
  validate_problem(problem);
  if (problem.lambda != 0.0) {
    throw Error(Errc::InvalidConfig, "solve_qr expects lambda == 0; use solve_qr_lasso");
  }
  for (Index j = 0; j < problem.design.cols(); ++j) {
    if (problem.design.col(j).cwiseAbs().maxCoeff() == 0.0) {
      throw Error(Errc::DegenerateDesign, "design column " + std::to_string(j) + " is all zero");
    }
  }
  const Matrix full = augmented_design(problem.design, problem.intercept);
  const Eigen::ColPivHouseholderQR<Matrix> qr(full);
  QuantileFit fit = solve_qr_lasso(problem);
  fit.rank_deficient = qr.rank() < full.cols();
  return fit;
}

}  // namespace qgc
