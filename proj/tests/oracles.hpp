#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the solvers it is used to check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline double rho(double u, double tau) { return u * (tau - (u <= 0.0 ? 1.0 : 0.0)); }

inline double qr_objective(const Matrix& x, const Vector& y, double tau, double lambda, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index t = 0; t < x.rows(); ++t) s += rho(y(t) - x.row(t).dot(b), tau);
  return s / static_cast<double>(x.rows()) + lambda * b.lpNorm<1>();
}

// A check-loss optimum interpolates k samples (full-rank design): enumerate
// every k-subset, solve the interpolation system, keep the best objective.
inline double qr_subset_min(const Matrix& x, const Vector& y, double tau) {
  const Eigen::Index n = x.rows(), k = x.cols();
  std::vector<int> pick(static_cast<std::size_t>(n), 0);
  std::fill(pick.end() - k, pick.end(), 1);
  double best = std::numeric_limits<double>::infinity();
  do {
    Matrix a(k, k);
    Vector rhs(k);
    Eigen::Index r = 0;
    for (Eigen::Index t = 0; t < n; ++t) {
      if (pick[t]) {
        a.row(r) = x.row(t);
        rhs(r) = y(t);
        ++r;
      }
    }
    Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible()) continue;
    best = std::min(best, qr_objective(x, y, tau, 0.0, lu.solve(rhs)));
  } while (std::next_permutation(pick.begin(), pick.end()));
  return best;
}

// Two-coefficient penalized check loss: the objective is piecewise linear
// with kinks on the lines x_t'b = y_t and b_j = 0, so the minimum sits at an
// intersection of two kink lines. Evaluate every intersection, plus a grid.
inline double qr_lasso_min_2d(const Matrix& x, const Vector& y, double tau, double lambda, double grid_step,
                              double bound = 3.0) {
  std::vector<std::pair<Eigen::RowVector2d, double>> lines;
  for (Eigen::Index t = 0; t < x.rows(); ++t) lines.push_back({x.row(t), y(t)});
  lines.push_back({Eigen::RowVector2d(1.0, 0.0), 0.0});
  lines.push_back({Eigen::RowVector2d(0.0, 1.0), 0.0});
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < lines.size(); ++a) {
    for (std::size_t b = a + 1; b < lines.size(); ++b) {
      Eigen::Matrix2d m;
      m.row(0) = lines[a].first;
      m.row(1) = lines[b].first;
      if (std::abs(m.determinant()) < 1e-14) continue;
      const Eigen::Vector2d sol = m.inverse() * Eigen::Vector2d(lines[a].second, lines[b].second);
      best = std::min(best, qr_objective(x, y, tau, lambda, sol));
    }
  }
  for (double b0 = -bound; b0 <= bound; b0 += grid_step) {
    for (double b1 = -bound; b1 <= bound; b1 += grid_step) {
      best = std::min(best, qr_objective(x, y, tau, lambda, Eigen::Vector2d(b0, b1)));
    }
  }
  return best;
}

// Proximal gradient (ISTA) on (1/n)||y - Xa||^2 + lambda ||a||_1.
inline Vector lasso_ista(const Matrix& x, const Vector& y, double lambda, int iters = 200000) {
  const double n = static_cast<double>(x.rows());
  const Matrix h = 2.0 / n * x.transpose() * x;
  const double step = 1.0 / Eigen::SelfAdjointEigenSolver<Matrix>(h).eigenvalues().maxCoeff();
  Vector a = Vector::Zero(x.cols());
  const Vector xty = 2.0 / n * x.transpose() * y;
  for (int it = 0; it < iters; ++it) {
    const Vector z = a - step * (h * a - xty);
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      const double g = step * lambda;
      a(j) = z(j) > g ? z(j) - g : (z(j) < -g ? z(j) + g : 0.0);
    }
  }
  return a;
}

inline double lasso_objective(const Matrix& x, const Vector& y, double lambda, const Vector& a) {
  return (y - x * a).squaredNorm() / static_cast<double>(x.rows()) + lambda * a.lpNorm<1>();
}

// Student-t CDF by Simpson integration of the density from 0.
inline double t_cdf(double t, double dof) {
  const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) / std::sqrt(dof * M_PI);
  const auto pdf = [&](double u) { return c * std::pow(1 + u * u / dof, -(dof + 1) / 2); };
  const int m = 20000;
  const double h = t / m;
  double s = pdf(0) + pdf(t);
  for (int i = 1; i < m; ++i) s += (i % 2 ? 4 : 2) * pdf(i * h);
  return 0.5 + s * h / 3.0;
}

inline double t_quantile(double p, double dof) {
  double lo = 0.0, hi = 50.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = (lo + hi) / 2;
    (t_cdf(mid, dof) < p ? lo : hi) = mid;
  }
  return (lo + hi) / 2;
}

}  // namespace oracle
