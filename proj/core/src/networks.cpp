#include "qgcnet/networks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include <tbb/parallel_for.h>

#include "qgcnet/garch.hpp"
#include "qgcnet/linreg.hpp"
#include "qgcnet/qreg.hpp"
#include "qgcnet/stats.hpp"

namespace qgc {

NetworkMethod network_method(const Method& method, bool multivariate) noexcept {
  if (method.is_quantile()) {
    return multivariate ? NetworkMethod::QgcMultivariate : NetworkMethod::QgcBivariate;
  }
  return multivariate ? NetworkMethod::GcMultivariate : NetworkMethod::GcBivariate;
}

namespace {

std::optional<double> tau_of(const Method& method) {
  return method.is_quantile() ? std::optional<double>(method.tau) : std::nullopt;
}

Window full_window(const ReturnPanel& panel) {
  return {0, static_cast<std::size_t>(panel.num_times())};
}

Matrix select_rows(const Matrix& m, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), m.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

Vector select_rows(const Vector& v, const std::vector<Index>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) out(static_cast<Index>(r)) = v(rows[r]);
  return out;
}

double held_out_loss(const Matrix& x, const Vector& y, const Vector& coef, double intercept,
                     const Method& method) {
  const Vector resid = (y - x * coef).array() - intercept;
  double total = 0.0;
  for (Index t = 0; t < resid.size(); ++t) {
    const double u = resid(t);
    total += method.is_quantile() ? check_loss(u, method.tau) : u * u;
  }
  return total / static_cast<double>(resid.size());
}

struct NodeFit {
  Vector coefficients;
  double intercept = 0.0;
};

// Least squares with an unpenalized intercept reduces to the Lasso on
// column-centered data.
struct Centered {
  Matrix x;
  Vector y;
  Eigen::RowVectorXd x_mean;
  double y_mean = 0.0;

  Centered(const Matrix& design, const Vector& response)
      : x_mean(design.colwise().mean()), y_mean(response.mean()) {
    x = design.rowwise() - x_mean;
    y = response.array() - y_mean;
  }
};

// Fits along a descending grid with warm starts; `visit(index, fit)` sees
// each solution in grid order.
template <typename Visit>
void sweep_grid(const Matrix& x, const Vector& y, const Method& method, const std::vector<double>& grid,
                Visit&& visit) {
  if (method.is_quantile()) {
    QuantileLassoPath path(x, y, method.tau, method.intercept);
    for (std::size_t g = 0; g < grid.size(); ++g) {
      QuantileFit fit = path.solve(grid[g]);
      visit(g, NodeFit{std::move(fit.coefficients), fit.intercept});
    }
    return;
  }
  std::optional<Centered> centered;
  if (method.intercept) centered.emplace(x, y);
  const Matrix& xs = centered ? centered->x : x;
  const Vector& ys = centered ? centered->y : y;
  Vector warm = Vector::Zero(x.cols());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    MeanFit fit = solve_lasso({xs, ys, grid[g]}, warm);
    warm = fit.coefficients;
    NodeFit out{truncate_small(std::move(fit.coefficients)), 0.0};
    if (centered) out.intercept = centered->y_mean - centered->x_mean.dot(out.coefficients);
    visit(g, std::move(out));
  }
}

NodeFit fit_single(const Matrix& x, const Vector& y, const Method& method, double lambda) {
  NodeFit out;
  sweep_grid(x, y, method, {lambda}, [&](std::size_t, NodeFit fit) { out = std::move(fit); });
  return out;
}

std::vector<double> node_grid(const LagDataset& data, Index node, const Method& method, const CVConfig& cv) {
  if (!cv.lambda_grid.empty()) return cv.lambda_grid;
  return default_lambda_grid(data.design, data.responses.col(node), method, cv.default_grid_size,
                             cv.default_grid_ratio);
}

}  // namespace

LagDataset make_lag_dataset(const ReturnPanel& panel) {
  const Index rows = panel.num_times();
  if (rows < 3) {
    throw Error(Errc::TooShort, "lag dataset needs at least 3 time points");
  }
  return {panel.values().topRows(rows - 1), panel.values().bottomRows(rows - 1)};
}

void validate(const CVConfig& cv) {
  if (cv.n_folds < 2) {
    throw Error(Errc::InvalidConfig, "cross-validation needs at least 2 folds");
  }
  for (std::size_t g = 0; g < cv.lambda_grid.size(); ++g) {
    if (!(cv.lambda_grid[g] > 0.0) || !std::isfinite(cv.lambda_grid[g])) {
      throw Error(Errc::InvalidConfig, "lambda grid values must be finite and positive");
    }
    if (g > 0 && !(cv.lambda_grid[g] < cv.lambda_grid[g - 1])) {
      throw Error(Errc::InvalidConfig, "lambda grid must be sorted strictly descending");
    }
  }
  if (cv.lambda_grid.empty() && (cv.default_grid_size < 1 || !(cv.default_grid_ratio > 0.0 && cv.default_grid_ratio <= 1.0))) {
    throw Error(Errc::InvalidConfig, "default grid needs size >= 1 and ratio in (0, 1]");
  }
}

std::vector<double> default_lambda_grid(const Matrix& design, const Vector& response, const Method& method,
                                        int size, double ratio) {
  double top = 0.0;
  if (method.is_quantile()) {
    top = qr_lambda_max(design, response, method.tau, method.intercept);
  } else if (method.intercept) {
    const Centered c(design, response);
    top = lasso_lambda_max(c.x, c.y);
  } else {
    top = lasso_lambda_max(design, response);
  }
  if (!(top > 0.0) || !std::isfinite(top)) top = 1.0;
  std::vector<double> grid(static_cast<std::size_t>(size));
  if (size == 1) {
    grid[0] = top;
    return grid;
  }
  const double log_top = std::log(top);
  const double log_step = std::log(ratio) / static_cast<double>(size - 1);
  for (int g = 0; g < size; ++g) grid[g] = std::exp(log_top + log_step * g);
  grid.front() = top;
  return grid;
}

CvCurve cv_curve(const LagDataset& data, Index node, const Method& method, const CVConfig& cv) {
  validate(cv);
  if (method.is_quantile()) check_tau(method.tau);
  const Index m = data.samples();
  if (m < cv.n_folds) {
    throw Error(Errc::TooFewSamples, "sample count " + std::to_string(m) + " is below the fold count " +
                                         std::to_string(cv.n_folds));
  }
  CvCurve curve;
  curve.grid = node_grid(data, node, method, cv);
  curve.mean_loss.assign(curve.grid.size(), 0.0);
  const Vector response = data.responses.col(node);

  for (int f = 0; f < cv.n_folds; ++f) {
    const Index lo = f * m / cv.n_folds;
    const Index hi = (f + 1) * m / cv.n_folds;
    std::vector<Index> train;
    std::vector<Index> test;
    for (Index t = 0; t < m; ++t) (t >= lo && t < hi ? test : train).push_back(t);
    const Matrix x_train = select_rows(data.design, train);
    const Vector y_train = select_rows(response, train);
    const Matrix x_test = select_rows(data.design, test);
    const Vector y_test = select_rows(response, test);
    sweep_grid(x_train, y_train, method, curve.grid, [&](std::size_t g, const NodeFit& fit) {
      curve.mean_loss[g] += held_out_loss(x_test, y_test, fit.coefficients, fit.intercept, method);
    });
  }
  for (double& loss : curve.mean_loss) loss /= static_cast<double>(cv.n_folds);

  std::size_t best = 0;
  for (std::size_t g = 1; g < curve.grid.size(); ++g) {
    const double margin = 1e-12 * std::abs(curve.mean_loss[best]);
    if (curve.mean_loss[g] < curve.mean_loss[best] - margin) best = g;
  }
  curve.selected = curve.grid[best];
  return curve;
}

double cv_select_lambda(const LagDataset& data, Index node, const Method& method, const CVConfig& cv) {
  return cv_curve(data, node, method, cv).selected;
}

Vector fit_node(const LagDataset& data, Index node, const Method& method, double lambda) {
  if (method.is_quantile()) {
    return solve_qr_lasso({data.design, data.responses.col(node), method.tau, lambda, method.intercept}).coefficients;
  }
  return fit_single(data.design, data.responses.col(node), method, lambda).coefficients;
}

bool quantile_score_nonzero(const Matrix& restricted, const Vector& tested, const Vector& response, double tau,
                            double alpha) {
  const Index n = restricted.rows();
  const Index k = restricted.cols();
  const QuantileFit fit = solve_qr({restricted, response, tau, 0.0});
  if (fit.rank_deficient) return false;
  const Vector resid = response - restricted * fit.coefficients;
  const double scale = std::max(1.0, resid.cwiseAbs().maxCoeff());

  // Rank scores: tau - 1{r < 0} off the fit; on the k interpolated rows the
  // values that make restricted' psi = 0 hold exactly.
  Vector psi(n);
  std::vector<Index> basic;
  for (Index t = 0; t < n; ++t) {
    if (std::abs(resid(t)) <= 1e-9 * scale) {
      basic.push_back(t);
      psi(t) = 0.0;
    } else {
      psi(t) = resid(t) < 0.0 ? tau - 1.0 : tau;
    }
  }
  if (static_cast<Index>(basic.size()) == k) {
    Matrix zb(k, k);
    for (Index r = 0; r < k; ++r) zb.row(r) = restricted.row(basic[r]);
    const Vector rhs = -(restricted.transpose() * psi);
    const Eigen::FullPivLU<Matrix> lu(zb.transpose());
    if (lu.isInvertible()) {
      const Vector sol = lu.solve(rhs);
      for (Index r = 0; r < k; ++r) psi(basic[r]) = sol(r);
    }
  }

  const Vector coef = restricted.colPivHouseholderQr().solve(tested);
  const Vector projected = tested - restricted * coef;
  const double var = tau * (1.0 - tau) * projected.squaredNorm();
  if (!(var > 0.0)) return false;
  const double stat = projected.dot(psi) / std::sqrt(var);
  return std::abs(stat) > stats::normal_quantile(1.0 - alpha / 2.0);
}

Network bivariate_network(const ReturnPanel& panel, const Method& method, double alpha) {
  if (method.is_quantile()) check_tau(method.tau);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw Error(Errc::InvalidConfig, "significance level must lie in (0, 1)");
  }
  const Index p = panel.num_entities();
  if (p < 2) {
    throw Error(Errc::DimensionMismatch, "bivariate networks need at least two entities");
  }
  const LagDataset data = make_lag_dataset(panel);
  const Index m = data.samples();

  // directed(i, j) = 1 when j's lag is significant for i.
  Adjacency directed = Adjacency::Zero(p, p);
  const auto cross_significant = [&](Index target, Index own, Index other) {
    Matrix x(m, method.intercept ? 3 : 2);
    x.col(0) = data.design.col(own);
    x.col(1) = data.design.col(other);
    if (method.intercept) x.col(2).setOnes();
    const Vector y = data.responses.col(target);
    try {
      if (method.is_quantile()) {
        Matrix restricted(m, method.intercept ? 2 : 1);
        restricted.col(0) = x.col(0);
        if (method.intercept) restricted.col(1).setOnes();
        return quantile_score_nonzero(restricted, x.col(1), y, method.tau, alpha);
      }
      return t_test_nonzero(solve_ols({x, y, 0.0}), 1, alpha);
    } catch (const Error&) {
      return false;
    }
  };

  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) pairs.emplace_back(i, j);
  }
  std::vector<char> forward(pairs.size()), backward(pairs.size());
  tbb::parallel_for(std::size_t{0}, pairs.size(), [&](std::size_t k) {
    const auto [i, j] = pairs[k];
    forward[k] = cross_significant(i, i, j);
    backward[k] = cross_significant(j, j, i);
  });
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    directed(pairs[k].first, pairs[k].second) = forward[k];
    directed(pairs[k].second, pairs[k].first) = backward[k];
  }
  return Network(symmetrize_support(directed), panel.entity_ids(), network_method(method, false),
                 tau_of(method), full_window(panel));
}

MultivariateFit fit_multivariate(const ReturnPanel& panel, const Method& method, const CVConfig& cv) {
  validate(cv);
  if (method.is_quantile()) check_tau(method.tau);
  const LagDataset data = make_lag_dataset(panel);
  const Index p = data.nodes();

  MultivariateFit out;
  out.coefficients = Matrix::Zero(p, p);
  out.lambdas.assign(static_cast<std::size_t>(p), 0.0);
  std::vector<char> failed(static_cast<std::size_t>(p), 0);

  tbb::parallel_for(Index{0}, p, [&](Index i) {
    try {
      out.lambdas[i] = cv_select_lambda(data, i, method, cv);
    } catch (const Error&) {
      failed[i] = 1;
    }
  });

  if (cv.share_lambda) {
    double sum = 0.0;
    Index count = 0;
    for (Index i = 0; i < p; ++i) {
      if (!failed[i]) {
        sum += out.lambdas[i];
        ++count;
      }
    }
    const double shared = count > 0 ? sum / static_cast<double>(count) : 0.0;
    for (Index i = 0; i < p; ++i) {
      if (!failed[i]) out.lambdas[i] = shared;
    }
  }

  tbb::parallel_for(Index{0}, p, [&](Index i) {
    if (failed[i]) return;
    try {
      out.coefficients.row(i) = fit_node(data, i, method, out.lambdas[i]).transpose();
    } catch (const Error&) {
      failed[i] = 1;
      out.coefficients.row(i).setZero();
    }
  });

  for (Index i = 0; i < p; ++i) {
    if (failed[i]) out.failed_nodes.push_back(panel.entity_ids()[i]);
  }
  return out;
}

Network network_from_coefficients(const Matrix& coefficients, std::vector<std::string> entity_ids,
                                  NetworkMethod method, std::optional<double> tau, Window window) {
  return Network(symmetrize_support(directed_support(coefficients)), std::move(entity_ids), method, tau, window);
}

Network multivariate_network(const ReturnPanel& panel, const Method& method, const CVConfig& cv) {
  const MultivariateFit fit = fit_multivariate(panel, method, cv);
  return network_from_coefficients(fit.coefficients, panel.entity_ids(), network_method(method, true),
                                   tau_of(method), full_window(panel));
}

RollingResult rolling_networks(const ReturnPanel& panel, const RollingConfig& config) {
  if (config.window_length < 3 || config.step < 1) {
    throw Error(Errc::InvalidConfig, "rolling windows need length >= 3 and step >= 1");
  }
  const Index total = panel.num_times();
  if (total < config.window_length) {
    throw Error(Errc::TooShort, "panel has " + std::to_string(total) + " rows, fewer than the window length " +
                                    std::to_string(config.window_length));
  }
  std::vector<Index> starts;
  for (Index s = 0; s + config.window_length <= total; s += config.step) starts.push_back(s);

  std::vector<std::optional<Network>> networks(starts.size());
  std::vector<std::vector<std::string>> warnings(starts.size());
  tbb::parallel_for(std::size_t{0}, starts.size(), [&](std::size_t w) {
    const Window window{static_cast<std::size_t>(starts[w]), static_cast<std::size_t>(config.window_length)};
    ReturnPanel sub = slice(panel, window);
    if (config.garch) {
      FilteredPanel filtered = filter_panel(sub);
      for (auto& note : filtered.warnings) warnings[w].push_back(sub.timestamps().back() + " " + note);
      sub = std::move(filtered.panel);
    }
    if (config.multivariate) {
      const MultivariateFit fit = fit_multivariate(sub, config.method, config.cv);
      for (const auto& id : fit.failed_nodes) {
        warnings[w].push_back(sub.timestamps().back() + " " + id + ": node fit failed, no edges");
      }
      networks[w].emplace(network_from_coefficients(fit.coefficients, sub.entity_ids(),
                                                    network_method(config.method, true),
                                                    tau_of(config.method), window));
    } else {
      const Network net = bivariate_network(sub, config.method, config.alpha);
      networks[w].emplace(net.adjacency(), net.entity_ids(), net.method(), net.tau(), window);
    }
  });

  RollingResult result;
  for (std::size_t w = 0; w < starts.size(); ++w) {
    result.networks.push_back(std::move(*networks[w]));
    for (auto& note : warnings[w]) result.warnings.push_back(std::move(note));
  }
  return result;
}

Adjacency directed_support(const Matrix& coefficients) {
  Adjacency out = Adjacency::Zero(coefficients.rows(), coefficients.cols());
  for (Index i = 0; i < coefficients.rows(); ++i) {
    for (Index j = 0; j < coefficients.cols(); ++j) {
      if (i != j && std::abs(coefficients(i, j)) >= kZeroTolerance) out(i, j) = 1;
    }
  }
  return out;
}

}  // namespace qgc
