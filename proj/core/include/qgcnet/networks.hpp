#pragma once

#include <string>
#include <vector>

#include "qgcnet/core.hpp"

namespace qgc {

/// GC fits the conditional mean (squared loss); QGC fits the conditional
/// tau-quantile (check loss).
struct Method {
  enum class Loss { Mean, Quantile };

  Loss loss = Loss::Mean;
  double tau = 0.5;
  /// Fit an unpenalized intercept alongside the lag coefficients. Needed
  /// for quantile fits: zero is not the tau-quantile of centered data.
  bool intercept = true;

  static Method gc(bool intercept = true) { return {Loss::Mean, 0.5, intercept}; }
  static Method qgc(double tau, bool intercept = true) { return {Loss::Quantile, tau, intercept}; }
  bool is_quantile() const noexcept { return loss == Loss::Quantile; }
};

/// Row t of `design` is panel row t, row t of `responses` is panel row t + 1.
struct LagDataset {
  Matrix design;
  Matrix responses;

  Index samples() const noexcept { return design.rows(); }
  Index nodes() const noexcept { return design.cols(); }
};

LagDataset make_lag_dataset(const ReturnPanel& panel);

struct CVConfig {
  int n_folds = 10;
  /// Descending, strictly positive. Empty selects a per-node default grid.
  std::vector<double> lambda_grid;
  /// Use the mean of the per-node CV choices for every node.
  bool share_lambda = false;
  int default_grid_size = 50;
  double default_grid_ratio = 1e-3;
};

void validate(const CVConfig& cv);

/// Log-spaced grid from the all-zero threshold of the method's loss (with
/// the intercept refitted when the method has one) down to threshold * ratio.
std::vector<double> default_lambda_grid(const Matrix& design, const Vector& response, const Method& method,
                                        int size = 50, double ratio = 1e-3);

struct CvCurve {
  std::vector<double> grid;
  std::vector<double> mean_loss;
  double selected = 0.0;
};

/// Contiguous-block K-fold CV along the lambda grid for one target node.
CvCurve cv_curve(const LagDataset& data, Index node, const Method& method, const CVConfig& cv);

/// Grid value with the smallest mean held-out loss; ties go to the larger lambda.
double cv_select_lambda(const LagDataset& data, Index node, const Method& method, const CVConfig& cv);

/// Penalized fit of response `node` on all lagged columns at fixed lambda.
Vector fit_node(const LagDataset& data, Index node, const Method& method, double lambda);

/// Pairwise two-regressor fits; an edge appears when either cross coefficient
/// is significant at level alpha (t-test for GC, rank-score test for QGC).
Network bivariate_network(const ReturnPanel& panel, const Method& method, double alpha = 0.05);

struct MultivariateFit {
  /// Row i holds the lag coefficients of target i; column j is source j.
  Matrix coefficients;
  std::vector<double> lambdas;
  std::vector<std::string> failed_nodes;
};

MultivariateFit fit_multivariate(const ReturnPanel& panel, const Method& method, const CVConfig& cv);

/// Edge (i, j) iff coefficient i<-j or j<-i survives zero truncation.
Network network_from_coefficients(const Matrix& coefficients, std::vector<std::string> entity_ids,
                                  NetworkMethod method, std::optional<double> tau, Window window);

Network multivariate_network(const ReturnPanel& panel, const Method& method, const CVConfig& cv);

/// Regression rank-score test that `tested` enters the tau-quantile
/// regression of `response` on `restricted`: S = sum x~ psi_tau(r~) over the
/// restricted fit, x~ the tested column residualized on `restricted`, and
/// Var S = tau (1 - tau) |x~|^2. Two-sided at level alpha; needs no density
/// estimate.
bool quantile_score_nonzero(const Matrix& restricted, const Vector& tested, const Vector& response, double tau,
                            double alpha);

struct RollingConfig {
  Index window_length = 36;
  Index step = 1;
  bool multivariate = true;
  Method method = Method::gc();
  double alpha = 0.05;
  CVConfig cv;
  /// GARCH-filter each window before estimation.
  bool garch = false;
};

struct RollingResult {
  std::vector<Network> networks;
  std::vector<std::string> warnings;
};

RollingResult rolling_networks(const ReturnPanel& panel, const RollingConfig& config);

NetworkMethod network_method(const Method& method, bool multivariate) noexcept;

/// Directed support of a coefficient matrix (row = target, column = source)
/// after zero truncation; the diagonal is cleared.
Adjacency directed_support(const Matrix& coefficients);

}  // namespace qgc
