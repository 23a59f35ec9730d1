#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qgc {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Adjacency = Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic>;

enum class Errc {
  NonFiniteValue,
  DimensionMismatch,
  NonMonotonicTimestamps,
  DuplicateEntityId,
  WindowOutOfBounds,
  InvalidTau,
  DegenerateDesign,
  NegativeLambda,
  Unbounded,
  RankDeficient,
  TooFewSamples,
  MissingStandardErrors,
  NoConvergence,
  ConstantSeries,
  TooShort,
  OptimizationFailed,
  InvalidK,
  ZeroVariance,
  ConstantInput,
  LengthMismatch,
  UnknownEvent,
  InvalidP,
  UnstableVAR,
  InvalidConfig,
  ParseError,
  IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Every failure in the library is reported as an Error carrying a code.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

struct Window {
  std::size_t start_index = 0;
  std::size_t length = 0;
};

/// Time-indexed matrix of returns: rows are time points, columns are
/// entities. Instances are validated on construction and immutable after.
class ReturnPanel {
 public:
  Index num_times() const noexcept { return values_.rows(); }
  Index num_entities() const noexcept { return values_.cols(); }

  const Matrix& values() const noexcept { return values_; }
  const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }
  const std::vector<std::string>& entity_ids() const noexcept { return entity_ids_; }

  /// Same timestamps and entities, new values (re-validated).
  ReturnPanel with_values(Matrix values) const;

  friend ReturnPanel validate_panel(Matrix raw, std::vector<std::string> timestamps,
                                    std::vector<std::string> entity_ids);

 private:
  ReturnPanel() = default;

  Matrix values_;
  std::vector<std::string> timestamps_;
  std::vector<std::string> entity_ids_;
};

/// Errors: NonFiniteValue, DimensionMismatch, NonMonotonicTimestamps,
/// DuplicateEntityId. Timestamps are compared as strings.
ReturnPanel validate_panel(Matrix raw, std::vector<std::string> timestamps,
                           std::vector<std::string> entity_ids);

ReturnPanel slice(const ReturnPanel& panel, Window window);

/// Builds a panel with labels "t0000".. and "x0".. for simulated data.
ReturnPanel make_unlabeled_panel(Matrix values);

struct QuantileSpec {
  double tau = 0.5;
};

void check_tau(double tau);

struct MeanFit {
  Vector coefficients;
  std::optional<Vector> standard_errors;
  double lambda = 0.0;
  /// n - k for OLS fits; used by the coefficient t-test.
  Index residual_dof = 0;
};

struct QuantileFit {
  Vector coefficients;
  double tau = 0.5;
  double lambda = 0.0;
  double objective_value = 0.0;
  double intercept = 0.0;
  /// Set when an unpenalized fit ran on a rank-deficient design.
  bool rank_deficient = false;
  int pivots = 0;
};

enum class NetworkMethod {
  GcBivariate,
  GcMultivariate,
  QgcBivariate,
  QgcMultivariate,
};

std::string_view to_string(NetworkMethod method) noexcept;
bool is_quantile(NetworkMethod method) noexcept;

/// Undirected binary network. The constructor rejects adjacency matrices
/// that are not symmetric 0/1 with a zero diagonal.
class Network {
 public:
  Network(Adjacency adjacency, std::vector<std::string> entity_ids, NetworkMethod method,
          std::optional<double> tau, Window window);

  Index size() const noexcept { return adjacency_.rows(); }
  const Adjacency& adjacency() const noexcept { return adjacency_; }
  const std::vector<std::string>& entity_ids() const noexcept { return entity_ids_; }
  NetworkMethod method() const noexcept { return method_; }
  std::optional<double> tau() const noexcept { return tau_; }
  Window window() const noexcept { return window_; }

  bool has_edge(Index i, Index j) const { return adjacency_(i, j) != 0; }
  Index edge_count() const;

 private:
  Adjacency adjacency_;
  std::vector<std::string> entity_ids_;
  NetworkMethod method_;
  std::optional<double> tau_;
  Window window_;
};

/// Symmetrizes a directed support pattern (row i = target, column j =
/// source) with the max{|b_ij|,|b_ji|} != 0 rule; the diagonal is ignored.
Adjacency symmetrize_support(const Adjacency& directed);

/// Independent, reproducible seed for replicate `index` of a run seeded
/// with `base` (SplitMix64 finalizer over the pair).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept;

}  // namespace qgc
