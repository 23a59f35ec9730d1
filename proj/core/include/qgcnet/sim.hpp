#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "qgcnet/core.hpp"
#include "qgcnet/networks.hpp"

namespace qgc {

enum class FactorScope {
  /// One crash indicator per 10-node component.
  PerComponent,
  /// One economy-wide indicator shared by every component.
  Global,
};

struct HubSimConfig {
  Index p = 30;
  Index n = 100;
  Index burn_in = 500;
  double ar_coef = 0.4;
  double hub_to_peripheral = 0.6;
  double crash_prob = 0.05;
  double noise_sd = 0.1;
  double crash_mean = -0.8;
  FactorScope factor_scope = FactorScope::PerComponent;
  std::uint64_t seed = 1;
};

void validate(const HubSimConfig& config);

struct GroundTruth {
  Adjacency adjacency;
  /// Granger direction of each link: (peripheral, hub) entries are 1, as a
  /// hub's lag drives its peripherals (row = target, column = source).
  Adjacency directed;
  std::vector<Index> hub_ids;

  Index edge_count() const;
};

/// p/10 disjoint stars; the hub of each component is its first index.
GroundTruth generate_hub_truth(Index p);

struct SimulatedPanel {
  ReturnPanel panel;
  GroundTruth truth;
  /// Crash indicators after burn-in: rows are time, columns are components
  /// (a single column under FactorScope::Global).
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> factors;
};

SimulatedPanel simulate_panel(const HubSimConfig& config);

/// Both rates in percent.
struct Recovery {
  double sensitivity = 0.0;
  double specificity = 0.0;
};

Recovery score_recovery(const Network& estimated, const GroundTruth& truth);

/// Same rates over ordered pairs, comparing a directed support (row =
/// target, column = source) with GroundTruth::directed.
Recovery score_directed_recovery(const Adjacency& support, const GroundTruth& truth);

struct RecoveryScore {
  double sensitivity_mean = 0.0;
  double sensitivity_sd = 0.0;
  double specificity_mean = 0.0;
  double specificity_sd = 0.0;
  Index n_replicates = 0;
};

struct Estimate {
  Network network;
  /// Directed coefficient support (row = target, column = source); left
  /// empty by estimators that only produce undirected networks.
  Adjacency directed;
};

using Estimator = std::function<Estimate(const ReturnPanel&)>;

/// Multivariate GC/QGC estimator with cross-validated lambdas; reports the
/// directed support of the fitted coefficients.
Estimator multivariate_estimator(const Method& method, const CVConfig& cv);

struct StudyResult {
  /// Scored over unordered pairs of the undirected networks.
  RecoveryScore score;
  /// Scored over ordered pairs; present when every replicate reported a
  /// directed support.
  std::optional<RecoveryScore> directed_score;
  /// Fraction of replicates detecting each edge.
  Matrix heatmap;
  std::vector<Recovery> replicates;
  std::vector<Recovery> directed_replicates;
};

/// Replicate r simulates with derive_seed(config.seed, r); replicates run
/// concurrently and are aggregated in index order.
StudyResult run_study(const HubSimConfig& config, const Estimator& estimator, Index n_replicates);

RecoveryScore run_experiment(const HubSimConfig& config, const Method& method, const CVConfig& cv,
                             Index n_replicates);

Matrix edge_detection_heatmap(const HubSimConfig& config, const Method& method, const CVConfig& cv,
                              Index n_replicates);

/// Node order placing the hubs first, then peripherals in index order.
std::vector<Index> hubs_first_order(const GroundTruth& truth);

/// Stationary hub mean c mu_B / (1 - a (1 - c)) of the regime-switching recursion.
double analytic_hub_mean(const HubSimConfig& config);

}  // namespace qgc
