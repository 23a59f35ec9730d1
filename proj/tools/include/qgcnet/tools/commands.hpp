#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgcnet/networks.hpp"
#include "qgcnet/sim.hpp"
#include "qgcnet/tools/output.hpp"

namespace qgc::tools {

/// "gc" or "qgc"; tau must be given exactly when the method is "qgc".
/// Errors: InvalidConfig, InvalidTau.
Method parse_method(const std::string& name, std::optional<double> tau, bool intercept = true);

struct EstimateOptions {
  std::string input;
  std::string method = "gc";
  std::optional<double> tau;
  bool multivariate = true;
  Index window = 36;
  Index step = 1;
  int folds = 10;
  bool share_lambda = false;
  bool garch = true;
  double alpha = 0.05;
  bool intercept = true;
  std::uint64_t seed = 1;
};

/// Rolling-window networks: edges.csv, degrees.csv, windows.csv,
/// adjacency/window_NNNN.csv and summary.json.
OutputSet run_estimate(const EstimateOptions& options);

struct SimulateOptions {
  std::vector<Index> n_values{25, 50, 75, 100};
  std::vector<Index> p_values{30, 70};
  std::vector<std::string> methods{"gc", "qgc"};
  double tau = 0.05;
  Index reps = 50;
  int folds = 10;
  bool share_lambda = false;
  bool intercept = true;
  FactorScope factor_scope = FactorScope::PerComponent;
  std::uint64_t seed = 1;
};

/// table1.csv (unordered pairs), table1_directed.csv (ordered pairs) and one
/// hubs-first heatmap per cell under heatmaps/.
OutputSet run_simulate(const SimulateOptions& options);

struct BenchmarkOptions {
  std::string degrees;
  std::optional<std::string> covariate;
  std::vector<std::string> events;
  Index radius = 2;
};

/// benchmark.json with the Pearson correlation of average degree against
/// the covariate and the Welch test of unstable against stable windows.
OutputSet run_benchmark(const BenchmarkOptions& options);

struct TheoremOptions {
  double tau = 0.2;
  Index n = 2000;
  Index reps = 1000;
  double lambda_scale = 0.5;
  double lambda_exponent = 0.6;
  /// Smaller sample size for the error-shrinkage comparison; 0 skips it.
  Index compare_n = 200;
  std::uint64_t seed = 1;
};

/// theorem.json with one report for lambda = 0 and one for the power rule.
OutputSet run_theorem(const TheoremOptions& options);

}  // namespace qgc::tools
