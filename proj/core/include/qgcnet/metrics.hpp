#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qgcnet/core.hpp"

namespace qgc {

std::vector<Index> node_degrees(const Network& network);
double average_degree(const Network& network);

/// z-scores of node degrees with the population standard deviation.
/// Errors: ZeroVariance.
std::vector<double> standardized_degrees(const Network& network);

/// k highest-degree nodes; ties broken by entity id. Errors: InvalidK.
std::vector<std::pair<std::string, Index>> top_k_nodes(const Network& network, Index k);

struct DegreeSeries {
  std::vector<std::string> window_labels;
  std::vector<double> average_degree;
  /// average_degree divided by its own mean.
  std::vector<double> scaled_average_degree;
};

/// window_labels[i] labels networks[i].
DegreeSeries degree_series(const std::vector<Network>& networks, const std::vector<std::string>& window_labels);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Sample Pearson r with a two-sided p-value from t = r sqrt((m-2)/(1-r^2)).
/// `statistic` holds r. Errors: LengthMismatch, TooFewSamples, ConstantInput.
TestResult pearson_correlation_test(const std::vector<double>& x, const std::vector<double>& y);

/// One-sided Welch test of mean(a) > mean(b) with Welch-Satterthwaite
/// degrees of freedom. Errors: TooFewSamples.
TestResult welch_t_test_greater(const std::vector<double>& a, const std::vector<double>& b);

/// True for windows within `radius` positions of any event window.
/// Errors: UnknownEvent.
std::vector<bool> label_stability(const std::vector<std::string>& window_labels,
                                  const std::vector<std::string>& event_labels, Index radius = 2);

}  // namespace qgc
