#include "qgcnet/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgcnet/stats.hpp"

namespace qgc {

std::vector<Index> node_degrees(const Network& network) {
  std::vector<Index> degrees(static_cast<std::size_t>(network.size()), 0);
  for (Index i = 0; i < network.size(); ++i) degrees[i] = network.adjacency().row(i).sum();
  return degrees;
}

double average_degree(const Network& network) {
  if (network.size() == 0) return 0.0;
  const auto degrees = node_degrees(network);
  double total = 0.0;
  for (Index d : degrees) total += static_cast<double>(d);
  return total / static_cast<double>(degrees.size());
}

std::vector<double> standardized_degrees(const Network& network) {
  const auto degrees = node_degrees(network);
  const double n = static_cast<double>(degrees.size());
  double mean = 0.0;
  for (Index d : degrees) mean += static_cast<double>(d);
  mean /= n;
  double var = 0.0;
  for (Index d : degrees) var += (static_cast<double>(d) - mean) * (static_cast<double>(d) - mean);
  var /= n;
  if (!(var > 0.0)) {
    throw Error(Errc::ZeroVariance, "all node degrees are equal");
  }
  const double sd = std::sqrt(var);
  std::vector<double> z;
  z.reserve(degrees.size());
  for (Index d : degrees) z.push_back((static_cast<double>(d) - mean) / sd);
  return z;
}

std::vector<std::pair<std::string, Index>> top_k_nodes(const Network& network, Index k) {
  if (k < 1 || k > network.size()) {
    throw Error(Errc::InvalidK, "k must lie in [1, p]");
  }
  const auto degrees = node_degrees(network);
  std::vector<std::pair<std::string, Index>> ranked;
  for (Index i = 0; i < network.size(); ++i) ranked.emplace_back(network.entity_ids()[i], degrees[i]);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  ranked.resize(static_cast<std::size_t>(k));
  return ranked;
}

DegreeSeries degree_series(const std::vector<Network>& networks, const std::vector<std::string>& window_labels) {
  if (networks.size() != window_labels.size()) {
    throw Error(Errc::LengthMismatch, "one label per network is required");
  }
  DegreeSeries series;
  series.window_labels = window_labels;
  for (const auto& net : networks) series.average_degree.push_back(average_degree(net));
  double mean = 0.0;
  for (double d : series.average_degree) mean += d;
  mean /= static_cast<double>(std::max<std::size_t>(1, series.average_degree.size()));
  for (double d : series.average_degree) {
    // An all-empty history has no scale; report zeros rather than NaN.
    series.scaled_average_degree.push_back(mean > 0.0 ? d / mean : 0.0);
  }
  return series;
}

TestResult pearson_correlation_test(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw Error(Errc::LengthMismatch, "correlation inputs differ in length");
  }
  if (x.size() < 3) {
    throw Error(Errc::TooFewSamples, "correlation test needs at least 3 pairs");
  }
  const double mx = stats::mean(x);
  const double my = stats::mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) {
    throw Error(Errc::ConstantInput, "correlation input is constant");
  }
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  const double dof = static_cast<double>(x.size()) - 2.0;
  if (std::abs(r) == 1.0) return {r, 0.0};
  const double t = r * std::sqrt(dof / (1.0 - r * r));
  return {r, std::min(1.0, 2.0 * stats::student_t_sf(std::abs(t), dof))};
}

TestResult welch_t_test_greater(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error(Errc::TooFewSamples, "Welch test needs at least two observations per sample");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = stats::sample_variance(a) / na;
  const double vb = stats::sample_variance(b) / nb;
  const double diff = stats::mean(a) - stats::mean(b);
  const double se2 = va + vb;
  if (!(se2 > 0.0)) {
    if (diff == 0.0) return {0.0, 0.5};
    return {diff > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity(),
            diff > 0.0 ? 0.0 : 1.0};
  }
  const double t = diff / std::sqrt(se2);
  const double dof = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  return {t, stats::student_t_sf(t, dof)};
}

std::vector<bool> label_stability(const std::vector<std::string>& window_labels,
                                  const std::vector<std::string>& event_labels, Index radius) {
  const auto n = static_cast<Index>(window_labels.size());
  std::vector<bool> unstable(window_labels.size(), false);
  for (const auto& event : event_labels) {
    const auto it = std::find(window_labels.begin(), window_labels.end(), event);
    if (it == window_labels.end()) {
      throw Error(Errc::UnknownEvent, "event label '" + event + "' is not a window label");
    }
    const auto centre = static_cast<Index>(it - window_labels.begin());
    for (Index w = std::max<Index>(0, centre - radius); w <= std::min(n - 1, centre + radius); ++w) {
      unstable[w] = true;
    }
  }
  return unstable;
}

}  // namespace qgc
