#include "qgcnet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>

#include <tbb/parallel_for.h>

namespace qgc {

void validate(const HubSimConfig& config) {
  if (config.p < 10 || config.p % 10 != 0) {
    throw Error(Errc::InvalidP, "p must be a positive multiple of 10");
  }
  if (config.n < 3 || config.burn_in < 0) {
    throw Error(Errc::InvalidConfig, "series length must be >= 3 and burn-in >= 0");
  }
  if (!(config.crash_prob >= 0.0 && config.crash_prob <= 1.0)) {
    throw Error(Errc::InvalidConfig, "crash probability must lie in [0, 1]");
  }
  if (!(config.noise_sd > 0.0)) {
    throw Error(Errc::InvalidConfig, "noise sd must be positive");
  }
}

Index GroundTruth::edge_count() const {
  Index count = 0;
  for (Index i = 0; i < adjacency.rows(); ++i) {
    for (Index j = i + 1; j < adjacency.cols(); ++j) count += adjacency(i, j);
  }
  return count;
}

GroundTruth generate_hub_truth(Index p) {
  if (p < 10 || p % 10 != 0) {
    throw Error(Errc::InvalidP, "p must be a positive multiple of 10");
  }
  GroundTruth truth;
  truth.adjacency = Adjacency::Zero(p, p);
  truth.directed = Adjacency::Zero(p, p);
  for (Index hub = 0; hub < p; hub += 10) {
    truth.hub_ids.push_back(hub);
    for (Index leaf = hub + 1; leaf < hub + 10; ++leaf) {
      truth.adjacency(hub, leaf) = 1;
      truth.adjacency(leaf, hub) = 1;
      truth.directed(leaf, hub) = 1;
    }
  }
  return truth;
}

SimulatedPanel simulate_panel(const HubSimConfig& config) {
  validate(config);
  const Index p = config.p;
  const Index components = p / 10;
  const Index factor_cols = config.factor_scope == FactorScope::Global ? 1 : components;
  const Index total = config.burn_in + config.n;

  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> noise(0.0, config.noise_sd);
  std::bernoulli_distribution crash(config.crash_prob);

  Matrix values(config.n, p);
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> factors(config.n, factor_cols);
  Vector prev = Vector::Zero(p);
  Vector next(p);
  std::vector<int> prev_factor(static_cast<std::size_t>(factor_cols), 0);
  std::vector<int> factor(static_cast<std::size_t>(factor_cols), 0);

  for (Index t = 0; t < total; ++t) {
    for (Index c = 0; c < factor_cols; ++c) factor[c] = crash(rng) ? 1 : 0;
    for (Index c = 0; c < components; ++c) {
      const Index hub = 10 * c;
      const Index fc = factor_cols == 1 ? 0 : c;
      next(hub) = factor[fc] ? config.crash_mean + noise(rng) : config.ar_coef * prev(hub) + noise(rng);
      for (Index leaf = hub + 1; leaf < hub + 10; ++leaf) {
        double v = config.ar_coef * prev(leaf) + noise(rng);
        if (prev_factor[fc]) v += config.hub_to_peripheral * prev(hub);
        next(leaf) = v;
      }
    }
    if (t >= config.burn_in) {
      values.row(t - config.burn_in) = next.transpose();
      for (Index c = 0; c < factor_cols; ++c) factors(t - config.burn_in, c) = factor[c];
    }
    prev.swap(next);
    prev_factor = factor;
  }
  return {make_unlabeled_panel(std::move(values)), generate_hub_truth(p), std::move(factors)};
}

namespace {

Recovery rates(Index true_edges, Index detected, Index non_edges, Index retained) {
  Recovery out;
  out.sensitivity = true_edges > 0 ? 100.0 * static_cast<double>(detected) / static_cast<double>(true_edges) : 100.0;
  out.specificity = non_edges > 0 ? 100.0 * static_cast<double>(retained) / static_cast<double>(non_edges) : 100.0;
  return out;
}

}  // namespace

Recovery score_recovery(const Network& estimated, const GroundTruth& truth) {
  const Index p = truth.adjacency.rows();
  if (estimated.size() != p) {
    throw Error(Errc::DimensionMismatch, "estimated network and truth differ in size");
  }
  Index true_edges = 0, detected = 0, non_edges = 0, retained = 0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = i + 1; j < p; ++j) {
      if (truth.adjacency(i, j)) {
        ++true_edges;
        detected += estimated.has_edge(i, j) ? 1 : 0;
      } else {
        ++non_edges;
        retained += estimated.has_edge(i, j) ? 0 : 1;
      }
    }
  }
  return rates(true_edges, detected, non_edges, retained);
}

Recovery score_directed_recovery(const Adjacency& support, const GroundTruth& truth) {
  const Index p = truth.directed.rows();
  if (support.rows() != p || support.cols() != p) {
    throw Error(Errc::DimensionMismatch, "directed support and truth differ in size");
  }
  Index true_edges = 0, detected = 0, non_edges = 0, retained = 0;
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      if (i == j) continue;
      if (truth.directed(i, j)) {
        ++true_edges;
        detected += support(i, j) != 0 ? 1 : 0;
      } else {
        ++non_edges;
        retained += support(i, j) != 0 ? 0 : 1;
      }
    }
  }
  return rates(true_edges, detected, non_edges, retained);
}

Estimator multivariate_estimator(const Method& method, const CVConfig& cv) {
  return [method, cv](const ReturnPanel& panel) {
    const MultivariateFit fit = fit_multivariate(panel, method, cv);
    const std::optional<double> tau = method.is_quantile() ? std::optional<double>(method.tau) : std::nullopt;
    return Estimate{network_from_coefficients(fit.coefficients, panel.entity_ids(), network_method(method, true),
                                              tau, {0, static_cast<std::size_t>(panel.num_times())}),
                    directed_support(fit.coefficients)};
  };
}

namespace {

std::pair<double, double> mean_sd(const std::vector<double>& v) {
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= static_cast<double>(v.size());
  if (v.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(v.size() - 1))};
}

}  // namespace

StudyResult run_study(const HubSimConfig& config, const Estimator& estimator, Index n_replicates) {
  validate(config);
  if (n_replicates < 1) {
    throw Error(Errc::InvalidConfig, "at least one replicate is required");
  }
  const Index p = config.p;
  const auto reps = static_cast<std::size_t>(n_replicates);
  std::vector<std::optional<Adjacency>> detected(reps);
  std::vector<Recovery> recoveries(reps);
  std::vector<std::optional<Recovery>> directed(reps);
  const GroundTruth truth = generate_hub_truth(p);

  tbb::parallel_for(std::size_t{0}, reps, [&](std::size_t r) {
    HubSimConfig rep = config;
    rep.seed = derive_seed(config.seed, r);
    const SimulatedPanel sim = simulate_panel(rep);
    const Estimate est = estimator(sim.panel);
    recoveries[r] = score_recovery(est.network, truth);
    if (est.directed.size() > 0) directed[r] = score_directed_recovery(est.directed, truth);
    detected[r] = est.network.adjacency();
  });

  StudyResult result;
  result.heatmap = Matrix::Zero(p, p);
  std::vector<double> sens, spec, dsens, dspec;
  for (std::size_t r = 0; r < reps; ++r) {
    result.heatmap += detected[r]->cast<double>();
    sens.push_back(recoveries[r].sensitivity);
    spec.push_back(recoveries[r].specificity);
    if (directed[r]) {
      dsens.push_back(directed[r]->sensitivity);
      dspec.push_back(directed[r]->specificity);
      result.directed_replicates.push_back(*directed[r]);
    }
  }
  result.heatmap /= static_cast<double>(n_replicates);
  const auto [sens_mean, sens_sd] = mean_sd(sens);
  const auto [spec_mean, spec_sd] = mean_sd(spec);
  result.score = {sens_mean, sens_sd, spec_mean, spec_sd, n_replicates};
  if (dsens.size() == reps) {
    const auto [ds_mean, ds_sd] = mean_sd(dsens);
    const auto [dp_mean, dp_sd] = mean_sd(dspec);
    result.directed_score = RecoveryScore{ds_mean, ds_sd, dp_mean, dp_sd, n_replicates};
  } else {
    result.directed_replicates.clear();
  }
  result.replicates = std::move(recoveries);
  return result;
}

RecoveryScore run_experiment(const HubSimConfig& config, const Method& method, const CVConfig& cv,
                             Index n_replicates) {
  return run_study(config, multivariate_estimator(method, cv), n_replicates).score;
}

Matrix edge_detection_heatmap(const HubSimConfig& config, const Method& method, const CVConfig& cv,
                              Index n_replicates) {
  return run_study(config, multivariate_estimator(method, cv), n_replicates).heatmap;
}

std::vector<Index> hubs_first_order(const GroundTruth& truth) {
  std::vector<Index> order = truth.hub_ids;
  for (Index i = 0; i < truth.adjacency.rows(); ++i) {
    if (std::find(truth.hub_ids.begin(), truth.hub_ids.end(), i) == truth.hub_ids.end()) order.push_back(i);
  }
  return order;
}

double analytic_hub_mean(const HubSimConfig& config) {
  return config.crash_prob * config.crash_mean / (1.0 - config.ar_coef * (1.0 - config.crash_prob));
}

}  // namespace qgc
