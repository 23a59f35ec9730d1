#include <doctest.h>

#include <cmath>
#include <random>

#include "qgcnet/sim.hpp"
#include "qgcnet/stats.hpp"

using namespace qgc;

namespace {

double lag1_autocorrelation(const Vector& x) {
  const double m = x.mean();
  double num = 0.0, den = 0.0;
  for (Index t = 0; t < x.size(); ++t) {
    den += (x(t) - m) * (x(t) - m);
    if (t > 0) num += (x(t) - m) * (x(t - 1) - m);
  }
  return num / den;
}

Errc code_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return Errc::IoError;
}

Network as_network(const Adjacency& a) {
  std::vector<std::string> ids;
  for (Index i = 0; i < a.rows(); ++i) ids.push_back("x" + std::to_string(i));
  return Network(a, ids, NetworkMethod::GcMultivariate, std::nullopt, {});
}

}  // namespace

TEST_CASE("hub ground truth") {
  const GroundTruth t30 = generate_hub_truth(30);
  CHECK(t30.edge_count() == 27);
  CHECK(t30.hub_ids == std::vector<Index>{0, 10, 20});
  CHECK(generate_hub_truth(70).edge_count() == 63);
  const GroundTruth t10 = generate_hub_truth(10);
  CHECK(t10.adjacency.row(0).sum() == 9);
  for (Index j = 1; j < 10; ++j) CHECK(t10.adjacency.row(j).sum() == 1);
  CHECK(t30.adjacency == t30.adjacency.transpose());
  CHECK(t30.adjacency(0, 10) == 0);
  CHECK(t30.adjacency(10, 19) == 1);
  CHECK(t30.adjacency(10, 20) == 0);
  CHECK(code_of([] { generate_hub_truth(25); }) == Errc::InvalidP);
  CHECK(code_of([] { generate_hub_truth(0); }) == Errc::InvalidP);
  CHECK(hubs_first_order(t30)[0] == 0);
  CHECK(hubs_first_order(t30)[1] == 10);
  CHECK(hubs_first_order(t30)[2] == 20);
  CHECK(hubs_first_order(t30)[3] == 1);
  CHECK(hubs_first_order(t30).size() == 30);
}

TEST_CASE("config validation") {
  HubSimConfig cfg;
  CHECK_NOTHROW(validate(cfg));
  cfg.p = 15;
  CHECK(code_of([&] { validate(cfg); }) == Errc::InvalidP);
  cfg = {};
  cfg.noise_sd = 0.0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.crash_prob = 1.5;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.n = 1;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("panel shape and determinism") {
  HubSimConfig cfg;
  const SimulatedPanel a = simulate_panel(cfg);
  const SimulatedPanel b = simulate_panel(cfg);
  CHECK(a.panel.num_times() == 100);
  CHECK(a.panel.num_entities() == 30);
  CHECK(a.panel.values() == b.panel.values());
  CHECK(a.factors.rows() == 100);
  CHECK(a.factors.cols() == 3);
  cfg.seed = 2;
  CHECK(simulate_panel(cfg).panel.values() != a.panel.values());
  cfg.factor_scope = FactorScope::Global;
  CHECK(simulate_panel(cfg).factors.cols() == 1);
}

TEST_CASE("no crashes collapses to AR(1)") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 5000;
  cfg.crash_prob = 0.0;
  const SimulatedPanel sim = simulate_panel(cfg);
  CHECK(sim.factors.sum() == 0);
  for (Index j = 0; j < 10; ++j) {
    const Vector x = sim.panel.values().col(j);
    CHECK(std::abs(lag1_autocorrelation(x) - 0.4) < 0.05);
    const Vector innov = x.tail(4999) - 0.4 * x.head(4999);
    CHECK(std::abs(std::sqrt((innov.array() - innov.mean()).square().sum() / 4998.0) - 0.1) < 0.005);
  }
}

TEST_CASE("permanent crash regime") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 5000;
  cfg.crash_prob = 1.0;
  const SimulatedPanel sim = simulate_panel(cfg);
  const Vector hub = sim.panel.values().col(0);
  CHECK(std::abs(hub.mean() + 0.8) < 0.01);
  CHECK(std::abs(lag1_autocorrelation(hub)) < 0.05);
  // Peripherals: x = 0.4 x + 0.6 h + e with E h = -0.8 has mean -0.8.
  CHECK(std::abs(sim.panel.values().col(5).mean() + 0.8) < 0.02);
}

TEST_CASE("crash frequency") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 20000;
  const SimulatedPanel sim = simulate_panel(cfg);
  CHECK(std::abs(sim.factors.cast<double>().mean() - 0.05) < 0.01);
}

TEST_CASE("hub mean matches the regime-switching fixed point") {
  // Independent check of the closed form: iterate the expectation recursion
  // m <- (1 - c) a m + c mu_B to convergence.
  for (double c : {0.05, 0.2, 0.5}) {
    HubSimConfig cfg;
    cfg.crash_prob = c;
    double m = 0.0;
    for (int it = 0; it < 1000; ++it) m = (1 - c) * cfg.ar_coef * m + c * cfg.crash_mean;
    CHECK(analytic_hub_mean(cfg) == doctest::Approx(m).epsilon(1e-12));

    cfg.p = 10;
    cfg.n = 20000;
    cfg.seed = 77;
    const Vector hub = simulate_panel(cfg).panel.values().col(0);
    CHECK(std::abs(hub.mean() - analytic_hub_mean(cfg)) < 0.02);
  }
  HubSimConfig def;
  CHECK(analytic_hub_mean(def) == doctest::Approx(0.05 * -0.8 / (1 - 0.4 * 0.95)));
}

TEST_CASE("crashes drive peripherals one step later") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 20000;
  cfg.seed = 5;
  const SimulatedPanel sim = simulate_panel(cfg);
  const Matrix& x = sim.panel.values();
  // After a crash at t-1, x_p(t) - 0.4 x_p(t-1) = 0.6 h(t-1) + e; otherwise pure e.
  double crash_resid = 0.0, calm_resid = 0.0;
  Index crash_n = 0, calm_n = 0;
  for (Index t = 1; t < cfg.n; ++t) {
    const double r = x(t, 3) - 0.4 * x(t - 1, 3);
    if (sim.factors(t - 1, 0)) {
      crash_resid += r - 0.6 * x(t - 1, 0);
      ++crash_n;
    } else {
      calm_resid += r * r;
      ++calm_n;
    }
  }
  CHECK(std::abs(crash_resid / crash_n) < 0.02);
  CHECK(std::abs(std::sqrt(calm_resid / calm_n) - 0.1) < 0.005);
}

TEST_CASE("global factor correlates components") {
  HubSimConfig cfg;
  cfg.p = 20;
  cfg.n = 5000;
  cfg.factor_scope = FactorScope::Global;
  const Matrix x = simulate_panel(cfg).panel.values();
  const Vector a = x.col(0), b = x.col(10);
  const double corr_global = ((a.array() - a.mean()) * (b.array() - b.mean())).sum() /
                             std::sqrt((a.array() - a.mean()).square().sum() * (b.array() - b.mean()).square().sum());
  cfg.factor_scope = FactorScope::PerComponent;
  const Matrix y = simulate_panel(cfg).panel.values();
  const Vector c = y.col(0), d = y.col(10);
  const double corr_local = ((c.array() - c.mean()) * (d.array() - d.mean())).sum() /
                            std::sqrt((c.array() - c.mean()).square().sum() * (d.array() - d.mean()).square().sum());
  CHECK(corr_global > 0.5);
  CHECK(std::abs(corr_local) < 0.1);
}

TEST_CASE("recovery scores") {
  const GroundTruth truth = generate_hub_truth(30);
  const Recovery perfect = score_recovery(as_network(truth.adjacency), truth);
  CHECK(perfect.sensitivity == 100.0);
  CHECK(perfect.specificity == 100.0);
  const Recovery empty = score_recovery(as_network(Adjacency::Zero(30, 30)), truth);
  CHECK(empty.sensitivity == 0.0);
  CHECK(empty.specificity == 100.0);
  Adjacency full = Adjacency::Ones(30, 30);
  full.diagonal().setZero();
  const Recovery complete = score_recovery(as_network(full), truth);
  CHECK(complete.sensitivity == 100.0);
  CHECK(complete.specificity == 0.0);

  Adjacency partial = truth.adjacency;
  partial(0, 1) = partial(1, 0) = 0;
  partial(0, 29) = partial(29, 0) = 1;
  const Recovery mixed = score_recovery(as_network(partial), truth);
  CHECK(mixed.sensitivity == doctest::Approx(100.0 * 26 / 27));
  CHECK(mixed.specificity == doctest::Approx(100.0 * (435 - 27 - 1) / (435 - 27)));

  CHECK(code_of([&] { score_recovery(as_network(Adjacency::Zero(10, 10)), truth); }) == Errc::DimensionMismatch);
}

TEST_CASE("directed recovery scores") {
  const GroundTruth truth = generate_hub_truth(30);
  CHECK(truth.directed.sum() == 27);
  CHECK(truth.directed(5, 0) == 1);
  CHECK(truth.directed(0, 5) == 0);
  CHECK(symmetrize_support(truth.directed) == truth.adjacency);

  const Recovery perfect = score_directed_recovery(truth.directed, truth);
  CHECK(perfect.sensitivity == 100.0);
  CHECK(perfect.specificity == 100.0);
  const Recovery reversed = score_directed_recovery(Adjacency(truth.directed.transpose()), truth);
  CHECK(reversed.sensitivity == 0.0);
  CHECK(reversed.specificity == doctest::Approx(100.0 * (870 - 27 - 27) / (870 - 27)));
  const Recovery both = score_directed_recovery(truth.adjacency, truth);
  CHECK(both.sensitivity == 100.0);
  CHECK(both.specificity == doctest::Approx(100.0 * (870 - 54) / (870 - 27)));
  CHECK_THROWS_AS(score_directed_recovery(Adjacency::Zero(10, 10), truth), Error);
}

TEST_CASE("studies with stub estimators") {
  HubSimConfig cfg;
  cfg.p = 20;
  cfg.n = 40;
  const GroundTruth truth = generate_hub_truth(20);
  const Estimator oracle = [&](const ReturnPanel&) { return Estimate{as_network(truth.adjacency), truth.directed}; };
  const StudyResult good = run_study(cfg, oracle, 7);
  CHECK(good.score.sensitivity_mean == 100.0);
  CHECK(good.score.sensitivity_sd == 0.0);
  CHECK(good.score.specificity_mean == 100.0);
  CHECK(good.score.specificity_sd == 0.0);
  CHECK(good.score.n_replicates == 7);
  CHECK(good.heatmap == truth.adjacency.cast<double>());
  REQUIRE(good.directed_score);
  CHECK(good.directed_score->sensitivity_mean == 100.0);
  CHECK(good.directed_score->specificity_mean == 100.0);

  const Estimator none = [](const ReturnPanel& panel) {
    return Estimate{as_network(Adjacency::Zero(panel.num_entities(), panel.num_entities())), {}};
  };
  const StudyResult bad = run_study(cfg, none, 3);
  CHECK(bad.heatmap.isZero(0.0));
  CHECK_FALSE(bad.directed_score);
  CHECK(bad.score.sensitivity_mean == 0.0);

  CHECK_THROWS_AS(run_study(cfg, oracle, 0), Error);
}

TEST_CASE("study aggregation with a randomized estimator") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 30;
  // Random edges keyed on the data so replicates differ but stay reproducible.
  const Estimator noisy = [](const ReturnPanel& panel) {
    const Matrix& v = panel.values();
    std::mt19937_64 rng(static_cast<std::uint64_t>(std::abs(v(0, 0)) * 1e9));
    std::bernoulli_distribution coin(0.4);
    Adjacency a = Adjacency::Zero(10, 10);
    for (Index i = 0; i < 10; ++i)
      for (Index j = i + 1; j < 10; ++j) a(i, j) = a(j, i) = coin(rng) ? 1 : 0;
    return Estimate{as_network(a), {}};
  };
  const StudyResult r = run_study(cfg, noisy, 12);
  const StudyResult again = run_study(cfg, noisy, 12);
  CHECK(r.heatmap == again.heatmap);
  CHECK(r.score.sensitivity_mean == again.score.sensitivity_mean);
  CHECK(r.heatmap == r.heatmap.transpose());
  CHECK(r.heatmap.diagonal().isZero(0.0));

  std::vector<double> sens;
  for (const auto& rep : r.replicates) sens.push_back(rep.sensitivity);
  CHECK(r.score.sensitivity_mean == doctest::Approx(stats::mean(sens)).epsilon(1e-14));
  CHECK(r.score.sensitivity_sd == doctest::Approx(std::sqrt(stats::sample_variance(sens))).epsilon(1e-12));

  const GroundTruth truth = generate_hub_truth(10);
  double on_edges = 0.0;
  for (Index i = 0; i < 10; ++i)
    for (Index j = i + 1; j < 10; ++j)
      if (truth.adjacency(i, j)) on_edges += r.heatmap(i, j) / 9.0;
  CHECK(std::abs(on_edges - r.score.sensitivity_mean / 100.0) < 1e-10);
}

TEST_CASE("small real experiment is deterministic and sensible") {
  HubSimConfig cfg;
  cfg.p = 10;
  cfg.n = 100;
  CVConfig cv;
  cv.default_grid_size = 20;
  const RecoveryScore a = run_experiment(cfg, Method::qgc(0.05), cv, 3);
  const RecoveryScore b = run_experiment(cfg, Method::qgc(0.05), cv, 3);
  CHECK(a.sensitivity_mean == b.sensitivity_mean);
  CHECK(a.specificity_mean == b.specificity_mean);
  CHECK(a.specificity_sd == b.specificity_sd);
  CHECK(a.sensitivity_mean > 50.0);

  const StudyResult study = run_study(cfg, multivariate_estimator(Method::qgc(0.05), cv), 3);
  REQUIRE(study.directed_score);
  CHECK(study.score.sensitivity_mean == a.sensitivity_mean);
  // Missing a hub->peripheral link in both directions loses the undirected
  // edge, so directed sensitivity can only be lower or equal.
  CHECK(study.directed_score->sensitivity_mean <= study.score.sensitivity_mean + 1e-12);

  const Matrix heat = edge_detection_heatmap(cfg, Method::gc(), cv, 3);
  CHECK(heat == heat.transpose());
  CHECK(heat.minCoeff() >= 0.0);
  CHECK(heat.maxCoeff() <= 1.0);
}
