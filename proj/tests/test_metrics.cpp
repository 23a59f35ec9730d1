#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "qgcnet/metrics.hpp"

using namespace qgc;

namespace {

std::vector<std::string> ids(Index p) {
  std::vector<std::string> out;
  for (Index i = 0; i < p; ++i) out.push_back("n" + std::to_string(100 + i));
  return out;
}

Network make_network(const Adjacency& a) {
  return Network(a, ids(a.rows()), NetworkMethod::GcMultivariate, std::nullopt, {});
}

Network hub_component(Index p, Index hub_size) {
  Adjacency a = Adjacency::Zero(p, p);
  for (Index j = 1; j < hub_size; ++j) a(0, j) = a(j, 0) = 1;
  return make_network(a);
}

Network random_network(std::mt19937_64& rng, Index p, double density) {
  std::bernoulli_distribution coin(density);
  Adjacency a = Adjacency::Zero(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = i + 1; j < p; ++j)
      if (coin(rng)) a(i, j) = a(j, i) = 1;
  return make_network(a);
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

double oracle_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    syy += y[i] * y[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / std::sqrt((m * sxx - sx * sx) * (m * syy - sy * sy));
}

}  // namespace

TEST_CASE("degrees of canonical networks") {
  const Network empty = make_network(Adjacency::Zero(6, 6));
  CHECK(node_degrees(empty) == std::vector<Index>(6, 0));
  CHECK(average_degree(empty) == 0.0);

  Adjacency full = Adjacency::Ones(5, 5);
  full.diagonal().setZero();
  CHECK(node_degrees(make_network(full)) == std::vector<Index>(5, 4));
  CHECK(average_degree(make_network(full)) == 4.0);

  const Network hub = hub_component(10, 10);
  const auto deg = node_degrees(hub);
  CHECK(deg[0] == 9);
  for (Index i = 1; i < 10; ++i) CHECK(deg[i] == 1);
  CHECK(average_degree(hub) == doctest::Approx(1.8));
}

TEST_CASE("handshake lemma") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 30; ++rep) {
    const Network net = random_network(rng, 12, 0.3);
    const auto deg = node_degrees(net);
    CHECK(std::accumulate(deg.begin(), deg.end(), Index{0}) == 2 * net.edge_count());
  }
}

TEST_CASE("standardized degrees") {
  CHECK(code_of([] { standardized_degrees(hub_component(4, 1)); }) == Errc::ZeroVariance);

  const auto z = standardized_degrees(hub_component(10, 10));
  const double sd = std::sqrt((std::pow(9 - 1.8, 2) + 9 * std::pow(1 - 1.8, 2)) / 10.0);
  CHECK(z[0] == doctest::Approx((9 - 1.8) / sd));
  for (std::size_t i = 1; i < z.size(); ++i) CHECK(z[i] < 0.0);

  std::mt19937_64 rng(4);
  for (int rep = 0; rep < 20; ++rep) {
    const Network net = random_network(rng, 15, 0.4);
    const auto s = standardized_degrees(net);
    const double m = std::accumulate(s.begin(), s.end(), 0.0) / 15.0;
    double v = 0.0;
    for (double x : s) v += (x - m) * (x - m);
    CHECK(std::abs(m) < 1e-12);
    CHECK(v / 15.0 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("top k nodes") {
  Adjacency a = Adjacency::Zero(30, 30);
  for (Index h : {0, 10, 20})
    for (Index j = h + 1; j < h + 10; ++j) a(h, j) = a(j, h) = 1;
  a(0, 10) = a(10, 0) = 1;
  const Network net = make_network(a);
  const auto top = top_k_nodes(net, 3);
  CHECK(top[0].first == "n100");
  CHECK(top[1].first == "n110");
  CHECK(top[2].first == "n120");
  CHECK(top[0].second == 10);
  CHECK(top[2].second == 9);

  const auto all = top_k_nodes(net, 30);
  CHECK(all.size() == 30);
  for (std::size_t i = 1; i < all.size(); ++i) {
    CHECK(all[i - 1].second >= all[i].second);
    if (all[i - 1].second == all[i].second) CHECK(all[i - 1].first < all[i].first);
  }

  Adjacency tie = Adjacency::Zero(12, 12);
  for (Index j = 2; j < 7; ++j) tie(1, j) = tie(j, 1) = 1;
  for (Index j = 7; j < 12; ++j) tie(0, j) = tie(j, 0) = 1;
  std::vector<std::string> names{"BBB", "AAA"};
  for (int i = 2; i < 12; ++i) names.push_back("Z" + std::to_string(i));
  const Network tied(tie, names, NetworkMethod::GcBivariate, std::nullopt, {});
  CHECK(top_k_nodes(tied, 1)[0].first == "AAA");

  CHECK(code_of([&] { top_k_nodes(net, 0); }) == Errc::InvalidK);
  CHECK(code_of([&] { top_k_nodes(net, 31); }) == Errc::InvalidK);
}

TEST_CASE("degree series scaling") {
  std::mt19937_64 rng(5);
  std::vector<Network> nets;
  std::vector<std::string> labels;
  for (int w = 0; w < 25; ++w) {
    nets.push_back(random_network(rng, 10, 0.05 + 0.02 * w));
    labels.push_back("w" + std::to_string(w));
  }
  const DegreeSeries s = degree_series(nets, labels);
  CHECK(s.window_labels == labels);
  double mean_avg = 0.0, mean_scaled = 0.0;
  for (std::size_t i = 0; i < nets.size(); ++i) {
    CHECK(s.average_degree[i] == average_degree(nets[i]));
    mean_avg += s.average_degree[i] / 25.0;
    mean_scaled += s.scaled_average_degree[i] / 25.0;
  }
  CHECK(std::abs(mean_scaled - 1.0) < 1e-10);
  for (std::size_t i = 0; i < nets.size(); ++i)
    CHECK(s.scaled_average_degree[i] == doctest::Approx(s.average_degree[i] / mean_avg).epsilon(1e-12));

  CHECK_THROWS_AS(degree_series(nets, {"a"}), Error);
}

TEST_CASE("pearson correlation") {
  std::vector<double> x{1, 2, 4, 7, 11};
  std::vector<double> neg;
  for (double v : x) neg.push_back(-2.0 * v + 1.0);
  CHECK(pearson_correlation_test(x, x).statistic == doctest::Approx(1.0));
  CHECK(pearson_correlation_test(x, neg).statistic == doctest::Approx(-1.0));

  std::mt19937_64 rng(6);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> a(40), b(40);
    for (int i = 0; i < 40; ++i) {
      a[i] = normal(rng);
      b[i] = 0.3 * a[i] + normal(rng);
    }
    const TestResult res = pearson_correlation_test(a, b);
    const double r = oracle_pearson(a, b);
    CHECK(std::abs(res.statistic - r) < 1e-12);
    CHECK(res.statistic >= -1.0);
    CHECK(res.statistic <= 1.0);
    const double t = std::abs(r) * std::sqrt(38.0 / (1 - r * r));
    CHECK(res.p_value == doctest::Approx(2.0 * (1.0 - oracle::t_cdf(t, 38.0))).epsilon(1e-6));
  }

  CHECK(code_of([&] { pearson_correlation_test(x, std::vector<double>(5, 1.0)); }) == Errc::ConstantInput);
  CHECK(code_of([&] { pearson_correlation_test(x, {1, 2, 3}); }) == Errc::LengthMismatch);
  CHECK(code_of([&] { pearson_correlation_test({1, 2}, {2, 1}); }) == Errc::TooFewSamples);
}

TEST_CASE("welch t test") {
  const std::vector<double> a{1.0, 2.0, 3.5, 2.2};
  const TestResult same = welch_t_test_greater(a, a);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == doctest::Approx(0.5));

  const TestResult far = welch_t_test_greater({100.0, 100.1, 99.9}, {0.0, 0.1, -0.1});
  CHECK(far.p_value < 1e-6);
  const TestResult reverse = welch_t_test_greater({0.0, 0.1, -0.1}, {100.0, 100.1, 99.9});
  CHECK(reverse.p_value > 1.0 - 1e-6);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 10; ++rep) {
    std::vector<double> u(12), v(30);
    for (auto& e : u) e = 0.5 + 2.0 * normal(rng);
    for (auto& e : v) e = normal(rng);
    auto moments = [](const std::vector<double>& s) {
      double m = 0, q = 0;
      for (double e : s) m += e;
      m /= s.size();
      for (double e : s) q += (e - m) * (e - m);
      return std::pair{m, q / (s.size() - 1)};
    };
    const auto [mu, vu] = moments(u);
    const auto [mv, vv] = moments(v);
    const double su = vu / 12.0, sv = vv / 30.0;
    const double t = (mu - mv) / std::sqrt(su + sv);
    const double dof = (su + sv) * (su + sv) / (su * su / 11.0 + sv * sv / 29.0);
    const TestResult res = welch_t_test_greater(u, v);
    CHECK(std::abs(res.statistic - t) < 1e-10);
    const double upper = t >= 0 ? 1.0 - oracle::t_cdf(t, dof) : oracle::t_cdf(-t, dof);
    CHECK(res.p_value == doctest::Approx(upper).epsilon(1e-6));
  }

  CHECK(code_of([] { welch_t_test_greater({1.0}, {1.0, 2.0}); }) == Errc::TooFewSamples);
}

TEST_CASE("stability labels") {
  std::vector<std::string> labels;
  for (int i = 0; i < 12; ++i) labels.push_back("w" + std::to_string(i));
  CHECK(label_stability(labels, {}) == std::vector<bool>(12, false));

  const auto one = label_stability(labels, {"w5"}, 2);
  for (int i = 0; i < 12; ++i) CHECK(one[i] == (i >= 3 && i <= 7));

  const auto ends = label_stability(labels, {"w0", "w11"}, 2);
  for (int i = 0; i < 12; ++i) CHECK(ends[i] == (i <= 2 || i >= 9));

  CHECK(code_of([&] { label_stability(labels, {"nope"}); }) == Errc::UnknownEvent);
}
