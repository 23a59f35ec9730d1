#include "qgcnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "qgcnet/core.hpp"

namespace qgc::stats {

namespace bm = boost::math;

double normal_cdf(double x) { return bm::cdf(bm::normal_distribution<>(), x); }

double normal_pdf(double x) { return bm::pdf(bm::normal_distribution<>(), x); }

double normal_quantile(double p) { return bm::quantile(bm::normal_distribution<>(), p); }

double student_t_sf(double t, double dof) {
  return bm::cdf(bm::complement(bm::students_t_distribution<>(dof), t));
}

double student_t_quantile(double p, double dof) {
  return bm::quantile(bm::students_t_distribution<>(dof), p);
}

double chi_squared_sf(double x, double dof) {
  if (x <= 0.0) return 1.0;
  return bm::cdf(bm::complement(bm::chi_squared_distribution<>(dof), x));
}

double mean(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  const double m = mean(x);
  double s = 0.0;
  for (double v : x) s += (v - m) * (v - m);
  return s / static_cast<double>(x.size() - 1);
}

double sorted_quantile(std::span<const double> sorted, double p) {
  const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test_normal(std::span<const double> sample, double mean, double sd) {
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = normal_cdf((x[i] - mean) / sd);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  const double sqrt_n = std::sqrt(n);
  return {d, kolmogorov_sf((sqrt_n + 0.12 + 0.11 / sqrt_n) * d)};
}

LjungBoxResult ljung_box(std::span<const double> x, int max_lag) {
  const auto n = x.size();
  const double m = mean(x);
  double c0 = 0.0;
  for (double v : x) c0 += (v - m) * (v - m);
  double q = 0.0;
  for (int k = 1; k <= max_lag; ++k) {
    double ck = 0.0;
    for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) ck += (x[t] - m) * (x[t - k] - m);
    const double rho = ck / c0;
    q += rho * rho / static_cast<double>(n - static_cast<std::size_t>(k));
  }
  q *= static_cast<double>(n) * (static_cast<double>(n) + 2.0);
  return {q, chi_squared_sf(q, max_lag)};
}

}  // namespace qgc::stats
