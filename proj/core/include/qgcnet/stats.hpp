#pragma once

#include <span>

namespace qgc::stats {

double normal_cdf(double x);
double normal_pdf(double x);
double normal_quantile(double p);

/// Upper tail P(T > t) of Student's t with `dof` degrees of freedom.
double student_t_sf(double t, double dof);
double student_t_quantile(double p, double dof);

double chi_squared_sf(double x, double dof);

double mean(std::span<const double> x);
/// Sample variance with divisor (n - 1).
double sample_variance(std::span<const double> x);

/// Empirical quantile by linear interpolation between order statistics
/// (type 7). `sorted` must be ascending.
double sorted_quantile(std::span<const double> sorted, double p);

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_sf(double lambda);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against N(mean, sd^2); p-value from
/// the Kolmogorov limit with Stephens' finite-sample correction.
KsResult ks_test_normal(std::span<const double> sample, double mean, double sd);

/// Ljung-Box portmanteau statistic over lags 1..max_lag and its chi-square
/// p-value with max_lag degrees of freedom.
struct LjungBoxResult {
  double statistic = 0.0;
  double p_value = 1.0;
};
LjungBoxResult ljung_box(std::span<const double> x, int max_lag);

}  // namespace qgc::stats
