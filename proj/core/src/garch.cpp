#include "qgcnet/garch.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <tbb/parallel_for.h>

#include "qgcnet/stats.hpp"

namespace qgc {

void check_params(const GarchParams& params) {
  if (!(params.omega > 0.0) || params.gamma_arch < 0.0 || params.eta_garch < 0.0 ||
      !(params.gamma_arch + params.eta_garch < 1.0)) {
    throw Error(Errc::InvalidConfig, "GARCH parameters violate omega > 0, gamma, eta >= 0, gamma + eta < 1");
  }
}

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }
double logit(double p) { return std::log(p / (1.0 - p)); }

// Unconstrained coordinates: (mu, log omega, logit persistence, logit share).
GarchParams from_free(const std::array<double, 4>& z) {
  const double persistence = logistic(z[2]);
  const double share = logistic(z[3]);
  return {z[0], std::exp(z[1]), persistence * share, persistence * (1.0 - share)};
}

std::array<double, 4> to_free(const GarchParams& p) {
  const double persistence = p.gamma_arch + p.eta_garch;
  return {p.mu, std::log(p.omega), logit(persistence), logit(p.gamma_arch / persistence)};
}

struct Series {
  std::span<const double> x;
  double variance;
};

double log_likelihood(const Series& s, const GarchParams& p) {
  double sigma2 = s.variance;
  double ll = 0.0;
  for (std::size_t t = 0; t < s.x.size(); ++t) {
    if (t > 0) {
      const double prev = s.x[t - 1] - p.mu;
      sigma2 = p.omega + p.gamma_arch * prev * prev + p.eta_garch * sigma2;
    }
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) return -std::numeric_limits<double>::infinity();
    const double e = s.x[t] - p.mu;
    ll -= 0.5 * (kLog2Pi + std::log(sigma2) + e * e / sigma2);
  }
  return ll;
}

double negative_ll(const gsl_vector* v, void* params) {
  const auto* s = static_cast<const Series*>(params);
  std::array<double, 4> z{};
  for (std::size_t i = 0; i < 4; ++i) z[i] = gsl_vector_get(v, i);
  const double ll = log_likelihood(*s, from_free(z));
  return std::isfinite(ll) ? -ll : std::numeric_limits<double>::max();
}

struct Optimum {
  std::array<double, 4> z;
  double value;
};

Optimum nelder_mead(const Series& series, std::array<double, 4> start) {
  gsl_multimin_function fn{&negative_ll, 4, const_cast<Series*>(&series)};
  gsl_vector* x = gsl_vector_alloc(4);
  gsl_vector* step = gsl_vector_alloc(4);
  const double scale = std::sqrt(series.variance);
  const std::array<double, 4> steps{0.1 * scale, 0.5, 0.5, 0.5};
  for (std::size_t i = 0; i < 4; ++i) {
    gsl_vector_set(x, i, start[i]);
    gsl_vector_set(step, i, steps[i]);
  }
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 4);
  gsl_multimin_fminimizer_set(m, &fn, x, step);
  for (int iter = 0; iter < 5000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-9) == GSL_SUCCESS) break;
  }
  Optimum out{};
  for (std::size_t i = 0; i < 4; ++i) out.z[i] = gsl_vector_get(m->x, i);
  out.value = m->fval;
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return out;
}

Eigen::Vector4d hessian_standard_errors(const Series& series, const GarchParams& p) {
  const Eigen::Vector4d theta(p.mu, p.omega, p.gamma_arch, p.eta_garch);
  const auto ll = [&](const Eigen::Vector4d& th) {
    return log_likelihood(series, {th(0), th(1), th(2), th(3)});
  };
  Eigen::Vector4d h;
  for (int i = 0; i < 4; ++i) h(i) = 1e-4 * std::max(std::abs(theta(i)), 1e-2 * (i == 0 ? std::sqrt(series.variance) : 1.0));
  Eigen::Matrix4d hess;
  const double f0 = ll(theta);
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double v;
      if (i == j) {
        Eigen::Vector4d up = theta, dn = theta;
        up(i) += h(i);
        dn(i) -= h(i);
        v = (ll(up) - 2.0 * f0 + ll(dn)) / (h(i) * h(i));
      } else {
        Eigen::Vector4d pp = theta, pm = theta, mp = theta, mm = theta;
        pp(i) += h(i); pp(j) += h(j);
        pm(i) += h(i); pm(j) -= h(j);
        mp(i) -= h(i); mp(j) += h(j);
        mm(i) -= h(i); mm(j) -= h(j);
        v = (ll(pp) - ll(pm) - ll(mp) + ll(mm)) / (4.0 * h(i) * h(j));
      }
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  Eigen::Vector4d se = Eigen::Vector4d::Constant(std::nan(""));
  if (!hess.allFinite()) return se;
  const Eigen::LLT<Eigen::Matrix4d> llt(-hess);
  if (llt.info() != Eigen::Success) return se;
  const Eigen::Matrix4d cov = llt.solve(Eigen::Matrix4d::Identity());
  return cov.diagonal().cwiseSqrt();
}

FilterResult make_result(std::span<const double> x, double variance, const GarchParams& p) {
  FilterResult out;
  out.params = p;
  const auto n = static_cast<Index>(x.size());
  out.sigma_path.resize(n);
  out.residuals.resize(n);
  double sigma2 = variance;
  for (Index t = 0; t < n; ++t) {
    if (t > 0) {
      const double prev = x[t - 1] - p.mu;
      sigma2 = p.omega + p.gamma_arch * prev * prev + p.eta_garch * sigma2;
    }
    out.sigma_path(t) = std::sqrt(sigma2);
    out.residuals(t) = (x[t] - p.mu) / out.sigma_path(t);
  }
  return out;
}

}  // namespace

double garch_log_likelihood(std::span<const double> series, const GarchParams& params) {
  return log_likelihood({series, stats::sample_variance(series)}, params);
}

FilterResult fit_garch11(std::span<const double> series) {
  if (series.size() < 10) {
    throw Error(Errc::TooShort, "GARCH(1,1) needs at least 10 observations");
  }
  for (double v : series) {
    if (!std::isfinite(v)) throw Error(Errc::NonFiniteValue, "GARCH input must be finite");
  }
  const double mean = stats::mean(series);
  const double variance = stats::sample_variance(series);
  if (!(variance > 1e-14 * std::max(1.0, mean * mean))) {
    throw Error(Errc::ConstantSeries, "series has zero variance");
  }
  const Series s{series, variance};

  const std::array<GarchParams, 3> starts{{
      {mean, variance * 0.05, 0.05, 0.90},
      {mean, variance * 0.10, 0.10, 0.80},
      {mean, variance * 0.70, 0.05, 0.25},
  }};
  std::optional<Optimum> best;
  for (const auto& start : starts) {
    Optimum opt = nelder_mead(s, to_free(start));
    // One restart from the optimum guards against premature simplex collapse.
    opt = nelder_mead(s, opt.z);
    if (!best || opt.value < best->value) best = opt;
  }

  const GarchParams constant{mean, variance, 0.0, 0.0};
  const double constant_ll = log_likelihood(s, constant);
  const GarchParams fitted = from_free(best->z);
  const double fitted_ll = log_likelihood(s, fitted);
  if (!std::isfinite(fitted_ll) || fitted_ll < constant_ll - 1e-6) {
    throw Error(Errc::OptimizationFailed, "GARCH likelihood search did not improve on constant variance");
  }

  FilterResult out = make_result(series, variance, fitted);
  out.log_likelihood = fitted_ll;
  out.standard_errors = hessian_standard_errors(s, fitted);
  return out;
}

Vector simulate_garch11(const GarchParams& params, Index length, std::uint64_t seed, Index burn_in) {
  check_params(params);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double sigma2 = params.omega / (1.0 - params.gamma_arch - params.eta_garch);
  double prev = 0.0;
  Vector out(length);
  for (Index t = -burn_in; t < length; ++t) {
    sigma2 = params.omega + params.gamma_arch * prev * prev + params.eta_garch * sigma2;
    prev = std::sqrt(sigma2) * normal(rng);
    if (t >= 0) out(t) = params.mu + prev;
  }
  return out;
}

FilteredPanel filter_panel(const ReturnPanel& panel) {
  const Index p = panel.num_entities();
  const Index rows = panel.num_times();
  Matrix out(rows, p);
  std::vector<std::string> notes(static_cast<std::size_t>(p));
  std::vector<std::optional<Error>> failures(static_cast<std::size_t>(p));

  tbb::parallel_for(Index{0}, p, [&](Index j) {
    const Vector col = panel.values().col(j);
    const std::span<const double> x(col.data(), static_cast<std::size_t>(col.size()));
    try {
      out.col(j) = fit_garch11(x).residuals;
      return;
    } catch (const Error& e) {
      if (e.code() == Errc::NonFiniteValue) {
        failures[j] = e;
        return;
      }
      notes[j] = panel.entity_ids()[j] + ": " + std::string(to_string(e.code())) +
                 ", fell back to plain standardization";
    }
    if (col.size() < 2) {
      failures[j] = Error(Errc::ConstantSeries, "cannot standardize a single observation");
      return;
    }
    const double mean = stats::mean(x);
    const double sd = std::sqrt(stats::sample_variance(x));
    if (!(sd > 0.0)) {
      failures[j] = Error(Errc::ConstantSeries, "column " + panel.entity_ids()[j] + " is constant");
      return;
    }
    out.col(j) = (col.array() - mean) / sd;
  });

  for (const auto& f : failures) {
    if (f) throw *f;
  }
  FilteredPanel result{panel.with_values(std::move(out)), {}};
  for (auto& note : notes) {
    if (!note.empty()) result.warnings.push_back(std::move(note));
  }
  return result;
}

}  // namespace qgc
