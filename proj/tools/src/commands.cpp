#include "qgcnet/tools/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qgcnet/metrics.hpp"
#include "qgcnet/montecarlo.hpp"
#include "qgcnet/tools/csv.hpp"

namespace qgc::tools {

using nlohmann::ordered_json;

namespace {

CVConfig make_cv(int folds, bool share_lambda) {
  CVConfig cv;
  cv.n_folds = folds;
  cv.share_lambda = share_lambda;
  validate(cv);
  return cv;
}

std::string window_end(const ReturnPanel& panel, const Window& w) {
  return panel.timestamps()[w.start_index + w.length - 1];
}

std::string adjacency_csv(const Network& net) {
  std::ostringstream out;
  out << "node";
  for (const auto& id : net.entity_ids()) out << ',' << csv_field(id);
  out << '\n';
  for (Index i = 0; i < net.size(); ++i) {
    out << csv_field(net.entity_ids()[i]);
    for (Index j = 0; j < net.size(); ++j) out << ',' << net.adjacency()(i, j);
    out << '\n';
  }
  return out.str();
}

std::string padded(std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04zu", k);
  return buf;
}

ordered_json vector_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

ordered_json matrix_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Index i = 0; i < m.rows(); ++i) rows.push_back(vector_json(m.row(i).transpose()));
  return rows;
}

}  // namespace

Method parse_method(const std::string& name, std::optional<double> tau, bool intercept) {
  if (name == "gc") {
    if (tau) throw Error(Errc::InvalidConfig, "--tau applies only to the qgc method");
    return Method::gc(intercept);
  }
  if (name == "qgc") {
    if (!tau) throw Error(Errc::InvalidConfig, "the qgc method requires --tau");
    check_tau(*tau);
    return Method::qgc(*tau, intercept);
  }
  throw Error(Errc::InvalidConfig, "unknown method '" + name + "' (expected gc or qgc)");
}

OutputSet run_estimate(const EstimateOptions& options) {
  RollingConfig config;
  config.method = parse_method(options.method, options.tau, options.intercept);
  config.window_length = options.window;
  config.step = options.step;
  config.multivariate = options.multivariate;
  config.alpha = options.alpha;
  config.garch = options.garch;
  config.cv = make_cv(options.folds, options.share_lambda);
  if (!(options.alpha > 0.0 && options.alpha < 1.0)) throw Error(Errc::InvalidConfig, "alpha must lie in (0, 1)");

  const ReturnPanel panel = read_panel_csv(options.input);
  const RollingResult result = rolling_networks(panel, config);

  std::vector<std::string> labels;
  for (const auto& net : result.networks) labels.push_back(window_end(panel, net.window()));
  const DegreeSeries series = degree_series(result.networks, labels);

  OutputSet files;
  std::ostringstream edges, degrees, windows;
  edges << "window_end,node_a,node_b\n";
  degrees << "window_end,average_degree,scaled_average_degree";
  for (const auto& id : panel.entity_ids()) degrees << ',' << csv_field(id);
  degrees << '\n';
  windows << "window,window_start,window_end,edge_count\n";

  for (std::size_t w = 0; w < result.networks.size(); ++w) {
    const Network& net = result.networks[w];
    const auto& ids = net.entity_ids();
    std::vector<std::pair<std::string, std::string>> pairs;
    for (Index i = 0; i < net.size(); ++i) {
      for (Index j = i + 1; j < net.size(); ++j) {
        if (!net.has_edge(i, j)) continue;
        pairs.emplace_back(std::min(ids[i], ids[j]), std::max(ids[i], ids[j]));
      }
    }
    std::sort(pairs.begin(), pairs.end());
    for (const auto& [a, b] : pairs) edges << csv_field(labels[w]) << ',' << csv_field(a) << ',' << csv_field(b) << '\n';

    degrees << csv_field(labels[w]) << ',' << format_double(series.average_degree[w]) << ','
            << format_double(series.scaled_average_degree[w]);
    for (Index d : node_degrees(net)) degrees << ',' << d;
    degrees << '\n';

    windows << w << ',' << csv_field(panel.timestamps()[net.window().start_index]) << ',' << csv_field(labels[w])
            << ',' << net.edge_count() << '\n';
    files.add("adjacency/window_" + padded(w) + ".csv", adjacency_csv(net));
  }
  files.add("edges.csv", edges.str());
  files.add("degrees.csv", degrees.str());
  files.add("windows.csv", windows.str());

  ordered_json summary;
  summary["command"] = "estimate";
  summary["method"] = options.method;
  summary["tau"] = options.tau ? ordered_json(*options.tau) : ordered_json(nullptr);
  summary["multivariate"] = options.multivariate;
  summary["window"] = options.window;
  summary["step"] = options.step;
  summary["folds"] = options.folds;
  summary["share_lambda"] = options.share_lambda;
  summary["garch"] = options.garch;
  summary["alpha"] = options.alpha;
  summary["intercept"] = options.intercept;
  summary["seed"] = options.seed;
  summary["entities"] = panel.num_entities();
  summary["windows"] = result.networks.size();
  summary["warnings"] = result.warnings;
  files.add("summary.json", summary.dump(2) + "\n");
  return files;
}

OutputSet run_simulate(const SimulateOptions& options) {
  if (options.reps < 1) throw Error(Errc::InvalidConfig, "--reps must be at least 1");
  if (options.n_values.empty() || options.p_values.empty() || options.methods.empty()) {
    throw Error(Errc::InvalidConfig, "simulation grid is empty");
  }
  std::vector<Method> methods;
  for (const auto& name : options.methods) {
    methods.push_back(parse_method(name, name == "qgc" ? std::optional<double>(options.tau) : std::nullopt,
                                   options.intercept));
  }
  const CVConfig cv = make_cv(options.folds, options.share_lambda);
  for (Index p : options.p_values) generate_hub_truth(p);

  std::ostringstream table, directed;
  const char* header = "n,p,method,tau,sensitivity_mean,sensitivity_sd,specificity_mean,specificity_sd\n";
  table << header;
  directed << header;
  OutputSet files;

  const auto row = [](std::ostringstream& out, Index n, Index p, const std::string& name, const Method& m,
                      const RecoveryScore& s) {
    out << n << ',' << p << ',' << name << ',' << (m.is_quantile() ? format_double(m.tau) : "") << ','
        << format_double(s.sensitivity_mean) << ',' << format_double(s.sensitivity_sd) << ','
        << format_double(s.specificity_mean) << ',' << format_double(s.specificity_sd) << '\n';
  };

  for (Index p : options.p_values) {
    for (Index n : options.n_values) {
      HubSimConfig config;
      config.p = p;
      config.n = n;
      config.factor_scope = options.factor_scope;
      config.seed = options.seed;
      validate(config);
      for (std::size_t k = 0; k < methods.size(); ++k) {
        const StudyResult study = run_study(config, multivariate_estimator(methods[k], cv), options.reps);
        row(table, n, p, options.methods[k], methods[k], study.score);
        row(directed, n, p, options.methods[k], methods[k], *study.directed_score);

        const std::vector<Index> order = hubs_first_order(generate_hub_truth(p));
        std::ostringstream heat;
        heat << "node";
        for (Index j : order) heat << ",x" << j;
        heat << '\n';
        for (Index i : order) {
          heat << 'x' << i;
          for (Index j : order) heat << ',' << format_double(study.heatmap(i, j));
          heat << '\n';
        }
        files.add("heatmaps/n" + std::to_string(n) + "_p" + std::to_string(p) + "_" + options.methods[k] + ".csv",
                  heat.str());
      }
    }
  }
  files.add("table1.csv", table.str());
  files.add("table1_directed.csv", directed.str());
  return files;
}

OutputSet run_benchmark(const BenchmarkOptions& options) {
  const DegreeTable table = read_degree_csv(options.degrees);
  ordered_json report;
  report["command"] = "benchmark";
  report["windows"] = table.window_labels.size();

  if (options.covariate) {
    std::map<std::string, double> lookup;
    for (const auto& [label, value] : read_labeled_series(*options.covariate)) lookup[label] = value;
    std::vector<double> cov;
    for (const auto& label : table.window_labels) {
      const auto it = lookup.find(label);
      if (it == lookup.end()) {
        throw Error(Errc::LengthMismatch, "covariate has no value for window label '" + label + "'");
      }
      cov.push_back(it->second);
    }
    const TestResult r = pearson_correlation_test(table.average_degree, cov);
    report["correlation"] = {{"r", r.statistic}, {"p_value", r.p_value}, {"n", cov.size()}};
  }

  if (!options.events.empty()) {
    const std::vector<bool> unstable = label_stability(table.window_labels, options.events, options.radius);
    std::vector<double> a, b;
    for (std::size_t i = 0; i < unstable.size(); ++i) (unstable[i] ? a : b).push_back(table.average_degree[i]);
    const TestResult t = welch_t_test_greater(a, b);
    report["welch"] = {{"t", t.statistic},
                       {"p_value", t.p_value},
                       {"n_unstable", a.size()},
                       {"n_stable", b.size()},
                       {"radius", options.radius}};
  }
  OutputSet files;
  files.add("benchmark.json", report.dump(2) + "\n");
  return files;
}

OutputSet run_theorem(const TheoremOptions& options) {
  if (options.reps < 200) throw Error(Errc::InvalidConfig, "the limit check needs --reps >= 200");
  QVARScenario base = default_scenario(options.tau, options.n);

  ordered_json report;
  report["command"] = "theorem";
  report["tau"] = options.tau;
  report["n"] = options.n;
  report["n_reps"] = options.reps;
  report["seed"] = options.seed;
  report["scenarios"] = ordered_json::array();

  double zero_error = 0.0;
  for (const bool penalized : {false, true}) {
    QVARScenario s = base;
    if (penalized) s.lambda_rule = {LambdaRule::Kind::Power, options.lambda_scale, options.lambda_exponent};
    const LimitCheckReport r = empirical_limit_check(s, options.reps, options.seed);
    if (!penalized) zero_error = r.cov_relative_error;
    ordered_json entry;
    entry["lambda_rule"] = penalized ? "power" : "zero";
    if (penalized) {
      entry["lambda_scale"] = options.lambda_scale;
      entry["lambda_exponent"] = options.lambda_exponent;
    }
    entry["lambda"] = r.lambda;
    entry["z_mean"] = vector_json(r.z_mean);
    entry["z_cov"] = matrix_json(r.z_cov);
    entry["target_variance"] = options.tau * (1.0 - options.tau);
    entry["cov_relative_error"] = r.cov_relative_error;
    entry["ks_p_values"] = r.ks_p_values;
    entry["median_error"] = r.median_error;
    entry["mean_bound"] = r.mean_bound;
    entry["pass"] = {{"covariance", r.covariance_ok()}, {"normality", r.normality_ok()}, {"mean", r.mean_ok()}};
    report["scenarios"].push_back(entry);
  }

  if (options.compare_n > 0) {
    const LimitCheckReport small = empirical_limit_check(default_scenario(options.tau, options.compare_n),
                                                         options.reps, options.seed);
    report["shrinkage"] = {{"n_small", options.compare_n},
                           {"cov_relative_error_small", small.cov_relative_error},
                           {"cov_relative_error_large", zero_error},
                           {"pass", zero_error < small.cov_relative_error}};
  }
  OutputSet files;
  files.add("theorem.json", report.dump(2) + "\n");
  return files;
}

}  // namespace qgc::tools
