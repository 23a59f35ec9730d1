#include "qgcnet/tools/app.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "qgcnet/tools/commands.hpp"
#include "qgcnet/tools/csv.hpp"

namespace qgc::tools {

namespace {

using nlohmann::json;

/// Reads CLI11 options from a JSON object. Top-level keys belong to the
/// invoked subcommand, nested objects name subcommands explicitly and
/// arrays become multi-valued options.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(std::string section) : section_(std::move(section)) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    json doc;
    try {
      doc = json::parse(input);
    } catch (const json::parse_error& e) {
      throw CLI::ConversionError("config", e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config", "top level must be a JSON object");
    std::vector<CLI::ConfigItem> items;
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        flatten(value, {key}, items);
      } else {
        flatten(json{{key, value}}, section_.empty() ? std::vector<std::string>{} : std::vector{section_}, items);
      }
    }
    return items;
  }

 private:
  std::string section_;

  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    return v.dump();
  }

  static void flatten(const json& obj, const std::vector<std::string>& parents, std::vector<CLI::ConfigItem>& items) {
    for (const auto& [key, value] : obj.items()) {
      if (value.is_null()) continue;
      if (value.is_object()) {
        auto next = parents;
        next.push_back(key);
        flatten(value, next, items);
        continue;
      }
      CLI::ConfigItem item;
      item.parents = parents;
      item.name = key;
      if (value.is_array()) {
        for (const auto& e : value) item.inputs.push_back(scalar(e));
      } else {
        item.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(item));
    }
  }
};

void print_error(std::ostream& err, std::string_view code, const std::string& message) {
  err << json{{"error", {{"code", code}, {"message", message}}}}.dump() << '\n';
}

bool is_config_error(Errc code) {
  return code == Errc::InvalidConfig || code == Errc::InvalidTau || code == Errc::InvalidP;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  static const std::vector<std::string> kCommands{"estimate", "simulate", "benchmark", "theorem"};
  const auto invoked = std::find_first_of(args.begin(), args.end(), kCommands.begin(), kCommands.end());

  CLI::App app{"Granger and quantile Granger causality networks"};
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.option_defaults()->always_capture_default();
  app.config_formatter(std::make_shared<JsonConfig>(invoked == args.end() ? "" : *invoked));
  app.set_config("--config", "", "JSON file of option values; command-line flags take precedence");

  std::string out_dir;
  std::function<OutputSet()> job;
  std::string command;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--out-dir", out_dir, "Directory for the outputs")->required();
  };

  EstimateOptions est;
  double est_tau = 0.5;
  auto* estimate = app.add_subcommand("estimate", "Rolling-window GC/QGC networks from a return panel");
  common(estimate);
  estimate->add_option("--input", est.input, "CSV panel with header date,<ids>")->required()->check(CLI::ExistingFile);
  estimate->add_option("--method", est.method, "gc or qgc");
  auto* est_tau_opt = estimate->add_option("--tau", est_tau, "Quantile level (qgc only)")->default_str("");
  estimate->add_flag("--multivariate,!--bivariate", est.multivariate, "Multivariate lasso (default) or pairwise tests");
  estimate->add_option("--window", est.window, "Window length in rows");
  estimate->add_option("--step", est.step, "Rows between window starts");
  estimate->add_option("--folds", est.folds, "Cross-validation folds");
  estimate->add_flag("--share-lambda", est.share_lambda, "Use one penalty for every node");
  estimate->add_flag("--garch,!--no-garch", est.garch, "GARCH(1,1)-filter each window (default on)");
  estimate->add_option("--alpha", est.alpha, "Test level for bivariate networks");
  estimate->add_flag("--intercept,!--no-intercept", est.intercept, "Fit an unpenalized intercept (default on)");
  estimate->add_option("--seed", est.seed, "Recorded in summary.json; estimation is deterministic");
  estimate->callback([&] {
    command = "estimate";
    if (est_tau_opt->count() > 0) est.tau = est_tau;
    job = [&] { return run_estimate(est); };
  });

  SimulateOptions sim;
  std::string scope = "per-component";
  auto* simulate = app.add_subcommand("simulate", "Hub-network recovery study: score tables and heatmaps");
  common(simulate);
  simulate->add_option("--n", sim.n_values, "Series lengths, comma separated")->delimiter(',');
  simulate->add_option("--p", sim.p_values, "Node counts (multiples of 10), comma separated")->delimiter(',');
  simulate->add_option("--method", sim.methods, "Methods among gc,qgc, comma separated")->delimiter(',');
  simulate->add_option("--tau", sim.tau, "Quantile level for qgc");
  simulate->add_option("--reps", sim.reps, "Replicates per cell");
  simulate->add_option("--folds", sim.folds, "Cross-validation folds");
  simulate->add_flag("--share-lambda", sim.share_lambda, "Use one penalty for every node");
  simulate->add_flag("--intercept,!--no-intercept", sim.intercept, "Fit an unpenalized intercept (default on)");
  simulate->add_option("--factor-scope", scope, "per-component or global crash factor");
  simulate->add_option("--seed", sim.seed, "Base seed; replicate seeds derive from it");
  simulate->callback([&] {
    command = "simulate";
    if (scope == "per-component") {
      sim.factor_scope = FactorScope::PerComponent;
    } else if (scope == "global") {
      sim.factor_scope = FactorScope::Global;
    } else {
      throw Error(Errc::InvalidConfig, "unknown factor scope '" + scope + "'");
    }
    job = [&] { return run_simulate(sim); };
  });

  BenchmarkOptions bench;
  std::string events_file;
  auto* benchmark = app.add_subcommand("benchmark", "Correlate network degree with a covariate and test event windows");
  common(benchmark);
  benchmark->add_option("--degrees", bench.degrees, "degrees.csv from the estimate command")
      ->required()
      ->check(CLI::ExistingFile);
  benchmark->add_option("--covariate", bench.covariate, "CSV label,value sampled at window ends")
      ->check(CLI::ExistingFile);
  benchmark->add_option("--event", bench.events, "Event window label (repeatable)");
  benchmark->add_option("--events-file", events_file, "File with one event label per line")->check(CLI::ExistingFile);
  benchmark->add_option("--radius", bench.radius, "Windows on each side of an event counted as unstable");
  benchmark->callback([&] {
    command = "benchmark";
    if (!events_file.empty()) {
      for (auto& label : read_label_list(events_file)) bench.events.push_back(std::move(label));
    }
    job = [&] { return run_benchmark(bench); };
  });

  TheoremOptions thm;
  auto* theorem = app.add_subcommand("theorem", "Monte Carlo check of the quantile-regression limit law");
  common(theorem);
  theorem->add_option("--tau", thm.tau, "Quantile level");
  theorem->add_option("--n", thm.n, "Sample size");
  theorem->add_option("--reps", thm.reps, "Replicates (at least 200)");
  theorem->add_option("--lambda-scale", thm.lambda_scale, "c in lambda_n = c n^-e");
  theorem->add_option("--lambda-exponent", thm.lambda_exponent, "e in lambda_n = c n^-e");
  theorem->add_option("--compare-n", thm.compare_n, "Smaller n for the shrinkage comparison; 0 skips it");
  theorem->add_option("--seed", thm.seed, "Base seed");
  theorem->callback([&] {
    command = "theorem";
    job = [&] { return run_theorem(thm); };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    print_error(err, "InvalidConfig", e.what());
    return 2;
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what());
    return is_config_error(e.code()) ? 2 : 1;
  }

  try {
    const OutputSet files = job();
    files.commit(out_dir);
    std::vector<std::string> names;
    for (const auto& [name, content] : files.files()) names.push_back(name);
    out << json{{"status", "ok"}, {"command", command}, {"out_dir", out_dir}, {"files", names}}.dump() << '\n';
    return 0;
  } catch (const Error& e) {
    print_error(err, to_string(e.code()), e.what());
    return is_config_error(e.code()) ? 2 : 1;
  } catch (const std::exception& e) {
    print_error(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace qgc::tools
