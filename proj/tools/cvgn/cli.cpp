#include "cvgn/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "config.hpp"
#include "csv.hpp"
#include "cvgn/analysis.hpp"
#include "cvgn/errors.hpp"

namespace cvgn::cli {

namespace {

namespace fs = std::filesystem;

std::vector<Metric> supported_metrics(const ModelParams& model) {
  std::vector<Metric> out;
  for (Metric m : all_metrics()) {
    if (metric_supported(m, model)) out.push_back(m);
  }
  return out;
}

std::vector<Metric> requested_metrics(const RunConfig& config, const ModelParams& model) {
  if (config.sweep_metrics.empty()) return supported_metrics(model);
  std::vector<Metric> out;
  for (const auto& name : config.sweep_metrics) {
    const Metric m = parse_metric(name);
    if (!metric_supported(m, model)) {
      throw ValidationError("'metrics': " + name + " is not available for the " + config.model +
                            " model");
    }
    out.push_back(m);
  }
  return out;
}

double kappa_of(const ModelParams& model) {
  return std::visit([](const auto& p) { return p.kappa; }, model);
}

DataTable run_steady(const RunConfig& config) {
  const ModelParams model = to_model(config);
  const SteadyState s = steady_state(model);
  if (!s.covariance) {
    std::ostringstream msg;
    msg << "no steady state: max Re(eig A) = " << s.stability.max_real_part;
    throw NoSteadyStateError(msg.str());
  }
  DataTable t;
  t.columns = {"stable", "max_real_part"};
  std::vector<double> row{1.0, s.stability.max_real_part};
  for (Metric m : requested_metrics(config, model)) {
    t.columns.push_back(metric_name(m));
    row.push_back(evaluate_metric(m, model, *s.covariance, log_base(config)));
  }
  t.rows.push_back(std::move(row));
  return t;
}

DataTable run_evolve(const RunConfig& config) {
  const ModelParams model = to_model(config);
  if (!(config.evolve_t_final > 0.0)) throw ValidationError("'evolve.t_final' must be > 0");
  if (!(config.evolve_sample_interval > 0.0)) {
    throw ValidationError("'evolve.sample_interval' must be > 0");
  }
  if (config.evolve_dt < 0.0) throw ValidationError("'evolve.dt' must be >= 0");
  TransientOptions opts;
  opts.t_final_kappa = config.evolve_t_final;
  opts.sample_interval_kappa = config.evolve_sample_interval;
  opts.dt = config.evolve_dt / kappa_of(model);
  opts.base = log_base(config);
  const CovarianceMatrix c0 = std::holds_alternative<FullParams>(model)
                                  ? activation_initial_state(std::get<FullParams>(model))
                                  : CovarianceMatrix::Vacuum(2);
  return evolve_metrics(model, c0, requested_metrics(config, model), opts);
}

DataTable run_sweep(const RunConfig& config) {
  const ModelParams model = to_model(config);
  if (config.sweep_grid.empty()) throw ValidationError("'grid' must not be empty");
  std::vector<std::string> names;
  for (Metric m : requested_metrics(config, model)) names.push_back(metric_name(m));
  AnalysisOptions ao;
  ao.base = log_base(config);
  ao.jobs = config.jobs;
  return to_table(sweep(model, config.sweep_variable, config.sweep_grid, names, ao));
}

DataTable run_threshold(const RunConfig& config) {
  if (config.model != "full") throw ValidationError("'model': threshold needs the full model");
  const ModelParams model = to_model(config);
  ThresholdOptions opts;
  opts.resolution = config.threshold_resolution;
  const FullParams& p = std::get<FullParams>(model);
  const double n_th = find_threshold(p, config.threshold_low, config.threshold_high, opts);
  DataTable t;
  t.columns = {"eta", "n_th"};
  t.rows.push_back({p.eta, n_th});
  return t;
}

DataTable run_figure(const RunConfig& config) {
  const FigureId id = parse_figure(config.figure);
  const ModelParams model = to_model(config);
  ParameterOverrides overrides;
  for (const auto& name : parameter_names(model)) overrides[name] = get_parameter(model, name);
  FigureOptions opts;
  opts.analysis.base = log_base(config);
  opts.analysis.jobs = config.jobs;
  opts.transient.base = log_base(config);
  return figure_dataset(id, overrides, opts);
}

std::string figure_model(const std::string& figure) {
  return (figure == "fig2a" || figure == "fig2b") ? "simplified" : "full";
}

struct Check {
  std::string name;
  std::function<bool()> passes;
};

int run_selftest(std::ostream& out) {
  const std::vector<Check> checks = {
      {"vacuum is physical",
       [] { return is_physical(CovarianceMatrix::Vacuum(3)); }},
      {"vacuum symplectic eigenvalues are 1/2",
       [] {
         for (double v : symplectic_eigenvalues(CovarianceMatrix::Vacuum(2))) {
           if (std::abs(v - 0.5) > 1e-12) return false;
         }
         return true;
       }},
      {"sub-vacuum state is unphysical",
       [] {
         return !is_physical(CovarianceMatrix(Eigen::MatrixXd::Identity(2, 2) * 0.4));
       }},
      {"product thermal state has zero discord",
       [] { return gaussian_discord(CovarianceMatrix::Thermal(2, 3.0)) == 0.0; }},
      {"product thermal state has zero negativity",
       [] { return log_negativity_two_mode(CovarianceMatrix::Thermal(2, 3.0)) == 0.0; }},
      {"squeezed vacuum negativity is 2r log2(e)",
       [] {
         const double r = 0.5;
         const double ln = log_negativity_two_mode(CovarianceMatrix::TwoModeSqueezedVacuum(r));
         return std::abs(ln - 2.0 * r / std::log(2.0)) < 1e-9;
       }},
      {"squeezed vacuum discord is f(cosh 2r)",
       [] {
         const double r = 0.5;
         const double d = gaussian_discord(CovarianceMatrix::TwoModeSqueezedVacuum(r));
         return std::abs(d - entropy_f(std::cosh(2.0 * r))) < 1e-9;
       }},
      {"f(1) is zero", [] { return entropy_f(1.0) == 0.0; }},
      {"plus/minus rotation is symplectic",
       [] { return is_symplectic(plus_minus_rotation(4, {{0, 2}, {1, 3}})); }},
      {"lossless simplified channel has no steady discord",
       [] {
         const SteadyState s = steady_state(SimplifiedParams{0.0, 1.0, 0.0, 2.0, true});
         return s.covariance && gaussian_discord(*s.covariance) == 0.0;
       }},
      {"default operating point is stable",
       [] {
         FullParams p = FullParams::Defaults();
         p.eta = 0.25;
         p.n_m = 240.0;
         return steady_state(p).stability.is_stable;
       }},
  };
  int failures = 0;
  for (const auto& check : checks) {
    bool ok = false;
    try {
      ok = check.passes();
    } catch (const std::exception&) {
      ok = false;
    }
    out << (ok ? "PASS " : "FAIL ") << check.name << '\n';
    if (!ok) ++failures;
  }
  out << (failures == 0 ? "selftest passed" : "selftest failed") << '\n';
  return failures == 0 ? kExitOk : kExitNumerical;
}

fs::path sidecar_path(const fs::path& output) {
  fs::path p = output;
  p.replace_extension(".meta.json");
  return p;
}

void emit(const RunConfig& config, const DataTable& table, std::ostream& out) {
  if (config.output.empty() || config.output == "-") {
    write_csv(out, table, config.precision);
    return;
  }
  const fs::path path(config.output);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ValidationError("'output': cannot write '" + config.output + "'");
  write_csv(file, table, config.precision);
  file.close();
  if (!file) throw ValidationError("'output': failed writing '" + config.output + "'");

  const fs::path meta = sidecar_path(path);
  std::ofstream side(meta, std::ios::binary);
  if (!side) throw ValidationError("'output': cannot write '" + meta.string() + "'");
  side << to_json(config).dump(2) << '\n';
  if (!side) throw ValidationError("'output': failed writing '" + meta.string() + "'");
}

nlohmann::json read_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("'config': cannot read '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("'config': malformed JSON in '" + path + "': " + e.what());
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian quantum network simulator"};
  app.name("cvgn");
  app.require_subcommand(1, 1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> assignments;
  std::string model_flag;
  std::string output_flag;
  int precision_flag = 0;
  int jobs_flag = 0;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--set", assignments, "Override key=value (repeatable)");
  app.add_option("--model", model_flag, "full or simplified");
  app.add_option("--output,-o", output_flag, "CSV output path ('-' for stdout)");
  app.add_option("--precision", precision_flag, "Significant digits (default 12)");
  app.add_option("--jobs,-j", jobs_flag, "Worker threads (default $CVGN_JOBS or 1)");

  auto* steady = app.add_subcommand("steady", "Steady-state metrics");
  auto* evolve = app.add_subcommand("evolve", "Transient metrics");
  double t_final = 0.0, sample_interval = 0.0, dt = -1.0;
  evolve->add_option("--t-final", t_final, "Horizon in units of 1/kappa");
  evolve->add_option("--sample-interval", sample_interval, "Sampling step in units of 1/kappa");
  evolve->add_option("--dt", dt, "Integrator step in units of 1/kappa (0 = automatic)");

  auto* sweep_cmd = app.add_subcommand("sweep", "One-parameter sweep");
  std::string variable, grid_text, metrics_text;
  sweep_cmd->add_option("--variable", variable, "Parameter to vary");
  sweep_cmd->add_option("--grid", grid_text, "a,b,c or start:stop:count");
  sweep_cmd->add_option("--metrics", metrics_text, "Comma-separated metric names");

  auto* threshold = app.add_subcommand("threshold", "Entanglement threshold in n_m");
  double low = NAN, high = NAN, resolution = NAN;
  threshold->add_option("--low", low, "Lower bracket (entangled)");
  threshold->add_option("--high", high, "Upper bracket (separable)");
  threshold->add_option("--resolution", resolution, "Bracket width to stop at");

  auto* figure = app.add_subcommand("figure", "Dataset for a figure");
  std::string figure_id;
  figure->add_option("id", figure_id, "Figure id");

  auto* selftest = app.add_subcommand("selftest", "Run built-in invariant checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    if (selftest->parsed()) return run_selftest(out);

    RunConfig config;
    if (const char* env = std::getenv("CVGN_JOBS"); env && *env) {
      try {
        config.jobs = std::stoi(env);
      } catch (const std::exception&) {
        throw ValidationError("'CVGN_JOBS': not an integer");
      }
    }
    if (!config_path.empty()) merge_config(config, read_config(config_path));
    if (!model_flag.empty()) apply_set(config, "model=" + model_flag);
    for (const auto& a : assignments) apply_set(config, a);
    if (!output_flag.empty()) config.output = output_flag;
    if (app.count("--precision")) config.precision = precision_flag;
    if (app.count("--jobs")) config.jobs = jobs_flag;

    std::function<DataTable(const RunConfig&)> action;
    if (steady->parsed()) {
      config.command = "steady";
      action = run_steady;
    } else if (evolve->parsed()) {
      config.command = "evolve";
      if (evolve->count("--t-final")) config.evolve_t_final = t_final;
      if (evolve->count("--sample-interval")) config.evolve_sample_interval = sample_interval;
      if (evolve->count("--dt")) config.evolve_dt = dt;
      action = run_evolve;
    } else if (sweep_cmd->parsed()) {
      config.command = "sweep";
      if (!variable.empty()) config.sweep_variable = variable;
      if (!grid_text.empty()) config.sweep_grid = parse_grid(grid_text);
      if (!metrics_text.empty()) {
        config.sweep_metrics.clear();
        std::stringstream ss(metrics_text);
        for (std::string m; std::getline(ss, m, ',');) config.sweep_metrics.push_back(m);
      }
      action = run_sweep;
    } else if (threshold->parsed()) {
      config.command = "threshold";
      if (threshold->count("--low")) config.threshold_low = low;
      if (threshold->count("--high")) config.threshold_high = high;
      if (threshold->count("--resolution")) config.threshold_resolution = resolution;
      action = run_threshold;
    } else {
      config.command = "figure";
      if (!figure_id.empty()) config.figure = figure_id;
      if (config.figure.empty()) throw ValidationError("'figure': no figure id given");
      parse_figure(config.figure);
      const std::string needed = figure_model(config.figure);
      if (!model_flag.empty() && model_flag != needed) {
        throw ValidationError("'model': " + config.figure + " uses the " + needed + " model");
      }
      config.model = needed;
      action = run_figure;
    }

    resolve(config);
    emit(config, action(config), out);
    return kExitOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const nlohmann::json::exception& e) {
    err << "error: config: " << e.what() << '\n';
    return kExitValidation;
  }
}

}  // namespace cvgn::cli
