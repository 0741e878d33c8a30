#include "cvgn/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>
#include <utility>

#include "cvgn/errors.hpp"

namespace cvgn {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <class Fn>
void parallel_for(size_t count, int jobs, Fn&& fn) {
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const size_t n_threads =
      std::min(count, static_cast<size_t>(std::max(1, jobs)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }
  // First failure in grid order, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string format_value(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

bool is_full(const ModelParams& model) { return std::holds_alternative<FullParams>(model); }

const std::vector<std::pair<std::string, double SimplifiedParams::*>>& simplified_fields() {
  static const std::vector<std::pair<std::string, double SimplifiedParams::*>> fields = {
      {"omega_c", &SimplifiedParams::omega_c},
      {"kappa", &SimplifiedParams::kappa},
      {"eta", &SimplifiedParams::eta},
      {"n_in", &SimplifiedParams::n_in},
  };
  return fields;
}

const std::vector<std::pair<std::string, double FullParams::*>>& full_fields() {
  static const std::vector<std::pair<std::string, double FullParams::*>> fields = {
      {"omega_m", &FullParams::omega_m}, {"gamma", &FullParams::gamma},
      {"delta0", &FullParams::delta0},   {"kappa", &FullParams::kappa},
      {"g0", &FullParams::g0},           {"drive_e", &FullParams::drive_e},
      {"eta", &FullParams::eta},         {"n_m", &FullParams::n_m},
      {"n_in", &FullParams::n_in},
  };
  return fields;
}

template <class P>
double P::*find_field(const std::vector<std::pair<std::string, double P::*>>& fields,
                      const std::string& name, const char* model) {
  for (const auto& [key, member] : fields) {
    if (key == name) return member;
  }
  throw ValidationError("unknown parameter '" + name + "' for the " + model + " model");
}

const BipartitionSpec& optics_vs_mechanics() {
  static const BipartitionSpec spec{{kOptical1, kOptical2}, {kMechanical1, kMechanical2}};
  return spec;
}

}  // namespace

std::string metric_name(Metric m) {
  switch (m) {
    case Metric::kDiscordO1O2: return "discord_o1o2";
    case Metric::kLnO1O2: return "ln_o1o2";
    case Metric::kLnO1O2M1M2: return "ln_o1o2_m1m2";
    case Metric::kLnO1M1: return "ln_o1m1";
    case Metric::kLnPlus: return "ln_plus";
    case Metric::kLnMinus: return "ln_minus";
    case Metric::kLnCrossPM: return "ln_cross_pm";
  }
  return "?";
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> metrics = {
      Metric::kDiscordO1O2, Metric::kLnO1O2,  Metric::kLnO1O2M1M2, Metric::kLnO1M1,
      Metric::kLnPlus,      Metric::kLnMinus, Metric::kLnCrossPM};
  return metrics;
}

Metric parse_metric(const std::string& name) {
  for (Metric m : all_metrics()) {
    if (metric_name(m) == name) return m;
  }
  throw ValidationError("unknown metric '" + name + "'");
}

bool metric_supported(Metric m, const ModelParams& model) {
  return is_full(model) || m == Metric::kDiscordO1O2 || m == Metric::kLnO1O2;
}

std::vector<std::string> parameter_names(const ModelParams& model) {
  std::vector<std::string> names;
  if (is_full(model)) {
    for (const auto& f : full_fields()) names.push_back(f.first);
  } else {
    for (const auto& f : simplified_fields()) names.push_back(f.first);
  }
  return names;
}

double get_parameter(const ModelParams& model, const std::string& name) {
  if (const auto* full = std::get_if<FullParams>(&model)) {
    return full->*find_field(full_fields(), name, "full");
  }
  const auto& simple = std::get<SimplifiedParams>(model);
  return simple.*find_field(simplified_fields(), name, "simplified");
}

void set_parameter(ModelParams& model, const std::string& name, double value) {
  if (auto* full = std::get_if<FullParams>(&model)) {
    full->*find_field(full_fields(), name, "full") = value;
  } else {
    auto& simple = std::get<SimplifiedParams>(model);
    simple.*find_field(simplified_fields(), name, "simplified") = value;
  }
}

void apply_overrides(ModelParams& model, const ParameterOverrides& overrides) {
  for (const auto& [name, value] : overrides) set_parameter(model, name, value);
}

void validate(const ModelParams& model) {
  std::visit([](const auto& p) { p.validate(); }, model);
}

SteadyState steady_state(const ModelParams& model) {
  SteadyState out;
  if (const auto* full = std::get_if<FullParams>(&model)) {
    out.mean_field = mean_field(*full);
    out.dynamics = build_full_linearized(*full, *out.mean_field);
  } else {
    out.dynamics = build_simplified(std::get<SimplifiedParams>(model));
  }
  out.stability = stability(out.dynamics);
  if (out.stability.is_stable) out.covariance = solve_steady(out.dynamics);
  return out;
}

double evaluate_metric(Metric metric, const ModelParams& model, const CovarianceMatrix& c,
                       LogBase base) {
  if (!metric_supported(metric, model)) {
    throw ValidationError("metric '" + metric_name(metric) +
                          "' needs the full optomechanical model");
  }
  const int expected = is_full(model) ? 4 : 2;
  if (c.n_modes() != expected) {
    throw ValidationError("evaluate_metric: expected a " + std::to_string(expected) +
                          "-mode state");
  }
  const auto optics = [&] {
    return is_full(model) ? reduce_modes(c, {kOptical1, kOptical2}) : c;
  };
  switch (metric) {
    case Metric::kDiscordO1O2: return gaussian_discord(optics(), 0, base);
    case Metric::kLnO1O2: return log_negativity_two_mode(optics(), base);
    case Metric::kLnO1O2M1M2: return log_negativity_bipartition(c, optics_vs_mechanics(), base);
    case Metric::kLnO1M1:
      return log_negativity_two_mode(reduce_modes(c, {kOptical1, kMechanical1}), base);
    case Metric::kLnPlus: return plus_minus_decomposition(c, base).plus;
    case Metric::kLnMinus: return plus_minus_decomposition(c, base).minus;
    case Metric::kLnCrossPM: return plus_minus_decomposition(c, base).cross;
  }
  return kNaN;
}

const std::vector<double>& SweepResult::column(const std::string& name) const {
  for (size_t k = 0; k < metric_names.size(); ++k) {
    if (metric_names[k] == name) return columns[k];
  }
  throw ValidationError("sweep result has no column '" + name + "'");
}

SweepResult sweep(const ModelParams& model, const std::string& variable,
                  const std::vector<double>& grid, const std::vector<std::string>& metrics,
                  const AnalysisOptions& options) {
  if (grid.empty()) throw ValidationError("sweep: grid must not be empty");
  (void)get_parameter(model, variable);
  std::vector<Metric> parsed;
  for (const auto& name : metrics) {
    parsed.push_back(parse_metric(name));
    if (!metric_supported(parsed.back(), model)) {
      throw ValidationError("metric '" + name + "' needs the full optomechanical model");
    }
  }
  validate(model);

  SweepResult result;
  result.variable_name = variable;
  result.grid = grid;
  result.metric_names = metrics;
  result.base = model;
  result.columns.assign(parsed.size(), std::vector<double>(grid.size(), kNaN));
  result.max_real_part.assign(grid.size(), kNaN);
  std::vector<char> stable(grid.size(), 0);

  parallel_for(grid.size(), options.jobs, [&](size_t i) {
    ModelParams point = model;
    set_parameter(point, variable, grid[i]);
    validate(point);
    const SteadyState ss = steady_state(point);
    result.max_real_part[i] = ss.stability.max_real_part;
    if (!ss.covariance) return;
    stable[i] = 1;
    for (size_t k = 0; k < parsed.size(); ++k) {
      result.columns[k][i] = evaluate_metric(parsed[k], point, *ss.covariance, options.base);
    }
  });
  result.stable.assign(stable.begin(), stable.end());
  return result;
}

bool steady_entangled(const FullParams& params, double cutoff) {
  const SteadyState ss = steady_state(params);
  if (!ss.covariance) {
    throw NoSteadyStateError("threshold search hit an unstable point at n_m = " +
                             format_value(params.n_m));
  }
  return log_negativity_bipartition(*ss.covariance, optics_vs_mechanics()) > cutoff;
}

double find_threshold(const FullParams& params, double low, double high,
                      const ThresholdOptions& options) {
  if (!(low < high) || !(low >= 0.0)) {
    throw ValidationError("find_threshold: need 0 <= low < high");
  }
  if (options.resolution <= 0.0 || options.prescan_points < 2) {
    throw ValidationError("find_threshold: bad options");
  }
  FullParams p = params;
  const auto entangled_at = [&](double n_m) {
    p.n_m = n_m;
    return steady_entangled(p, options.cutoff);
  };
  if (!entangled_at(low)) {
    throw BracketingError("find_threshold: no entanglement at the lower end n_m = " +
                          format_value(low));
  }
  if (entangled_at(high)) {
    throw BracketingError("find_threshold: still entangled at the upper end n_m = " +
                          format_value(high));
  }

  // Coarse scan: the indicator must switch from true to false exactly once.
  double lo = low, hi = high;
  bool seen_false = false;
  const int n = options.prescan_points;
  for (int k = 1; k < n - 1; ++k) {
    const double x = low + (high - low) * k / (n - 1);
    const bool e = entangled_at(x);
    if (e && seen_false) {
      throw NumericalError("find_threshold: entanglement indicator is not monotone in n_m");
    }
    if (e) {
      lo = x;
    } else if (!seen_false) {
      hi = x;
      seen_false = true;
    }
  }

  while (hi - lo > options.resolution) {
    const double mid = 0.5 * (lo + hi);
    (entangled_at(mid) ? lo : hi) = mid;
  }
  const double threshold = 0.5 * (lo + hi);

  if ((threshold - 1.0 >= low && !entangled_at(threshold - 1.0)) ||
      (threshold + 1.0 <= high && entangled_at(threshold + 1.0))) {
    throw NumericalError("find_threshold: post-check failed around n_th = " +
                         format_value(threshold));
  }
  return threshold;
}

PlusMinusEntanglement plus_minus_decomposition(const CovarianceMatrix& c, LogBase base) {
  if (c.n_modes() != 4) {
    throw ValidationError("plus_minus_decomposition needs the 4-mode (M1, O1, M2, O2) state");
  }
  const CovarianceMatrix r = rotate_basis(
      c, plus_minus_rotation(4, {{kMechanical1, kMechanical2}, {kOptical1, kOptical2}}));
  // After rotation: 0 = M+, 1 = O+, 2 = M-, 3 = O-.
  PlusMinusEntanglement e;
  e.plus = log_negativity_two_mode(reduce_modes(r, {0, 1}), base);
  e.minus = log_negativity_two_mode(reduce_modes(r, {2, 3}), base);
  e.cross = log_negativity_two_mode(reduce_modes(r, {0, 3}), base);
  return e;
}

CovarianceMatrix activation_initial_state(const FullParams& params) {
  const std::vector<double> occupations{params.n_m, 0.0, params.n_m, 0.0};
  return CovarianceMatrix::Thermal(occupations);
}

DataTable evolve_metrics(const ModelParams& model, const CovarianceMatrix& c0,
                         const std::vector<Metric>& metrics, const TransientOptions& options) {
  if (!(options.t_final_kappa > 0.0) || !(options.sample_interval_kappa > 0.0)) {
    throw ValidationError("transient horizon and sample interval must be > 0");
  }
  for (Metric m : metrics) {
    if (!metric_supported(m, model)) {
      throw ValidationError("metric '" + metric_name(m) + "' needs the full optomechanical model");
    }
  }
  validate(model);
  DriftDiffusion dd;
  if (const auto* full = std::get_if<FullParams>(&model)) {
    dd = build_full_linearized(*full, mean_field(*full));
  } else {
    dd = build_simplified(std::get<SimplifiedParams>(model));
  }
  const double kappa = std::visit([](const auto& p) { return p.kappa; }, model);
  const double interval = options.sample_interval_kappa / kappa;
  const double dt = options.dt > 0.0 ? options.dt : default_time_step(dd);
  const auto per_sample = static_cast<int>(std::ceil(interval / dt));
  const auto n_samples =
      static_cast<long long>(std::llround(options.t_final_kappa / options.sample_interval_kappa));
  const Trajectory traj = evolve_covariance(dd, c0, static_cast<double>(n_samples) * interval,
                                            interval / per_sample, per_sample);

  DataTable t;
  t.columns.push_back("t_kappa");
  for (Metric m : metrics) t.columns.push_back(metric_name(m));
  for (size_t i = 0; i < traj.states.size(); ++i) {
    std::vector<double> row{static_cast<double>(i) * options.sample_interval_kappa};
    for (Metric m : metrics) row.push_back(evaluate_metric(m, model, traj.states[i], options.base));
    t.rows.push_back(std::move(row));
  }
  return t;
}

TransientSeries activation_transient(const FullParams& params, const TransientOptions& options) {
  const DataTable t = evolve_metrics(params, activation_initial_state(params),
                                     {Metric::kDiscordO1O2, Metric::kLnO1O2M1M2}, options);
  TransientSeries series;
  series.t_kappa = t.column("t_kappa");
  series.discord_o1o2 = t.column(metric_name(Metric::kDiscordO1O2));
  series.ln_o1o2_m1m2 = t.column(metric_name(Metric::kLnO1O2M1M2));
  return series;
}

std::vector<double> DataTable::column(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw ValidationError("table has no column '" + name + "'");
  const auto k = static_cast<size_t>(it - columns.begin());
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[k]);
  return out;
}

DataTable to_table(const SweepResult& result) {
  DataTable t;
  t.columns.push_back(result.variable_name);
  t.columns.push_back("stable");
  t.columns.push_back("max_real_part");
  for (const auto& name : result.metric_names) t.columns.push_back(name);
  for (size_t i = 0; i < result.grid.size(); ++i) {
    std::vector<double> row{result.grid[i], result.stable[i] ? 1.0 : 0.0,
                            result.max_real_part[i]};
    for (const auto& col : result.columns) row.push_back(col[i]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::string figure_name(FigureId id) {
  switch (id) {
    case FigureId::kFig2a: return "fig2a";
    case FigureId::kFig2b: return "fig2b";
    case FigureId::kFig3: return "fig3";
    case FigureId::kFig4a: return "fig4a";
    case FigureId::kFig4b: return "fig4b";
    case FigureId::kFig5: return "fig5";
    case FigureId::kFig6: return "fig6";
    case FigureId::kFigA7: return "figA7";
    case FigureId::kFigA8: return "figA8";
    case FigureId::kFigA9: return "figA9";
  }
  return "?";
}

const std::vector<FigureId>& all_figures() {
  static const std::vector<FigureId> ids = {
      FigureId::kFig2a, FigureId::kFig2b, FigureId::kFig3,  FigureId::kFig4a, FigureId::kFig4b,
      FigureId::kFig5,  FigureId::kFig6,  FigureId::kFigA7, FigureId::kFigA8, FigureId::kFigA9};
  return ids;
}

FigureId parse_figure(const std::string& name) {
  for (FigureId id : all_figures()) {
    if (figure_name(id) == name) return id;
  }
  throw ValidationError("unknown figure id '" + name + "'");
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1);
  return v;
}

// One sweep per series value, merged on a common grid.
DataTable series_sweeps(const ModelParams& base, const std::string& variable,
                        const std::vector<double>& grid, const std::string& series_param,
                        const std::vector<double>& series_values, Metric metric,
                        const AnalysisOptions& options) {
  DataTable t;
  t.columns.push_back(variable);
  t.rows.resize(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) t.rows[i].push_back(grid[i]);
  for (double value : series_values) {
    ModelParams m = base;
    set_parameter(m, series_param, value);
    const SweepResult r = sweep(m, variable, grid, {metric_name(metric)}, options);
    t.columns.push_back(metric_name(metric) + "_" + series_param + "_" + format_value(value));
    for (size_t i = 0; i < grid.size(); ++i) t.rows[i].push_back(r.columns[0][i]);
  }
  return t;
}

DataTable transient_series(const FullParams& base, const std::string& series_param,
                           const std::vector<double>& series_values,
                           const std::vector<std::string>& labels,
                           const FigureOptions& options) {
  std::vector<TransientSeries> runs(series_values.size());
  parallel_for(series_values.size(), options.analysis.jobs, [&](size_t k) {
    ModelParams m = base;
    set_parameter(m, series_param, series_values[k]);
    TransientOptions topt = options.transient;
    topt.base = options.analysis.base;
    runs[k] = activation_transient(std::get<FullParams>(m), topt);
  });
  DataTable t;
  t.columns.push_back("t_kappa");
  for (const auto& label : labels) {
    t.columns.push_back("discord_o1o2_" + label);
    t.columns.push_back("ln_o1o2_m1m2_" + label);
  }
  const size_t n = runs.front().t_kappa.size();
  for (size_t i = 0; i < n; ++i) {
    std::vector<double> row{runs.front().t_kappa[i]};
    for (const auto& run : runs) {
      row.push_back(run.discord_o1o2[i]);
      row.push_back(run.ln_o1o2_m1m2[i]);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace

DataTable figure_dataset(FigureId id, const ParameterOverrides& overrides,
                         const FigureOptions& options) {
  const bool simplified = id == FigureId::kFig2a || id == FigureId::kFig2b;
  ModelParams model = simplified ? ModelParams{options.simplified} : ModelParams{options.full};
  apply_overrides(model, overrides);
  validate(model);
  const AnalysisOptions& ao = options.analysis;

  switch (id) {
    case FigureId::kFig2a:
      return series_sweeps(model, "eta", linspace(0.0, 0.95, 20), "n_in", {1.0, 2.0, 5.0},
                           Metric::kDiscordO1O2, ao);
    case FigureId::kFig2b:
      return series_sweeps(model, "n_in", linspace(0.0, 20.0, 41), "eta", {0.25, 0.5, 0.75},
                           Metric::kDiscordO1O2, ao);
    case FigureId::kFig3: {
      const std::vector<double> etas = linspace(0.0, 0.5, 21);
      std::vector<double> thresholds(etas.size());
      parallel_for(etas.size(), ao.jobs, [&](size_t i) {
        FullParams p = std::get<FullParams>(model);
        p.eta = etas[i];
        thresholds[i] = find_threshold(p, 0.0, 600.0);
      });
      DataTable t;
      t.columns = {"eta", "n_th"};
      for (size_t i = 0; i < etas.size(); ++i) t.rows.push_back({etas[i], thresholds[i]});
      return t;
    }
    case FigureId::kFig4a:
      return series_sweeps(model, "n_m", linspace(190.0, 260.0, 71), "eta", {0.0, 0.25},
                           Metric::kLnO1O2M1M2, ao);
    case FigureId::kFig4b:
      return series_sweeps(model, "n_m", linspace(0.0, 250.0, 26), "eta", {0.0, 0.25},
                           Metric::kLnO1M1, ao);
    case FigureId::kFig5: {
      const FullParams& p = std::get<FullParams>(model);
      TransientOptions topt = options.transient;
      topt.base = ao.base;
      const TransientSeries s = activation_transient(p, topt);
      DataTable t;
      t.columns = {"t_kappa", "discord_o1o2", "ln_o1o2_m1m2"};
      for (size_t i = 0; i < s.t_kappa.size(); ++i) {
        t.rows.push_back({s.t_kappa[i], s.discord_o1o2[i], s.ln_o1o2_m1m2[i]});
      }
      return t;
    }
    case FigureId::kFig6: {
      const SweepResult r = sweep(model, "n_m", linspace(0.0, 260.0, 53),
                                  {"ln_plus", "ln_minus", "ln_o1o2_m1m2", "ln_cross_pm"}, ao);
      DataTable t;
      t.columns = {"n_m", "ln_plus", "ln_minus", "ln_plus_minus_sum", "ln_o1o2_m1m2",
                   "ln_cross_pm"};
      for (size_t i = 0; i < r.grid.size(); ++i) {
        const double plus = r.columns[0][i], minus = r.columns[1][i];
        t.rows.push_back({r.grid[i], plus, minus, plus + minus, r.columns[2][i], r.columns[3][i]});
      }
      return t;
    }
    case FigureId::kFigA7: {
      const std::vector<double> values{150.0, 240.0, 244.0, 248.0};
      std::vector<std::string> labels;
      for (double v : values) labels.push_back("n_m_" + format_value(v));
      return transient_series(std::get<FullParams>(model), "n_m", values, labels, options);
    }
    case FigureId::kFigA8: {
      const std::vector<double> values{0.1, 0.25, 0.5, 0.75};
      std::vector<std::string> labels;
      for (double v : values) labels.push_back("eta_" + format_value(v));
      return transient_series(std::get<FullParams>(model), "eta", values, labels, options);
    }
    case FigureId::kFigA9: {
      const double g0 = std::get<FullParams>(model).g0;
      const std::vector<double> factors{1.0, 0.95, 0.9, 0.8, 0.6};
      std::vector<double> values;
      std::vector<std::string> labels;
      for (double f : factors) {
        values.push_back(f * g0);
        labels.push_back("g0x" + format_value(f));
      }
      return transient_series(std::get<FullParams>(model), "g0", values, labels, options);
    }
  }
  throw ValidationError("unknown figure id");
}

}  // namespace cvgn
