#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cvgn/covariance.hpp"
#include "cvgn/dynamics.hpp"
#include "cvgn/gaussian.hpp"
#include "cvgn/network.hpp"

namespace cvgn {

using ModelParams = std::variant<SimplifiedParams, FullParams>;
using ParameterOverrides = std::map<std::string, double>;

enum class Metric {
  kDiscordO1O2,     // D_G(O2|O1)
  kLnO1O2,          // LN across O1 | O2
  kLnO1O2M1M2,      // LN across O1 O2 | M1 M2
  kLnO1M1,          // LN across O1 | M1
  kLnPlus,          // LN across O+ | M+
  kLnMinus,         // LN across O- | M-
  kLnCrossPM,       // LN across O- | M+
};

std::string metric_name(Metric m);
/// Throws ValidationError for unknown names.
Metric parse_metric(const std::string& name);
const std::vector<Metric>& all_metrics();
bool metric_supported(Metric m, const ModelParams& model);

std::vector<std::string> parameter_names(const ModelParams& model);
double get_parameter(const ModelParams& model, const std::string& name);
/// Throws ValidationError for names the model does not have.
void set_parameter(ModelParams& model, const std::string& name, double value);
void apply_overrides(ModelParams& model, const ParameterOverrides& overrides);
void validate(const ModelParams& model);

struct SteadyState {
  DriftDiffusion dynamics;
  StabilityReport stability;
  std::optional<MeanFieldState> mean_field;   // full model only
  std::optional<CovarianceMatrix> covariance;  // absent when unstable
};

/// Builds the model (mean field first for the full model), classifies
/// stability and solves for the steady covariance when it exists.
SteadyState steady_state(const ModelParams& model);

/// Evaluates a metric on a steady or transient covariance of `model`'s
/// mode layout ((O1, O2) simplified, (M1, O1, M2, O2) full).
double evaluate_metric(Metric metric, const ModelParams& model, const CovarianceMatrix& c,
                       LogBase base = LogBase::kBits);

struct AnalysisOptions {
  LogBase base = LogBase::kBits;
  /// Worker threads for independent grid points. Output order is fixed.
  int jobs = 1;
};

struct SweepResult {
  std::string variable_name;
  std::vector<double> grid;
  std::vector<std::string> metric_names;
  /// columns[k][i]: metric k at grid[i]; NaN where the point is unstable.
  std::vector<std::vector<double>> columns;
  std::vector<bool> stable;
  std::vector<double> max_real_part;
  ModelParams base;

  const std::vector<double>& column(const std::string& name) const;
};

SweepResult sweep(const ModelParams& model, const std::string& variable,
                  const std::vector<double>& grid, const std::vector<std::string>& metrics,
                  const AnalysisOptions& options = {});

struct ThresholdOptions {
  double resolution = 0.5;
  /// LN(O1 O2 | M1 M2) above this counts as entangled.
  double cutoff = 1e-8;
  int prescan_points = 9;
};

/// Largest n_m at which O1 O2 | M1 M2 entanglement survives, by bisection on
/// [low, high]. Requires entanglement at `low` and none at `high`; a coarse
/// pre-scan rejects non-monotone indicators. Throws BracketingError,
/// NoSteadyStateError on instability.
double find_threshold(const FullParams& params, double low, double high,
                      const ThresholdOptions& options = {});

/// True if the steady O1 O2 | M1 M2 negativity exceeds `cutoff`.
bool steady_entangled(const FullParams& params, double cutoff = 1e-8);

struct PlusMinusEntanglement {
  double plus = 0.0;   // M+ | O+
  double minus = 0.0;  // M- | O-
  double cross = 0.0;  // M+ | O-
};

/// Rotates a (M1, O1, M2, O2) state to (M+, O+, M-, O-) and returns the
/// two-mode negativities of the +, - and crossed pairs.
PlusMinusEntanglement plus_minus_decomposition(const CovarianceMatrix& c,
                                               LogBase base = LogBase::kBits);

/// A rectangular numeric table with named columns (NaN marks absent values).
struct DataTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const;
};

struct TransientOptions {
  double t_final_kappa = 150.0;
  double sample_interval_kappa = 0.1;
  /// RK4 step in seconds; 0 selects default_time_step().
  double dt = 0.0;
  LogBase base = LogBase::kBits;
};

struct TransientSeries {
  std::vector<double> t_kappa;
  std::vector<double> discord_o1o2;
  std::vector<double> ln_o1o2_m1m2;
};

/// Optical modes start in vacuum and mirrors in thermal states at n_m; the
/// covariance then evolves under the linearized dynamics.
CovarianceMatrix activation_initial_state(const FullParams& params);
TransientSeries activation_transient(const FullParams& params,
                                     const TransientOptions& options = {});

/// Evolves c0 under `model`'s linear dynamics and tabulates the metrics at
/// every sample; the first column is t_kappa (time in units of 1/kappa).
/// Samples fall exactly on multiples of the sample interval.
DataTable evolve_metrics(const ModelParams& model, const CovarianceMatrix& c0,
                         const std::vector<Metric>& metrics,
                         const TransientOptions& options = {});


DataTable to_table(const SweepResult& result);

enum class FigureId { kFig2a, kFig2b, kFig3, kFig4a, kFig4b, kFig5, kFig6, kFigA7, kFigA8, kFigA9 };

std::string figure_name(FigureId id);
FigureId parse_figure(const std::string& name);
const std::vector<FigureId>& all_figures();

struct FigureOptions {
  SimplifiedParams simplified = {0.0, 1.0, 0.5, 2.0, true};
  FullParams full = [] {
    FullParams p = FullParams::Defaults();
    p.eta = 0.25;
    p.n_m = 240.0;
    return p;
  }();
  AnalysisOptions analysis;
  TransientOptions transient;
};

/// Columns needed to redraw a figure. Overrides apply on top of the figure's
/// model base (simplified for fig2a/fig2b, full otherwise); the figure then
/// sets the parameters it varies.
DataTable figure_dataset(FigureId id, const ParameterOverrides& overrides = {},
                         const FigureOptions& options = {});

}  // namespace cvgn
