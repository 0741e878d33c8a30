#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "cvgn/analysis.hpp"

namespace cvgn::cli {

/// Everything needed to reproduce a run. Parameter values are stored in the
/// units the user wrote them in: with `angular == false`, the frequencies
/// quoted as X/2pi (omega_m, gamma, delta0, kappa, omega_c) are ordinary
/// frequencies in Hz and are multiplied by 2pi before use; g0 and drive_e
/// are rates in s^-1 either way.
struct RunConfig {
  std::string command;
  std::string model = "full";
  bool angular = false;
  std::string units = "bits";
  std::map<std::string, double> parameters;

  std::string sweep_variable = "eta";
  std::vector<double> sweep_grid;
  std::vector<std::string> sweep_metrics;

  double evolve_t_final = 150.0;        // units of 1/kappa
  double evolve_sample_interval = 0.1;  // units of 1/kappa
  double evolve_dt = 0.0;               // units of 1/kappa; 0 = automatic

  double threshold_low = 0.0;
  double threshold_high = 600.0;
  double threshold_resolution = 0.5;

  std::string figure;
  std::string output;
  int precision = 12;
  int jobs = 1;
};

/// Default parameter record for a model, in the config's units.
std::map<std::string, double> default_parameters(const std::string& model, bool angular);

/// Reads a config document. Unknown keys and wrong types raise
/// ValidationError naming the key.
void merge_config(RunConfig& config, const nlohmann::json& doc);

/// Applies a `key=value` override (model parameters or units/angular/model).
void apply_set(RunConfig& config, const std::string& assignment);

/// Fills defaults for unset parameters (delta0 defaults to -omega_m) and
/// validates names against the model.
void resolve(RunConfig& config);

nlohmann::json to_json(const RunConfig& config);

/// Model parameters in rad/s.
ModelParams to_model(const RunConfig& config);
LogBase log_base(const RunConfig& config);

/// Parses "a,b,c" or "start:stop:count".
std::vector<double> parse_grid(const std::string& text);

}  // namespace cvgn::cli
