#include "config.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "cvgn/errors.hpp"

namespace cvgn::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::set<std::string> kCyclicKeys = {"omega_m", "gamma", "delta0", "kappa", "omega_c"};

double parse_number(const std::string& key, const std::string& text) {
  try {
    size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + key + "': cannot parse '" + text + "' as a number");
  }
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ValidationError("'" + key + "': expected true or false, got '" + text + "'");
}

void check_model(const std::string& model) {
  if (model != "full" && model != "simplified") {
    throw ValidationError("'model': expected full or simplified, got '" + model + "'");
  }
}

void check_units(const std::string& units) {
  if (units != "bits" && units != "nats") {
    throw ValidationError("'units': expected bits or nats, got '" + units + "'");
  }
}

template <class T>
T get_as(const nlohmann::json& node, const std::string& key) {
  try {
    return node.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("config key '" + key + "' has the wrong type");
  }
}

void require_object(const nlohmann::json& node, const std::string& key) {
  if (!node.is_object()) throw ValidationError("config key '" + key + "' must be an object");
}

}  // namespace

std::map<std::string, double> default_parameters(const std::string& model, bool angular) {
  check_model(model);
  std::map<std::string, double> p;
  if (model == "full") {
    p = {{"omega_m", 947e3}, {"gamma", 140.0}, {"kappa", 215e3}, {"g0", 24.0},
         {"drive_e", 4e11},  {"eta", 0.25},    {"n_m", 240.0},   {"n_in", 0.0}};
  } else {
    p = {{"omega_c", 0.0}, {"kappa", 215e3}, {"eta", 0.5}, {"n_in", 2.0}};
  }
  if (angular) {
    for (auto& [key, value] : p) {
      if (kCyclicKeys.contains(key)) value *= kTwoPi;
    }
  }
  return p;
}

void merge_config(RunConfig& config, const nlohmann::json& doc) {
  require_object(doc, "<root>");
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      config.command = get_as<std::string>(value, key);
    } else if (key == "model") {
      config.model = get_as<std::string>(value, key);
      check_model(config.model);
    } else if (key == "angular") {
      config.angular = get_as<bool>(value, key);
    } else if (key == "units") {
      config.units = get_as<std::string>(value, key);
      check_units(config.units);
    } else if (key == "parameters") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        config.parameters[name] = get_as<double>(v, "parameters." + name);
      }
    } else if (key == "sweep") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        if (name == "variable") {
          config.sweep_variable = get_as<std::string>(v, "sweep.variable");
        } else if (name == "grid") {
          config.sweep_grid = get_as<std::vector<double>>(v, "sweep.grid");
        } else if (name == "metrics") {
          config.sweep_metrics = get_as<std::vector<std::string>>(v, "sweep.metrics");
        } else {
          throw ValidationError("unknown config key 'sweep." + name + "'");
        }
      }
    } else if (key == "evolve") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        if (name == "t_final") {
          config.evolve_t_final = get_as<double>(v, "evolve.t_final");
        } else if (name == "sample_interval") {
          config.evolve_sample_interval = get_as<double>(v, "evolve.sample_interval");
        } else if (name == "dt") {
          config.evolve_dt = get_as<double>(v, "evolve.dt");
        } else {
          throw ValidationError("unknown config key 'evolve." + name + "'");
        }
      }
    } else if (key == "threshold") {
      require_object(value, key);
      for (const auto& [name, v] : value.items()) {
        if (name == "low") {
          config.threshold_low = get_as<double>(v, "threshold.low");
        } else if (name == "high") {
          config.threshold_high = get_as<double>(v, "threshold.high");
        } else if (name == "resolution") {
          config.threshold_resolution = get_as<double>(v, "threshold.resolution");
        } else {
          throw ValidationError("unknown config key 'threshold." + name + "'");
        }
      }
    } else if (key == "figure") {
      config.figure = get_as<std::string>(value, key);
    } else if (key == "output") {
      config.output = get_as<std::string>(value, key);
    } else if (key == "precision") {
      config.precision = get_as<int>(value, key);
    } else if (key == "jobs") {
      config.jobs = get_as<int>(value, key);
    } else {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
}

void apply_set(RunConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ValidationError("--set expects key=value, got '" + assignment + "'");
  }
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  if (key == "units") {
    check_units(value);
    config.units = value;
  } else if (key == "angular") {
    config.angular = parse_bool(key, value);
  } else if (key == "model") {
    check_model(value);
    config.model = value;
  } else {
    config.parameters[key] = parse_number(key, value);
  }
}

void resolve(RunConfig& config) {
  check_model(config.model);
  check_units(config.units);
  if (config.precision < 1 || config.precision > 17) {
    throw ValidationError("'precision' must be between 1 and 17");
  }
  if (config.jobs < 1) throw ValidationError("'jobs' must be >= 1");

  auto resolved = default_parameters(config.model, config.angular);
  for (const auto& [key, value] : config.parameters) {
    const bool known = resolved.contains(key) || (config.model == "full" && key == "delta0");
    if (!known) {
      throw ValidationError("unknown parameter '" + key + "' for the " + config.model + " model");
    }
    resolved[key] = value;
  }
  if (config.model == "full" && !resolved.contains("delta0")) {
    resolved["delta0"] = -resolved["omega_m"];
  }
  config.parameters = std::move(resolved);
}

nlohmann::json to_json(const RunConfig& config) {
  nlohmann::json doc;
  doc["command"] = config.command;
  doc["model"] = config.model;
  doc["angular"] = config.angular;
  doc["units"] = config.units;
  doc["parameters"] = config.parameters;
  doc["sweep"] = {{"variable", config.sweep_variable},
                  {"grid", config.sweep_grid},
                  {"metrics", config.sweep_metrics}};
  doc["evolve"] = {{"t_final", config.evolve_t_final},
                   {"sample_interval", config.evolve_sample_interval},
                   {"dt", config.evolve_dt}};
  doc["threshold"] = {{"low", config.threshold_low},
                      {"high", config.threshold_high},
                      {"resolution", config.threshold_resolution}};
  doc["figure"] = config.figure;
  doc["output"] = config.output;
  doc["precision"] = config.precision;
  doc["jobs"] = config.jobs;
  return doc;
}

ModelParams to_model(const RunConfig& config) {
  ModelParams model = config.model == "full" ? ModelParams{FullParams{}}
                                             : ModelParams{SimplifiedParams{}};
  for (const auto& [key, value] : config.parameters) {
    const double scale = (!config.angular && kCyclicKeys.contains(key)) ? kTwoPi : 1.0;
    set_parameter(model, key, value * scale);
  }
  validate(model);
  return model;
}

LogBase log_base(const RunConfig& config) {
  return config.units == "nats" ? LogBase::kNats : LogBase::kBits;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> grid;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
    if (parts.size() != 3) throw ValidationError("'grid': expected start:stop:count");
    const double a = parse_number("grid", parts[0]);
    const double b = parse_number("grid", parts[1]);
    const double n = parse_number("grid", parts[2]);
    if (n < 1 || n != std::floor(n)) throw ValidationError("'grid': count must be a positive integer");
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) grid.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
    return grid;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) grid.push_back(parse_number("grid", item));
  if (grid.empty()) throw ValidationError("'grid' must not be empty");
  return grid;
}

}  // namespace cvgn::cli
