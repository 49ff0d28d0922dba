#pragma once

#include <map>
#include <string>
#include <vector>

#include "bdikit/model.hpp"

namespace bdikit::model {

/// Parametric description of a model; every built-in preset is one of these.
///
/// Coefficients:
///   drift:       "zero" | "constant" (b = drift_value in every component)
///                | "tanh" (b = -drift_value * tanh(x - drift_center), componentwise)
///   volatility:  "constant" (sigma * I) | "sine" (sigma^2(x) = sigma2_base + sigma2_amplitude * sin x_1, times I)
///   kill rate:   kill_rate * (1 + kill_rate_amplitude * sin x_1)
///   offspring:   probability vector; for x_1 >= offspring_split, offspring_alt is used when non-empty
///   scatter:     "local" | "gaussian" (i.i.d. centered normal offsets, std scatter_scale)
///   immigration: "point" (at immigration_center) | "normal" | "uniform" (center +- scale)
struct PresetParams {
  std::string name = "custom";
  int dim = 1;
  std::string drift = "zero";
  double drift_value = 0.0;
  double drift_center = 0.0;
  std::string volatility = "constant";
  double sigma = 1.0;
  double sigma2_base = 1.0;
  double sigma2_amplitude = 0.25;
  double kill_rate = 1.0;
  double kill_rate_amplitude = 0.0;
  std::vector<double> offspring{1.0};
  std::vector<double> offspring_alt;
  double offspring_split = 0.0;
  std::string scatter = "local";
  double scatter_scale = 0.0;
  double immigration_rate = 1.0;
  std::string immigration = "point";
  double immigration_center = 0.0;
  double immigration_scale = 1.0;
};

/// Names of the built-in presets.
std::vector<std::string> preset_names();

/// Parameters of a built-in preset; throws PreconditionError for unknown names.
PresetParams preset_params(const std::string& name);

/// Sets one field from its textual value, e.g. ("kill_rate", "2") or ("offspring", "0.75,0,0.25").
void apply_override(PresetParams& params, const std::string& key, const std::string& value);

/// Flat key/value view of the parameters (same keys as apply_override).
std::map<std::string, std::string> to_key_values(const PresetParams& params);

/// Parses a JSON object: {"preset": name, <key>: value, ...}; keys override the preset.
PresetParams params_from_json_text(const std::string& json_text);

/// Builds the model. Declared bounds are exact for these parametric forms.
ModelSpec make_model(const PresetParams& params);

inline ModelSpec make_preset(const std::string& name) { return make_model(preset_params(name)); }

/// sigma^2 of the first coordinate at x (d = 1 models), for estimator truth values.
double sigma2_at(const ModelSpec& spec, ConstPoint x);

}  // namespace bdikit::model
