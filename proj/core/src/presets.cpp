#include "bdikit/presets.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "bdikit/errors.hpp"

namespace bdikit::model {

namespace {

PresetParams base(const std::string& name) {
  PresetParams p;
  p.name = name;
  return p;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw PreconditionError("invalid numeric value for '" + key + "': '" + value + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (value.empty()) return out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  return out;
}

std::string format_list(const std::vector<double>& values) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
  return os.str();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_prob_vector(const std::vector<double>& probs, const char* what) {
  if (probs.empty()) throw ValidationError(std::string(what) + " must not be empty");
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(what) + " has an entry outside [0,1]");
  }
}

double mean_of(const std::vector<double>& probs) {
  double m = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
  return m;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"pure-death-bm", "mm-infinity", "binary-subcritical", "binary-c2",
          "gaussian-binary", "reconstruct-bm", "estimate-sine"};
}

PresetParams preset_params(const std::string& name) {
  PresetParams p = base(name);
  if (name == "pure-death-bm") {
    // c = 1, kappa = 1, immigrants at 0, standard Brownian motion
    p.immigration = "point";
  } else if (name == "mm-infinity") {
    p.immigration_rate = 2.0;
    p.immigration = "normal";
  } else if (name == "binary-subcritical" || name == "binary-c2") {
    p.offspring = {0.75, 0.0, 0.25};
    p.immigration = "normal";
    p.immigration_rate = name == "binary-c2" ? 2.0 : 1.0;
  } else if (name == "gaussian-binary") {
    p.offspring = {0.75, 0.0, 0.25};
    p.scatter = "gaussian";
    p.scatter_scale = 0.5;
    p.immigration = "normal";
  } else if (name == "reconstruct-bm") {
    p.sigma = 0.25;
    p.offspring = {0.6, 0.4};
    p.immigration_rate = 0.5;
    p.immigration = "uniform";
    p.immigration_scale = 20.0;
  } else if (name == "estimate-sine") {
    p.drift = "tanh";
    p.drift_value = 0.5;
    p.drift_center = 0.5;
    p.volatility = "sine";
    p.sigma2_base = 1.0;
    p.sigma2_amplitude = 0.25;
    p.offspring = {0.9, 0.0, 0.1};
    p.scatter = "gaussian";
    p.scatter_scale = 0.5;
    p.immigration_rate = 2.0;
    p.immigration = "normal";
    p.immigration_center = 0.5;
    p.immigration_scale = 1.0;
  } else {
    throw PreconditionError("unknown preset '" + name + "'");
  }
  return p;
}

void apply_override(PresetParams& p, const std::string& key, const std::string& value) {
  if (key == "preset" || key == "name") {
    p.name = value;
  } else if (key == "dim") {
    const double d = parse_double(key, value);
    if (d < 1 || d != std::floor(d)) throw PreconditionError("dim must be a positive integer");
    p.dim = static_cast<int>(d);
  } else if (key == "drift") {
    p.drift = value;
  } else if (key == "drift_value") {
    p.drift_value = parse_double(key, value);
  } else if (key == "drift_center") {
    p.drift_center = parse_double(key, value);
  } else if (key == "volatility") {
    p.volatility = value;
  } else if (key == "sigma") {
    p.sigma = parse_double(key, value);
  } else if (key == "sigma2_base") {
    p.sigma2_base = parse_double(key, value);
  } else if (key == "sigma2_amplitude") {
    p.sigma2_amplitude = parse_double(key, value);
  } else if (key == "kill_rate") {
    p.kill_rate = parse_double(key, value);
  } else if (key == "kill_rate_amplitude") {
    p.kill_rate_amplitude = parse_double(key, value);
  } else if (key == "offspring") {
    p.offspring = parse_list(key, value);
  } else if (key == "offspring_alt") {
    p.offspring_alt = parse_list(key, value);
  } else if (key == "offspring_split") {
    p.offspring_split = parse_double(key, value);
  } else if (key == "scatter") {
    p.scatter = value;
  } else if (key == "scatter_scale") {
    p.scatter_scale = parse_double(key, value);
  } else if (key == "immigration_rate") {
    p.immigration_rate = parse_double(key, value);
  } else if (key == "immigration") {
    p.immigration = value;
  } else if (key == "immigration_center") {
    p.immigration_center = parse_double(key, value);
  } else if (key == "immigration_scale") {
    p.immigration_scale = parse_double(key, value);
  } else {
    throw PreconditionError("unknown model parameter '" + key + "'");
  }
}

std::map<std::string, std::string> to_key_values(const PresetParams& p) {
  return {
      {"name", p.name},
      {"dim", std::to_string(p.dim)},
      {"drift", p.drift},
      {"drift_value", format_double(p.drift_value)},
      {"drift_center", format_double(p.drift_center)},
      {"volatility", p.volatility},
      {"sigma", format_double(p.sigma)},
      {"sigma2_base", format_double(p.sigma2_base)},
      {"sigma2_amplitude", format_double(p.sigma2_amplitude)},
      {"kill_rate", format_double(p.kill_rate)},
      {"kill_rate_amplitude", format_double(p.kill_rate_amplitude)},
      {"offspring", format_list(p.offspring)},
      {"offspring_alt", format_list(p.offspring_alt)},
      {"offspring_split", format_double(p.offspring_split)},
      {"scatter", p.scatter},
      {"scatter_scale", format_double(p.scatter_scale)},
      {"immigration_rate", format_double(p.immigration_rate)},
      {"immigration", p.immigration},
      {"immigration_center", format_double(p.immigration_center)},
      {"immigration_scale", format_double(p.immigration_scale)},
  };
}

PresetParams params_from_json_text(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("model config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw PreconditionError("model config must be a JSON object");
  PresetParams p = doc.contains("preset") ? preset_params(doc["preset"].get<std::string>()) : PresetParams{};
  for (const auto& [key, value] : doc.items()) {
    if (key == "preset") continue;
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_array()) {
      std::vector<double> list;
      for (const auto& v : value) list.push_back(v.get<double>());
      text = format_list(list);
    } else if (value.is_number()) {
      text = format_double(value.get<double>());
    } else {
      throw PreconditionError("unsupported value type for model parameter '" + key + "'");
    }
    apply_override(p, key, text);
  }
  return p;
}

ModelSpec make_model(const PresetParams& p) {
  if (p.dim < 1) throw ValidationError("dim must be positive");
  check_prob_vector(p.offspring, "offspring");
  if (!p.offspring_alt.empty()) check_prob_vector(p.offspring_alt, "offspring_alt");
  if (!(p.kill_rate > 0.0)) throw ValidationError("kill_rate must be positive");
  if (!(std::abs(p.kill_rate_amplitude) < 1.0)) throw ValidationError("|kill_rate_amplitude| must be < 1");
  if (!(p.immigration_rate >= 0.0)) throw ValidationError("immigration_rate must be nonnegative");

  ModelSpec spec;
  spec.name = p.name;
  spec.dim = p.dim;
  const auto d = static_cast<std::size_t>(p.dim);

  if (p.drift == "zero") {
    spec.drift = [](ConstPoint, MutPoint out) { std::fill(out.begin(), out.end(), 0.0); };
    spec.lipschitz_hint = 1.0;
  } else if (p.drift == "constant") {
    const double b = p.drift_value;
    spec.drift = [b](ConstPoint, MutPoint out) { std::fill(out.begin(), out.end(), b); };
  } else if (p.drift == "tanh") {
    const double amp = p.drift_value;
    const double center = p.drift_center;
    spec.drift = [amp, center](ConstPoint x, MutPoint out) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = -amp * std::tanh(x[i] - center);
    };
    spec.lipschitz_hint = std::max(1.0, std::abs(amp));
  } else {
    throw ValidationError("unknown drift '" + p.drift + "'");
  }

  if (p.volatility == "constant") {
    if (!(p.sigma >= 0.0)) throw ValidationError("sigma must be nonnegative");
    const double s = p.sigma;
    spec.volatility = [s, d](ConstPoint, MutPoint out) {
      std::fill(out.begin(), out.end(), 0.0);
      for (std::size_t i = 0; i < d; ++i) out[i * d + i] = s;
    };
  } else if (p.volatility == "sine") {
    if (!(p.sigma2_base > std::abs(p.sigma2_amplitude))) {
      throw ValidationError("sine volatility needs sigma2_base > |sigma2_amplitude|");
    }
    const double base2 = p.sigma2_base;
    const double amp2 = p.sigma2_amplitude;
    spec.volatility = [base2, amp2, d](ConstPoint x, MutPoint out) {
      std::fill(out.begin(), out.end(), 0.0);
      const double s = std::sqrt(base2 + amp2 * std::sin(x[0]));
      for (std::size_t i = 0; i < d; ++i) out[i * d + i] = s;
    };
    spec.lipschitz_hint = std::max(spec.lipschitz_hint, std::abs(amp2) / (2.0 * std::sqrt(base2 - std::abs(amp2))));
  } else {
    throw ValidationError("unknown volatility '" + p.volatility + "'");
  }

  const double kappa = p.kill_rate;
  const double kamp = p.kill_rate_amplitude;
  if (kamp == 0.0) {
    spec.kill_rate = [kappa](ConstPoint) { return kappa; };
  } else {
    spec.kill_rate = [kappa, kamp](ConstPoint x) { return kappa * (1.0 + kamp * std::sin(x[0])); };
  }
  spec.kill_rate_bound = kappa * (1.0 + std::abs(kamp));

  const std::size_t kmax = std::max(p.offspring.size(), p.offspring_alt.size());
  spec.max_offspring = static_cast<int>(kmax) - 1;
  std::vector<double> left(kmax, 0.0);
  std::copy(p.offspring.begin(), p.offspring.end(), left.begin());
  if (p.offspring_alt.empty()) {
    spec.offspring = [left](ConstPoint, MutPoint out) { std::copy(left.begin(), left.end(), out.begin()); };
    spec.rho_bound = mean_of(left);
  } else {
    std::vector<double> right(kmax, 0.0);
    std::copy(p.offspring_alt.begin(), p.offspring_alt.end(), right.begin());
    const double split = p.offspring_split;
    spec.offspring = [left, right, split](ConstPoint x, MutPoint out) {
      const auto& src = x[0] < split ? left : right;
      std::copy(src.begin(), src.end(), out.begin());
    };
    spec.rho_bound = std::max(mean_of(left), mean_of(right));
  }

  if (p.scatter == "local") {
    spec.scatter = [](ConstPoint, int, Rng&, MutPoint out) { std::fill(out.begin(), out.end(), 0.0); };
  } else if (p.scatter == "gaussian") {
    if (!(p.scatter_scale >= 0.0)) throw ValidationError("scatter_scale must be nonnegative");
    const double s = p.scatter_scale;
    spec.scatter = [s](ConstPoint, int, Rng& rng, MutPoint out) {
      for (auto& v : out) v = s * standard_normal(rng);
    };
  } else {
    throw ValidationError("unknown scatter '" + p.scatter + "'");
  }

  spec.immigration_rate = p.immigration_rate;
  const double center = p.immigration_center;
  const double scale = p.immigration_scale;
  if (p.immigration == "point") {
    spec.immigration_law = [center](Rng&, MutPoint out) { std::fill(out.begin(), out.end(), center); };
  } else if (p.immigration == "normal") {
    spec.immigration_law = [center, scale](Rng& rng, MutPoint out) {
      for (auto& v : out) v = center + scale * standard_normal(rng);
    };
  } else if (p.immigration == "uniform") {
    spec.immigration_law = [center, scale](Rng& rng, MutPoint out) {
      for (auto& v : out) v = center + scale * (2.0 * uniform01(rng) - 1.0);
    };
  } else {
    throw ValidationError("unknown immigration law '" + p.immigration + "'");
  }
  spec.fallback_law = spec.immigration_law;
  return spec;
}

double sigma2_at(const ModelSpec& spec, ConstPoint x) {
  const auto d = static_cast<std::size_t>(spec.dim);
  std::vector<double> s(d * d);
  spec.volatility(x, s);
  double v = 0.0;
  for (std::size_t j = 0; j < d; ++j) v += s[j] * s[j];
  return v;
}

}  // namespace bdikit::model
