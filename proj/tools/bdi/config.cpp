#include "config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bdikit/errors.hpp"

namespace bdi {

using bdikit::PreconditionError;
using bdikit::ValidationError;
namespace io = bdikit::io;

namespace {

double number(const std::string& key, const std::string& value) {
  const auto v = io::parse_list(value);
  if (v.size() != 1) throw PreconditionError("run." + key + ": expected one number, got '" + value + "'");
  return v[0];
}

std::size_t count(const std::string& key, const std::string& value) {
  const double v = number(key, value);
  if (!(v >= 0.0) || v != std::floor(v)) throw PreconditionError("run." + key + ": expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::string json_text(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number()) return io::format_double(v.get<double>());
  if (v.is_array()) {
    std::vector<double> list;
    for (const auto& x : v) list.push_back(x.get<double>());
    return io::format_list(list, ',');
  }
  throw PreconditionError("unsupported config value " + v.dump());
}

bool is_model_key(const std::string& key) {
  static const auto keys = bdikit::model::to_key_values(bdikit::model::PresetParams{});
  return key == "preset" || keys.count(key) > 0;
}

void set_model_field(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "preset") {
    cfg.model = bdikit::model::preset_params(value);
  } else {
    bdikit::model::apply_override(cfg.model, key, value);
  }
}

}  // namespace

void set_run_field(RunConfig& r, const std::string& key, const std::string& value) {
  if (key == "seed") {
    try {
      std::size_t pos = 0;
      r.seed = std::stoull(value, &pos);
      if (pos != value.size()) throw PreconditionError("");
    } catch (const std::exception&) {
      throw PreconditionError("run.seed: expected an unsigned 64-bit integer, got '" + value + "'");
    }
  } else if (key == "horizon") {
    r.horizon = number(key, value);
  } else if (key == "dt") {
    r.dt = number(key, value);
  } else if (key == "cycles") {
    r.cycles = count(key, value);
  } else if (key == "time_cap") {
    r.time_cap = number(key, value);
  } else if (key == "delta") {
    r.delta = number(key, value);
  } else if (key == "deltas") {
    r.deltas = io::parse_list(value, ',');
  } else if (key == "lambda") {
    r.lambda = number(key, value);
  } else if (key == "beta") {
    r.beta = number(key, value);
  } else if (key == "cube_lo") {
    r.cube_lo = number(key, value);
  } else if (key == "cube_edge") {
    r.cube_edge = number(key, value);
  } else if (key == "a") {
    r.a = number(key, value);
  } else if (key == "replicates") {
    r.replicates = count(key, value);
  } else if (key == "dt_ratio") {
    r.dt_ratio = number(key, value);
  } else if (key == "burn_in") {
    r.burn_in = number(key, value);
  } else if (key == "max_time") {
    r.max_time = number(key, value);
  } else if (key == "q") {
    r.q = static_cast<int>(count(key, value));
  } else if (key == "hist_lo") {
    r.hist_lo = number(key, value);
  } else if (key == "hist_hi") {
    r.hist_hi = number(key, value);
  } else if (key == "bins") {
    r.bins = count(key, value);
  } else if (key == "paths") {
    r.paths = count(key, value);
  } else if (key == "t") {
    r.t = number(key, value);
  } else if (key == "max_population") {
    r.max_population = count(key, value);
  } else if (key == "max_events") {
    r.max_events = count(key, value);
  } else {
    throw PreconditionError("unknown setting '" + key + "'");
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw PreconditionError("cannot open config '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object()) throw PreconditionError("config must be a JSON object");
  for (const auto& [section, body] : doc.items()) {
    if (section == "model") {
      if (!body.is_object()) throw PreconditionError("config.model must be an object");
      if (body.contains("preset")) set_model_field(cfg, "preset", body["preset"].get<std::string>());
      for (const auto& [k, v] : body.items()) {
        if (k != "preset") set_model_field(cfg, k, json_text(v));
      }
    } else if (section == "run") {
      if (!body.is_object()) throw PreconditionError("config.run must be an object");
      for (const auto& [k, v] : body.items()) set_run_field(cfg.run, k, json_text(v));
    } else {
      throw PreconditionError("unknown config section '" + section + "'");
    }
  }
}

void apply_setting(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw PreconditionError("--set expects key=value, got '" + assignment + "'");
  std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  if (key.rfind("model.", 0) == 0) {
    set_model_field(cfg, key.substr(6), value);
  } else if (key.rfind("run.", 0) == 0) {
    set_run_field(cfg.run, key.substr(4), value);
  } else if (is_model_key(key)) {
    set_model_field(cfg, key, value);
  } else {
    set_run_field(cfg.run, key, value);
  }
}

void validate(const ExperimentConfig& cfg) {
  const auto& r = cfg.run;
  auto require = [](bool ok, const std::string& field, const std::string& rule) {
    if (!ok) throw ValidationError("run." + field + ": " + rule);
  };
  require(r.lambda > 0.0 && r.lambda < 0.5, "lambda", "must lie in (0, 1/2)");
  require(r.delta > 0.0, "delta", "must be positive");
  require(!r.deltas.empty(), "deltas", "must not be empty");
  for (double d : r.deltas) require(d > 0.0, "deltas", "every entry must be positive");
  require(r.dt > 0.0, "dt", "must be positive");
  require(r.horizon > 0.0, "horizon", "must be positive");
  require(r.cycles >= 2, "cycles", "must be at least 2");
  require(r.time_cap > 0.0, "time_cap", "must be positive");
  require(r.beta > 1.0, "beta", "must exceed 1");
  require(r.cube_edge > 0.0, "cube_edge", "must be positive");
  require(r.replicates >= 1, "replicates", "must be at least 1");
  require(r.dt_ratio >= 1.0, "dt_ratio", "must be at least 1");
  require(r.burn_in >= 0.0, "burn_in", "must be nonnegative");
  require(r.max_time > 0.0, "max_time", "must be positive");
  require(r.q >= 1, "q", "must be at least 1");
  require(r.hist_hi > r.hist_lo, "hist_hi", "must exceed hist_lo");
  require(r.bins >= 1, "bins", "must be at least 1");
  require(r.paths >= 2, "paths", "must be at least 2");
  require(r.t > 0.0, "t", "must be positive");
  const auto spec = bdikit::model::make_model(cfg.model);  // throws ValidationError on a malformed model
  bdikit::Rng rng = bdikit::make_rng(r.seed, 0xC0FF1E);
  const auto report = bdikit::model::validate_spec(spec, 200, rng);
  if (!report.ok()) {
    const auto& v = report.violations.front();
    throw ValidationError("model: " + bdikit::model::to_string(v.kind) + " at x = " +
                          io::format_list(v.point, ',') + " (value " + io::format_double(v.value) + ")");
  }
}

io::Header config_header(const ExperimentConfig& cfg) {
  io::Header h;
  h.emplace_back("subcommand", cfg.subcommand);
  h.emplace_back("seed", std::to_string(cfg.run.seed));
  for (const auto& [k, v] : bdikit::model::to_key_values(cfg.model)) h.emplace_back("model." + k, v);
  const auto& r = cfg.run;
  const auto f = [](double v) { return io::format_double(v); };
  h.emplace_back("run.horizon", f(r.horizon));
  h.emplace_back("run.dt", f(r.dt));
  h.emplace_back("run.cycles", std::to_string(r.cycles));
  h.emplace_back("run.time_cap", f(r.time_cap));
  h.emplace_back("run.delta", f(r.delta));
  h.emplace_back("run.deltas", io::format_list(r.deltas, ','));
  h.emplace_back("run.lambda", f(r.lambda));
  h.emplace_back("run.beta", f(r.beta));
  h.emplace_back("run.cube_lo", f(r.cube_lo));
  h.emplace_back("run.cube_edge", f(r.cube_edge));
  h.emplace_back("run.a", f(r.a));
  h.emplace_back("run.replicates", std::to_string(r.replicates));
  h.emplace_back("run.dt_ratio", f(r.dt_ratio));
  h.emplace_back("run.burn_in", f(r.burn_in));
  h.emplace_back("run.max_time", f(r.max_time));
  h.emplace_back("run.q", std::to_string(r.q));
  h.emplace_back("run.hist_lo", f(r.hist_lo));
  h.emplace_back("run.hist_hi", f(r.hist_hi));
  h.emplace_back("run.bins", std::to_string(r.bins));
  h.emplace_back("run.paths", std::to_string(r.paths));
  h.emplace_back("run.t", f(r.t));
  h.emplace_back("run.max_population", std::to_string(r.max_population));
  h.emplace_back("run.max_events", std::to_string(r.max_events));
  return h;
}

}  // namespace bdi
