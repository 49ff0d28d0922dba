#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bdikit/io.hpp"
#include "bdikit/presets.hpp"

namespace bdi {

/// Experiment settings shared by all subcommands. Keys are the field names.
struct RunConfig {
  std::uint64_t seed = 1;
  double horizon = 100.0;
  double dt = 0.01;
  std::size_t cycles = 2000;
  double time_cap = 1e5;
  double delta = 0.01;
  std::vector<double> deltas{0.02, 0.01, 0.005};
  double lambda = 0.475;
  double beta = 2.0;
  double cube_lo = 0.0;
  double cube_edge = 1.0;
  double a = 0.5;
  std::size_t replicates = 50;
  double dt_ratio = 1.0;
  double burn_in = 0.0;
  double max_time = 1e4;
  int q = 2;
  double hist_lo = -2.0;
  double hist_hi = 2.0;
  std::size_t bins = 80;
  std::size_t paths = 20000;
  double t = 1.0;
  std::size_t max_population = 100000;
  std::size_t max_events = 1000000;
};

struct ExperimentConfig {
  std::string subcommand;
  bdikit::model::PresetParams model = bdikit::model::preset_params("pure-death-bm");
  RunConfig run;
};

/// Reads {"model": {"preset": ..., key: value}, "run": {key: value}}.
void load_config_file(ExperimentConfig& cfg, const std::string& path);

/// key=value; key may be prefixed by "model." or "run.". Bare keys go to
/// the model when it knows them and to the run settings otherwise.
void apply_setting(ExperimentConfig& cfg, const std::string& assignment);

void set_run_field(RunConfig& run, const std::string& key, const std::string& value);

/// Throws ValidationError naming the offending field.
void validate(const ExperimentConfig& cfg);

/// Header block: subcommand, seed, model.* and run.* entries.
bdikit::io::Header config_header(const ExperimentConfig& cfg);

}  // namespace bdi
