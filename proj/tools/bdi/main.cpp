#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bdikit/errors.hpp"
#include "commands.hpp"
#include "config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Simulation and estimation for branching diffusions with immigration"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string preset;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  bdi::OutputOptions out;
  app.add_option("--config", config_path, "JSON config with \"model\" and \"run\" sections")->check(CLI::ExistingFile);
  app.add_option("--preset", preset, "model preset (applied before --set)");
  auto* seed_opt = app.add_option("--seed", seed, "master seed");
  app.add_option("--set", sets, "override, key=value (model.* or run.* prefixes optional)")->take_all();
  app.add_option("--out", out.dir, "output directory (default: stdout)");
  app.add_flag("--json", out.json, "also write a JSON mirror of every table");

  const std::vector<std::pair<std::string, std::string>> subcommands{
      {"simulate", "trajectory, event log and observations from the void configuration"},
      {"occupation", "occupation density histogram from regenerative cycles"},
      {"moments", "particle-count moments and void fraction"},
      {"reconstruct", "reconstruction outcome counts across run.deltas"},
      {"scheme", "regression scheme filled from one simulation"},
      {"estimate", "one volatility estimate at run.a"},
      {"sweep", "pointwise risk across run.deltas"},
      {"verify", "oracle reports for the model"},
  };
  for (const auto& [name, help] : subcommands) app.add_subcommand(name, help);

  CLI11_PARSE(app, argc, argv);

  bdi::ExperimentConfig cfg;
  cfg.subcommand = app.get_subcommands().front()->get_name();
  try {
    if (!config_path.empty()) bdi::load_config_file(cfg, config_path);
    if (!preset.empty()) bdi::apply_setting(cfg, "preset=" + preset);
    for (const auto& s : sets) bdi::apply_setting(cfg, s);
    if (*seed_opt) cfg.run.seed = seed;
  } catch (const bdikit::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  try {
    return bdi::run_subcommand(cfg, out);
  } catch (const bdikit::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const bdikit::PreconditionError& e) {
    std::cerr << "invalid request: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
