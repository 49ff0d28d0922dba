#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "bdikit/bdi.hpp"
#include "bdikit/engine.hpp"
#include "bdikit/errors.hpp"
#include "bdikit/observe.hpp"
#include "bdikit/partition.hpp"
#include "bdikit/reconstruct.hpp"
#include "bdikit/regress.hpp"
#include "bdikit/verify.hpp"

namespace bdi {

using namespace bdikit;

namespace {

class Writer {
 public:
  explicit Writer(const OutputOptions& o) : o_(o) {
    if (!o_.dir.empty()) std::filesystem::create_directories(o_.dir);
  }

  void emit(const std::string& name, const io::CsvTable& t) {
    if (o_.dir.empty()) {
      if (o_.json) {
        std::cout << io::to_json(t) << '\n';
      } else {
        if (count_++) std::cout << '\n';
        io::write_csv(std::cout, t);
      }
      return;
    }
    const auto base = std::filesystem::path(o_.dir) / name;
    io::write_csv_file(base.string() + ".csv", t);
    if (o_.json) {
      std::ofstream js(base.string() + ".json");
      js << io::to_json(t) << '\n';
    }
  }

 private:
  OutputOptions o_;
  int count_ = 0;
};

std::string fmt(double v) { return io::format_double(v); }

std::string fmt(std::size_t v) { return std::to_string(v); }

io::Header header_with(const ExperimentConfig& cfg, io::Header extra) {
  auto h = config_header(cfg);
  h.insert(h.end(), extra.begin(), extra.end());
  return h;
}

EngineOptions engine_options(const RunConfig& r) {
  EngineOptions eo;
  eo.dt = r.dt;
  eo.horizon = r.horizon;
  eo.max_population = r.max_population;
  eo.max_events = r.max_events;
  return eo;
}

RegenerativeOptions regen_options(const RunConfig& r) {
  RegenerativeOptions o;
  o.time_cap = r.time_cap;
  o.max_population = r.max_population;
  o.max_events = r.max_events;
  return o;
}

// Constant kill rate and offspring law with local scatter: the closed-form
// moment recursion applies.
bool constant_local(const model::PresetParams& p) {
  return p.kill_rate_amplitude == 0.0 && p.offspring_alt.empty() && p.scatter == "local";
}

bool pure_death(const model::PresetParams& p) {
  return constant_local(p) && p.offspring.size() == 1 && p.offspring[0] == 1.0;
}

bool pure_death_brownian(const model::PresetParams& p) {
  return pure_death(p) && p.dim == 1 && p.volatility == "constant" && p.sigma == 1.0 && p.immigration == "point" &&
         (p.drift == "zero" || (p.drift == "constant" && p.drift_value == 0.0));
}

double offspring_moment(const model::PresetParams& p, int power) {
  double m = 0.0;
  for (std::size_t k = 0; k < p.offspring.size(); ++k) m += std::pow(static_cast<double>(k), power) * p.offspring[k];
  return m;
}

int cmd_simulate(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  const std::size_t stride = observation_stride(r.delta, r.dt);
  Rng rng = make_rng(r.seed, 0);
  TrajectoryRecorder rec(spec.dim, r.dt, r.horizon);
  std::string status = "complete";
  try {
    run_engine(spec, Configuration(spec.dim), engine_options(r), rng, rec);
  } catch (const ExplosionError& e) {
    status = std::string("explosion: ") + e.what();
  }
  const Trajectory traj = rec.take();
  const io::Header extra{{"status", status}};
  w.emit("trajectory", io::trajectory_table(traj, header_with(cfg, extra)));
  w.emit("events", io::event_table(traj.events, header_with(cfg, extra)));
  std::vector<Configuration> obs;
  for (const auto& rec_i : traj.records) {
    if (rec_i.kind == TrajectoryRecord::Kind::grid && rec_i.grid_index % stride == 0) {
      obs.push_back(canonical(rec_i.config, false));
    }
  }
  w.emit("observations", io::observation_table(obs, r.delta, header_with(cfg, extra)));
  return status == "complete" ? 0 : kPartialResult;
}

int cmd_occupation(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  if (spec.dim != 1) throw ValidationError("model.dim: occupation histograms are one-dimensional");
  Rng rng = make_rng(r.seed, 0);
  auto opt = regen_options(r);
  opt.histogram = HistogramGrid::uniform_1d(r.hist_lo, r.hist_hi, r.bins);
  const auto st = run_regenerative(spec, r.cycles, r.dt, {}, rng, opt);
  const auto dens = occupation_histogram(st);
  const bool oracle = pure_death_brownian(cfg.model);

  io::CsvTable t{header_with(cfg, {{"cycles_completed", fmt(st.cycle_count)},
                                   {"abandoned_cycles", fmt(st.abandoned_cycles)},
                                   {"total_time", fmt(st.total_time)}}),
                 {"bin", "bin_lo", "bin_hi", "center", "density", "oracle"},
                 {}};
  const double width = (r.hist_hi - r.hist_lo) / static_cast<double>(r.bins);
  for (std::size_t b = 0; b < dens.size(); ++b) {
    const double c = opt.histogram->center(b, 0);
    const std::string o = oracle ? fmt(verify::pure_death_occupation_density(cfg.model.immigration_rate,
                                                                             cfg.model.kill_rate,
                                                                             c - cfg.model.immigration_center))
                                 : "";
    t.rows.push_back({fmt(b), fmt(c - width / 2), fmt(c + width / 2), fmt(c), fmt(dens[b]), o});
  }
  w.emit("occupation", t);
  return st.abandoned_cycles ? kPartialResult : 0;
}

int cmd_moments(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  Rng rng = make_rng(r.seed, 0);
  const auto st = run_regenerative(spec, r.cycles, r.dt, count_power_functionals(r.q), rng, regen_options(r));
  const auto m = particle_count_moments(st, r.q);
  const auto& p = cfg.model;
  const bool formula = constant_local(p) && offspring_moment(p, 1) < 1.0;

  io::CsvTable t{header_with(cfg, {{"cycles_completed", fmt(st.cycle_count)},
                                   {"abandoned_cycles", fmt(st.abandoned_cycles)},
                                   {"total_time", fmt(st.total_time)}}),
                 {"quantity", "estimate", "std_error", "formula"},
                 {}};
  for (int q = 1; q <= r.q; ++q) {
    std::string f;
    if (formula && q <= 2) {
      f = fmt(verify::moment_formula(p.immigration_rate, p.kill_rate, offspring_moment(p, 1), q,
                                     offspring_moment(p, 2)));
    }
    const auto& e = m[static_cast<std::size_t>(q - 1)];
    t.rows.push_back({count_power_name(q), fmt(e.estimate), fmt(e.std_error), f});
  }
  const auto v = void_fraction(st);
  t.rows.push_back({"void", fmt(v.estimate), fmt(v.std_error),
                    pure_death(p) ? fmt(std::exp(-p.immigration_rate / p.kill_rate)) : ""});
  w.emit("moments", t);
  return st.abandoned_cycles ? kPartialResult : 0;
}

// Streams one simulation into several observation collectors.
class Fanout : public Sink {
 public:
  explicit Fanout(std::vector<ObservationCollector>& cols) : cols_(cols) {}
  bool on_gridpoint(std::size_t index, double t, const Configuration& c) override {
    bool keep = true;
    for (auto& s : cols_) keep = s.on_gridpoint(index, t, c) && keep;
    return keep;
  }
  void on_event(const EventLogEntry& e, const Configuration& after) override {
    for (auto& s : cols_) s.on_event(e, after);
  }

 private:
  std::vector<ObservationCollector>& cols_;
};

int cmd_reconstruct(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  Rng rng = make_rng(r.seed, 0);
  std::vector<ReconStats> stats(r.deltas.size());
  std::vector<ObservationCollector> cols;
  cols.reserve(r.deltas.size());
  for (std::size_t i = 0; i < r.deltas.size(); ++i) {
    stats[i].delta = r.deltas[i];
    stats[i].lambda = r.lambda;
    cols.emplace_back(r.deltas[i], r.dt, false);
    cols.back().set_pair_callback(
        [&s = stats[i], d = r.deltas[i], lambda = r.lambda](const Configuration& x, const Configuration& y,
                                                            const SegmentRecord& truth) {
          const auto m = match_pair(x, y, d, lambda);
          s.add(!x.empty(), truth.ci_flag(d, lambda), m, m.identified() && permutation_matches_truth(m, truth));
          return true;
        });
  }
  Fanout fan(cols);
  std::string status = "complete";
  try {
    run_engine(spec, Configuration(spec.dim), engine_options(r), rng, fan);
  } catch (const ExplosionError& e) {
    status = std::string("explosion: ") + e.what();
  }

  io::CsvTable t{header_with(cfg, {{"status", status}}),
                 {"delta", "lambda", "pairs", "nonvoid", "identifiable", "identifiable_correct",
                  "identifiable_wrong", "nonvoid_not_ci", "ci", "ci_not_identifiable", "ci_wrong",
                  "p_nonvoid_not_ci", "p_nonvoid_not_ci_se", "p_identifiable_wrong", "p_identifiable_wrong_se",
                  "p_ci"},
                 {}};
  for (const auto& s : stats) {
    const auto not_ci = s.n_pairs >= 2 ? s.proportion_estimate(is_nonvoid_not_ci) : stats::Estimate{};
    const auto wrong = s.n_pairs >= 2 ? s.proportion_estimate(is_identifiable_wrong) : stats::Estimate{};
    t.rows.push_back({fmt(s.delta), fmt(s.lambda), fmt(s.n_pairs), fmt(s.n_nonvoid), fmt(s.n_identifiable),
                      fmt(s.n_identifiable_correct), fmt(s.n_identifiable_wrong), fmt(s.n_nonvoid_not_ci),
                      fmt(s.n_ci), fmt(s.n_ci_not_identifiable), fmt(s.n_ci_wrong),
                      fmt(s.proportion(s.n_nonvoid_not_ci)), fmt(not_ci.std_error),
                      fmt(s.proportion(s.n_identifiable_wrong)), fmt(wrong.std_error), fmt(s.proportion(s.n_ci))});
  }
  w.emit("reconstruct", t);
  return status == "complete" ? 0 : kPartialResult;
}

int cmd_scheme(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  const Box cube{std::vector<double>(static_cast<std::size_t>(spec.dim), r.cube_lo), r.cube_edge};
  const auto cells = partition(cube, r.delta, spec.dim);
  Rng rng = make_rng(r.seed, 0);
  SchemeFiller filler(cells, r.delta, r.lambda);
  ObservationCollector col(r.delta, r.dt, false);
  col.set_pair_callback([&](const Configuration& x, const Configuration& y, const SegmentRecord& seg) {
    filler.add_pair(x, y, &seg);
    return filler.scheme().filled_count < cells.cell_count();
  });
  std::string status = "complete";
  try {
    run_engine(spec, Configuration(spec.dim), engine_options(r), rng, col);
  } catch (const ExplosionError& e) {
    status = std::string("explosion: ") + e.what();
  }
  const auto& s = filler.scheme();
  if (status == "complete" && s.filled_count < cells.cell_count()) status = "horizon_reached";

  io::CsvTable t{header_with(cfg, {{"status", status},
                                   {"n", fmt(cells.n)},
                                   {"cell_count", fmt(cells.cell_count())},
                                   {"filled_count", fmt(s.filled_count)},
                                   {"tau_star", fmt(s.tau_star)},
                                   {"pairs_seen", fmt(filler.pairs_seen())}}),
                 {"cell", "cell_lo", "filled", "tau", "particle", "x", "z", "good"},
                 {}};
  for (std::size_t c = 0; c < s.entries.size(); ++c) {
    const auto& e = s.entries[c];
    std::vector<double> lo;
    for (std::size_t a = 0; a < cells.dim(); ++a) lo.push_back(cells.cell_lo(c, a));
    t.rows.push_back({fmt(c), io::format_list(lo), e.filled ? "1" : "0", e.filled ? fmt(e.tau) : "",
                      e.filled ? fmt(e.particle) : "", io::format_list(e.x), io::format_list(e.z),
                      e.filled ? (e.good ? "1" : "0") : ""});
  }
  w.emit("scheme", t);
  return status.rfind("explosion", 0) == 0 ? kPartialResult : 0;
}

SweepOptions sweep_options(const RunConfig& r) {
  SweepOptions o;
  o.max_time = r.max_time;
  o.max_population = r.max_population;
  o.max_events = r.max_events;
  o.burn_in = r.burn_in;
  return o;
}

int cmd_estimate(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  Rng rng = make_rng(r.seed, 0);
  std::optional<EstimateReport> rep;
  std::string status = "complete";
  try {
    rep = estimate_once(spec, Box{{r.cube_lo}, r.cube_edge}, r.a, r.beta, r.lambda, r.delta, r.dt_ratio, rng,
                        sweep_options(r));
    if (!rep) status = "time_cap";
  } catch (const ExplosionError& e) {
    status = std::string("explosion: ") + e.what();
  }
  io::CsvTable t{header_with(cfg, {{"status", status}}),
                 {"a", "estimate", "truth", "delta", "n", "h", "beta", "lambda", "squared_error", "rescaled_error",
                  "had_bad_entry", "fill_time"},
                 {}};
  if (rep) {
    t.rows.push_back({fmt(rep->a), fmt(rep->estimate), rep->truth ? fmt(*rep->truth) : "", fmt(rep->delta),
                      fmt(rep->n), fmt(rep->h), fmt(rep->beta), fmt(rep->lambda), fmt(rep->squared_error),
                      fmt(rep->rescaled_error), rep->had_bad_entry ? "1" : "0", fmt(rep->fill_time)});
  }
  w.emit("estimate", t);
  return rep ? 0 : kPartialResult;
}

int cmd_sweep(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto spec = model::make_model(cfg.model);
  Rng rng = make_rng(r.seed, 0);
  const auto rows = risk_sweep(spec, Box{{r.cube_lo}, r.cube_edge}, r.a, r.beta, r.lambda, r.deltas, r.replicates,
                               r.dt_ratio, rng, sweep_options(r));
  io::CsvTable t{header_with(cfg, {}),
                 {"delta", "n", "h", "lambda", "beta", "replicates", "dropped", "mean_estimate", "mse", "mse_se",
                  "rescaled_mse", "f_event_frequency"},
                 {}};
  io::CsvTable reps{header_with(cfg, {}),
                    {"delta", "replicate", "estimate", "squared_error", "rescaled_error", "had_bad_entry",
                     "fill_time"},
                    {}};
  bool dropped = false;
  for (const auto& row : rows) {
    t.rows.push_back({fmt(row.delta), fmt(row.n), fmt(row.h), fmt(row.lambda), fmt(row.beta), fmt(row.replicates),
                      fmt(row.dropped), fmt(row.mean_estimate), fmt(row.mse), fmt(row.mse_se), fmt(row.rescaled_mse),
                      fmt(row.f_event_frequency)});
    dropped = dropped || row.dropped > 0;
    for (std::size_t i = 0; i < row.reports.size(); ++i) {
      const auto& e = row.reports[i];
      reps.rows.push_back({fmt(row.delta), fmt(i), fmt(e.estimate), fmt(e.squared_error), fmt(e.rescaled_error),
                           e.had_bad_entry ? "1" : "0", fmt(e.fill_time)});
    }
  }
  w.emit("sweep", t);
  w.emit("sweep_replicates", reps);
  return dropped ? kPartialResult : 0;
}

int cmd_verify(const ExperimentConfig& cfg, Writer& w) {
  const auto& r = cfg.run;
  const auto& p = cfg.model;
  const auto spec = model::make_model(p);
  Rng rng = make_rng(r.seed, 0);
  Rng semigroup_rng = split(rng);
  Rng regen_rng = split(rng);

  std::vector<verify::OracleReport> reports;
  const std::vector<double> y(static_cast<std::size_t>(spec.dim), p.immigration_center);
  const bool constant = p.kill_rate_amplitude == 0.0 && p.offspring_alt.empty();
  for (auto& rep : verify::expectation_semigroup_compare(spec, y, r.t, r.dt, r.paths, r.paths, semigroup_rng,
                                                         constant)) {
    reports.push_back(std::move(rep));
  }

  const double rho = offspring_moment(p, 1);
  if (constant_local(p) && rho < 1.0) {
    auto fs = count_power_functionals(2);
    const bool occupation = pure_death_brownian(p);
    const std::vector<std::pair<double, double>> bins{{0.5, 0.6}, {1.0, 1.1}, {-0.6, -0.5}};
    if (occupation) {
      for (const auto& [lo, hi] : bins) {
        const double a = p.immigration_center + lo;
        const double b = p.immigration_center + hi;
        fs.push_back({"occupation[" + fmt(lo) + "," + fmt(hi) + ")", [a, b](const Configuration& x) {
                        double n = 0.0;
                        for (double v : x.positions) n += (v >= a && v < b) ? 1.0 : 0.0;
                        return n;
                      }});
      }
    }
    const auto st = run_regenerative(spec, r.cycles, r.dt, fs, regen_rng, regen_options(r));
    const auto m = particle_count_moments(st, 2);
    for (int q = 1; q <= 2; ++q) {
      const auto& e = m[static_cast<std::size_t>(q - 1)];
      reports.push_back(verify::make_report("moment_" + count_power_name(q),
                                            verify::moment_formula(p.immigration_rate, p.kill_rate, rho, q,
                                                                   offspring_moment(p, 2)),
                                            e.estimate, e.std_error));
    }
    if (pure_death(p)) {
      const auto v = void_fraction(st);
      reports.push_back(
          verify::make_report("void_fraction", std::exp(-p.immigration_rate / p.kill_rate), v.estimate, v.std_error));
    }
    if (occupation) {
      // bin averages of c exp(-s|z|) / s, s = sqrt(2 kappa), over bins away from the origin
      const double s = std::sqrt(2.0 * p.kill_rate);
      for (const auto& [lo, hi] : bins) {
        const std::string name = "occupation[" + fmt(lo) + "," + fmt(hi) + ")";
        const double mass = p.immigration_rate / (s * s) * std::abs(std::exp(-s * std::abs(lo)) -
                                                                   std::exp(-s * std::abs(hi)));
        const auto e = functional_mean(st, name);
        reports.push_back(verify::make_report(name, mass / (hi - lo), e.estimate / (hi - lo), e.std_error / (hi - lo)));
      }
    }
  }

  bool all = true;
  io::CsvTable t{header_with(cfg, {}), {"quantity", "analytic", "simulated", "std_error", "z_score", "pass"}, {}};
  for (const auto& rep : reports) {
    all = all && rep.pass;
    t.rows.push_back({rep.quantity, fmt(rep.analytic), fmt(rep.simulated), fmt(rep.std_error), fmt(rep.z_score),
                      rep.pass ? "1" : "0"});
  }
  w.emit("verify", t);
  return all ? 0 : kOracleFailure;
}

}  // namespace

int run_subcommand(const ExperimentConfig& cfg, const OutputOptions& out) {
  validate(cfg);
  Writer w(out);
  const auto& s = cfg.subcommand;
  if (s == "simulate") return cmd_simulate(cfg, w);
  if (s == "occupation") return cmd_occupation(cfg, w);
  if (s == "moments") return cmd_moments(cfg, w);
  if (s == "reconstruct") return cmd_reconstruct(cfg, w);
  if (s == "scheme") return cmd_scheme(cfg, w);
  if (s == "estimate") return cmd_estimate(cfg, w);
  if (s == "sweep") return cmd_sweep(cfg, w);
  if (s == "verify") return cmd_verify(cfg, w);
  throw PreconditionError("unknown subcommand '" + s + "'");
}

}  // namespace bdi
