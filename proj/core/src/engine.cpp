#include "bdikit/engine.hpp"

#include <algorithm>
#include <cmath>

#include "bdikit/errors.hpp"

namespace bdikit {

std::string to_string(EventLogEntry::Kind kind) {
  switch (kind) {
    case EventLogEntry::Kind::death: return "death";
    case EventLogEntry::Kind::branch: return "branch";
    case EventLogEntry::Kind::immigration: return "immigration";
  }
  return "unknown";
}

namespace {

struct Particle {
  std::uint64_t id = 0;
  std::vector<double> x;    // position at t0, the start of the current step
  std::vector<double> now;  // position at the latest record time
  double t0 = 0.0;
  sde::EulerStep step;
};

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double a) { return std::isfinite(a); });
}

class Engine {
 public:
  Engine(const model::ModelSpec& spec, const EngineOptions& opt, Rng& rng)
      : spec_(spec), opt_(opt), motion_(split(rng)), events_(split(rng)), d_(static_cast<std::size_t>(spec.dim)),
        cur_(spec.dim), probe_(d_) {}

  RunResult run(const Configuration& init, Sink& sink, std::uint64_t next_id) {
    if (!(opt_.dt > 0.0)) throw PreconditionError("dt must be positive");
    if (!(opt_.horizon > 0.0)) throw PreconditionError("horizon must be positive");
    if (init.dim != spec_.dim) throw PreconditionError("initial configuration has wrong dimension");
    const double c = opt_.immigration ? spec_.immigration_rate : 0.0;
    const double kbar = spec_.kill_rate_bound;

    std::uint64_t max_id = 0;
    for (std::size_t i = 0; i < init.size(); ++i) {
      Particle p;
      p.id = init.has_ids() ? init.ids[i] : static_cast<std::uint64_t>(i);
      max_id = std::max(max_id, p.id + 1);
      p.x.assign(init.at(i).begin(), init.at(i).end());
      if (!finite(p.x)) throw PreconditionError("initial positions must be finite");
      p.now = p.x;
      ps_.push_back(std::move(p));
    }
    next_id_ = std::max(next_id, max_id);

    RunResult res;
    std::size_t k = 0;
    double t_last = 0.0;
    rebuild();
    if (!sink.on_gridpoint(0, 0.0, cur_)) return finish(res, RunResult::Status::stopped, 0.0);
    double t_next = grid_time(1);
    for (auto& p : ps_) begin(p, 0.0, t_next);

    auto rate = [&] { return c + kbar * static_cast<double>(ps_.size()); };
    auto draw = [&](double from) {
      const double r = rate();
      return r > 0.0 ? from + exponential(events_, r) : std::numeric_limits<double>::infinity();
    };
    double next = draw(0.0);

    while (true) {
      if (next < t_next) {
        const double tp = next;
        const double u = uniform01(events_) * rate();
        EventLogEntry ev;
        bool accepted = false;
        if (u < c) {
          materialize(tp);
          sink.on_segment(t_last, tp, cur_);
          Particle p;
          p.id = next_id_++;
          p.x.resize(d_);
          spec_.immigration_law(events_, p.x);
          if (!finite(p.x)) throw NumericalError("non-finite immigrant position", k);
          ev.kind = EventLogEntry::Kind::immigration;
          ev.parent_id = p.id;
          ev.site = p.x;
          begin(p, tp, t_next);
          ps_.push_back(std::move(p));
          accepted = true;
        } else {
          const auto j = std::min(ps_.size() - 1, static_cast<std::size_t>((u - c) / kbar));
          Particle& pj = ps_[j];
          pj.step.position_at(tp - pj.t0, events_, probe_);
          const double kappa = spec_.kill_rate(probe_);
          if (kappa > kbar * (1.0 + 1e-12)) throw PreconditionError("kill rate exceeds kill_rate_bound");
          if (uniform01(events_) * kbar < kappa) {
            materialize(tp);
            sink.on_segment(t_last, tp, cur_);
            branch(j, tp, t_next, ev, k);
            accepted = true;
          }
        }
        if (accepted) {
          ev.time = tp;
          ++res.events;
          if (res.events > opt_.max_events) throw ExplosionError("event count exceeded max_events");
          if (ps_.size() > opt_.max_population) throw ExplosionError("population exceeded max_population");
          rebuild();
          t_last = tp;
          sink.on_event(ev, cur_);
          if (opt_.stop_at_void && ps_.empty()) return finish(res, RunResult::Status::void_reached, tp);
        }
        next = draw(tp);
        continue;
      }

      if (ps_.empty() && c == 0.0 && std::isinf(opt_.horizon)) {
        // Nothing can happen any more and there is no horizon to run to.
        return finish(res, RunResult::Status::void_reached, t_last);
      }
      for (auto& p : ps_) {
        p.step.end(p.x);
        if (!finite(p.x)) throw NumericalError("non-finite position", k + 1);
        p.t0 = t_next;
        p.now = p.x;
      }
      sink.on_segment(t_last, t_next, cur_);
      rebuild();
      t_last = t_next;
      ++k;
      if (!sink.on_gridpoint(k, t_next, cur_)) return finish(res, RunResult::Status::stopped, t_next);
      if (t_next >= opt_.horizon) return finish(res, RunResult::Status::horizon, t_next);
      const double t_after = grid_time(k + 1);
      for (auto& p : ps_) begin(p, t_next, t_after);
      t_next = t_after;
    }
  }

 private:
  double grid_time(std::size_t i) const { return std::min(static_cast<double>(i) * opt_.dt, opt_.horizon); }

  void begin(Particle& p, double t0, double t1) {
    p.t0 = t0;
    p.now = p.x;
    p.step.begin(spec_, p.x, t1 - t0, motion_);
  }

  void materialize(double t) {
    for (auto& p : ps_) p.step.position_at(t - p.t0, events_, p.now);
  }

  void rebuild() {
    cur_.clear();
    for (const auto& p : ps_) cur_.push_back(p.now, p.id);
  }

  void branch(std::size_t j, double tp, double t_next, EventLogEntry& ev, std::size_t k) {
    const std::vector<double> site(probe_);
    const auto probs = model::offspring_at(spec_, site);
    const int n = model::sample_offspring_count(probs, events_);
    std::vector<double> offsets(static_cast<std::size_t>(n) * d_);
    if (n > 0) spec_.scatter(site, n, events_, offsets);
    if (!finite(offsets)) throw NumericalError("non-finite scatter offset", k);
    ev.kind = n == 0 ? EventLogEntry::Kind::death : EventLogEntry::Kind::branch;
    ev.k = n;
    ev.parent_id = ps_[j].id;
    ev.site = site;
    ev.child_offsets = offsets;

    std::vector<Particle> children(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < children.size(); ++i) {
      Particle& ch = children[i];
      ch.id = next_id_++;
      ev.child_ids.push_back(ch.id);
      ch.x.resize(d_);
      for (std::size_t m = 0; m < d_; ++m) ch.x[m] = site[m] + offsets[i * d_ + m];
      begin(ch, tp, t_next);
    }
    ps_.erase(ps_.begin() + static_cast<std::ptrdiff_t>(j));
    ps_.insert(ps_.begin() + static_cast<std::ptrdiff_t>(j), std::make_move_iterator(children.begin()),
               std::make_move_iterator(children.end()));
  }

  RunResult finish(RunResult& res, RunResult::Status status, double t) {
    res.status = status;
    res.end_time = t;
    res.next_id = next_id_;
    return res;
  }

  const model::ModelSpec& spec_;
  const EngineOptions& opt_;
  Rng motion_;
  Rng events_;
  std::size_t d_;
  std::vector<Particle> ps_;
  Configuration cur_;
  std::vector<double> probe_;
  std::uint64_t next_id_ = 0;
};

}  // namespace

RunResult run_engine(const model::ModelSpec& spec, const Configuration& init, const EngineOptions& options,
                     Rng& rng, Sink& sink, std::uint64_t next_id) {
  Engine engine(spec, options, rng);
  return engine.run(init, sink, next_id);
}

}  // namespace bdikit
