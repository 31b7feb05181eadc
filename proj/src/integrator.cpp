#include "fdp/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fdp/chemo_fd.hpp"
#include "fdp/merger.hpp"
#include "fdp/particle_core.hpp"
#include "fdp/projection.hpp"

namespace fdp {

struct Simulation::Evaluation {
  std::array<VelocitySamples, 2> vel;
  std::array<std::vector<double>, 2> beta;
  StateDerivative deriv;
};

Simulation::Simulation(const SimulationConfig& cfg)
    : cfg_(validate(cfg)),
      grid_(Grid::with_spacing(cfg_.domain, cfg_.delta)),
      merger_grid_(Grid::with_spacing(cfg_.domain, cfg_.merger_mesh_size())),
      d_min_(default_min_distance(grid_)) {
  state_.particles = init_particles(cfg_);
  if (cfg_.tau == 1) {
    state_.c = grid_.sample(cfg_.initial_c);
  } else {
    const auto rho = particles_to_grid(state_.particles, grid_, d_min_);
    state_.c = solve_elliptic(rho[0], rho[1], cfg_, grid_).c;
  }
}

Simulation::Evaluation Simulation::evaluate(const SimulationState& s) const {
  Evaluation e;
  const DerivativeFields d = grid_derivatives(s.c, grid_);
  e.vel = sample_particle_velocity(s.particles, d, grid_, cfg_);
  e.beta = diffusion_weight_rhs(s.particles, cfg_);
  e.deriv = particle_rhs(s.particles, e.vel, e.beta);
  if (cfg_.tau == 1) {
    const auto rho = particles_to_grid(s.particles, grid_, d_min_);
    e.deriv.dc = chemo_rhs(s.c, rho[0], rho[1], cfg_, grid_);
  }
  return e;
}

Simulation::Stage Simulation::euler(const Stage& st, double dt) {
  StateDerivative f;
  if (reuse_) {
    f = std::move(*reuse_);
    reuse_.reset();
  } else {
    f = evaluate(st.s).deriv;
  }
  Stage out = st;
  for (int k = 0; k < cfg_.n_species; ++k) {
    ParticleSet& p = out.s.particles.species[k];
    const ParticleRates& r = f.species[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      p.x[i] += dt * r.dx[i];
      p.y[i] += dt * r.dy[i];
      p.w[i] += dt * r.dw[i];
      p.area[i] += dt * r.darea[i];
    }
  }
  if (cfg_.tau == 1)
    for (std::size_t i = 0; i < out.s.c.size(); ++i) out.s.c[i] += dt * f.dc[i];
  return out;
}

// a * base + b * st, with the step-start particles of `base` first coalesced
// along st's lineage so both operands share st's indexing.
Simulation::Stage Simulation::combine(double a, const Stage& base, double b, const Stage& st) const {
  Stage out = st;
  for (int k = 0; k < cfg_.n_species; ++k) {
    const ParticleSet& p0 = base.s.particles.species[k];
    ParticleSet& p = out.s.particles.species[k];
    const auto& lineage = st.lineage[k];
    const std::size_t n = p.size();
    std::vector<double> w(n, 0.0), wx(n, 0.0), wy(n, 0.0), area(n, 0.0), sx(n, 0.0), sy(n, 0.0),
        cnt(n, 0.0);
    std::vector<std::size_t> only(n, 0);
    for (std::size_t i = 0; i < p0.size(); ++i) {
      const std::uint32_t j = lineage[i];
      only[j] = i;
      w[j] += p0.w[i];
      wx[j] += p0.w[i] * p0.x[i];
      wy[j] += p0.w[i] * p0.y[i];
      area[j] += p0.area[i];
      sx[j] += p0.x[i];
      sy[j] += p0.y[i];
      cnt[j] += 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
      // an uncoalesced particle keeps its exact start position
      const bool single = cnt[j] == 1.0;
      const double bx = single ? p0.x[only[j]] : w[j] > 0.0 ? wx[j] / w[j] : sx[j] / cnt[j];
      const double by = single ? p0.y[only[j]] : w[j] > 0.0 ? wy[j] / w[j] : sy[j] / cnt[j];
      p.x[j] = a * bx + b * p.x[j];
      p.y[j] = a * by + b * p.y[j];
      p.w[j] = a * w[j] + b * p.w[j];
      p.area[j] = a * area[j] + b * p.area[j];
    }
  }
  for (std::size_t i = 0; i < out.s.c.size(); ++i) out.s.c[i] = a * base.s.c[i] + b * st.s.c[i];
  return out;
}

Simulation::Stage Simulation::finalize(Stage st) {
  ParticleSystem& ps = st.s.particles;
  pulled_back_ += pull_back(ps, cfg_.domain);
  const double area_floor = 1e-12 * ps.min_initial_area;
  for (int k = 0; k < cfg_.n_species; ++k) {
    ParticleSet& set = ps.species[k];
    for (std::size_t i = 0; i < set.size(); ++i) {
      if (set.w[i] < 0.0) {
        clipped_weight_ -= set.w[i];
        set.w[i] = 0.0;
      }
      set.area[i] = std::max(set.area[i], area_floor);
    }
    Step2Result merged = merger_step2(set, merger_grid_);
    merges_post_ += merged.merges;
    for (auto& idx : st.lineage[k]) idx = merged.new_index[idx];
    set = std::move(merged.set);
  }
  if (cfg_.tau == 0) {
    const auto rho = particles_to_grid(ps, grid_, d_min_);
    st.s.c = solve_elliptic(rho[0], rho[1], cfg_, grid_, st.s.c).c;
  }
  return st;
}

StepRecord Simulation::advance(double stop_time) {
  merges_post_ = 0;
  pulled_back_ = 0;
  clipped_weight_ = 0.0;

  Evaluation e0 = evaluate(state_);
  StepBounds bounds;
  bounds.weight = dt_weight_positivity(state_.particles, e0.beta, /*skip_empty=*/true);
  bounds.exchange = dt_weight_exchange(state_.particles, cfg_);
  bounds.area = dt_area_decay(state_.particles, e0.vel);
  bounds.displacement = dt_displacement(state_.particles.min_initial_area, state_.particles, e0.vel);
  bounds.parabolic = dt_parabolic(cfg_, grid_);
  const double remaining = stop_time - state_.t;
  const double dt = compute_dt(bounds, cfg_.safety_factor, remaining);
  const double dt_floor = cfg_.min_dt_fraction * cfg_.final_time;
  if (dt < dt_floor && dt < remaining) {
    std::ostringstream os;
    os << "time step collapsed to " << dt << " at t = " << state_.t << " (bounds: weight "
       << bounds.weight << ", exchange " << bounds.exchange << ", area " << bounds.area << ", displacement " << bounds.displacement
       << ", parabolic " << bounds.parabolic << ")";
    throw NumericalError(os.str());
  }

  SystemStep1Result pre = merger_step1(state_.particles, e0.vel, dt);
  // Without pre-step merges the first stage derivative is e0's.
  if (pre.merges == 0) reuse_ = std::move(e0.deriv);

  Stage start;
  start.s.t = state_.t;
  start.s.particles = std::move(pre.particles);
  start.s.c = state_.c;
  for (int k = 0; k < cfg_.n_species; ++k) {
    start.lineage[k].resize(start.s.particles.species[k].size());
    std::iota(start.lineage[k].begin(), start.lineage[k].end(), 0u);
  }

  Stage next = ssp_rk3_step(
      start, dt, [this](const Stage& s, double h) { return euler(s, h); },
      [this](double a, const Stage& x, double b, const Stage& y) { return combine(a, x, b, y); },
      [this](Stage s) { return finalize(std::move(s)); });

  state_.particles = std::move(next.s.particles);
  state_.c = std::move(next.s.c);
  state_.t = (dt >= remaining) ? stop_time : state_.t + dt;

  StepRecord rec = record(dt);
  rec.bounds = bounds;
  rec.merges_pre = pre.merges;
  rec.merges_post = merges_post_;
  rec.pulled_back = pulled_back_;
  rec.clipped_weight = clipped_weight_;
  return rec;
}

std::array<std::vector<double>, 2> Simulation::recovered_density() const {
  return particles_to_grid(state_.particles, grid_, d_min_);
}

StepRecord Simulation::record(double dt) const {
  StepRecord r;
  r.t = state_.t;
  r.dt = dt;
  const auto rho = recovered_density();
  r.min_weight = kUnbounded;
  r.min_rho = kUnbounded;
  for (int k = 0; k < cfg_.n_species; ++k) {
    const ParticleSet& s = state_.particles.species[k];
    r.count[k] = s.size();
    r.mass[k] = s.total_weight();
    double wmax = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      r.max_particle_density[k] = std::max(r.max_particle_density[k], s.w[i] / s.area[i]);
      r.min_weight = std::min(r.min_weight, s.w[i]);
      wmax = std::max(wmax, s.w[i]);
    }
    r.heaviest_fraction[k] = r.mass[k] > 0.0 ? wmax / r.mass[k] : 0.0;
    r.max_rho[k] = *std::max_element(rho[k].begin(), rho[k].end());
    r.min_rho = std::min(r.min_rho, *std::min_element(rho[k].begin(), rho[k].end()));
  }
  r.max_c = *std::max_element(state_.c.begin(), state_.c.end());
  return r;
}

Snapshot take_snapshot(const Simulation& sim) {
  Snapshot snap;
  snap.t = sim.time();
  snap.grid = sim.grid();
  snap.c = sim.state().c;
  snap.rho = sim.recovered_density();
  snap.particles = sim.state().particles;
  return snap;
}

RunResult run(const SimulationConfig& cfg, const StepObserver& observer) {
  Simulation sim(cfg);
  RunResult result;
  result.series.push_back(sim.record(0.0));

  std::vector<double> stops = cfg.snapshot_times;
  stops.push_back(cfg.final_time);
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());

  try {
    for (double stop : stops) {
      while (sim.time() < stop) {
        StepRecord rec = sim.advance(stop);
        result.series.push_back(rec);
        if (observer) observer(sim, rec);
      }
      if (std::find(cfg.snapshot_times.begin(), cfg.snapshot_times.end(), stop) !=
          cfg.snapshot_times.end())
        result.snapshots.push_back(take_snapshot(sim));
    }
  } catch (const NumericalError& err) {
    result.snapshots.push_back(take_snapshot(sim));
    throw RunAborted(err.what(), std::move(result));
  }
  return result;
}

}  // namespace fdp
