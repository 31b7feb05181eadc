#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"
#include "fdp/timestep.hpp"

namespace fdp {

/// Three-stage third-order SSP Runge-Kutta step in Shu-Osher form:
///
///   s1 = F(E(s)),  s2 = F(3/4 s + 1/4 E(s1)),  s' = F(1/3 s + 2/3 E(s2))
///
/// where E(x) = x + dt f(x) is `euler(x, dt)`, `combine(a, x, b, y)` forms
/// a x + b y and F is `finalize`, applied after every stage.
template <class State, class Euler, class Combine, class Finalize>
State ssp_rk3_step(const State& s, double dt, Euler&& euler, Combine&& combine,
                   Finalize&& finalize) {
  State s1 = finalize(euler(s, dt));
  State s2 = finalize(combine(0.75, s, 0.25, euler(s1, dt)));
  return finalize(combine(1.0 / 3.0, s, 2.0 / 3.0, euler(s2, dt)));
}

struct SimulationState {
  double t = 0.0;
  ParticleSystem particles;
  std::vector<double> c;
};

/// One row of the run time series, plus diagnostics not written to disk.
struct StepRecord {
  double t = 0.0;
  double dt = 0.0;
  std::array<std::size_t, 2> count{};
  std::array<double, 2> mass{};
  std::array<double, 2> max_rho{};              // recovered grid density
  std::array<double, 2> max_particle_density{};  // max w / area
  double max_c = 0.0;

  std::array<double, 2> heaviest_fraction{};  // max w / total w
  double min_weight = 0.0;
  double min_rho = 0.0;
  int merges_pre = 0;
  int merges_post = 0;
  int pulled_back = 0;
  double clipped_weight = 0.0;
  StepBounds bounds{};
};

/// Coupled particle / finite-difference solver for one configuration.
class Simulation {
 public:
  /// Validates cfg, seeds the particles on the Delta/4 lattice and sets the
  /// initial chemoattractant (sampled for tau = 1, one elliptic solve for
  /// tau = 0).
  explicit Simulation(const SimulationConfig& cfg);

  const SimulationConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }
  const Grid& merger_grid() const { return merger_grid_; }
  const SimulationState& state() const { return state_; }
  double time() const { return state_.t; }

  /// One full step: time-step selection, pre-step merger, then SSP-RK3 with
  /// pull-back, post-stage merger and (tau = 0) an elliptic solve after every
  /// stage. The step never passes `stop_time` and lands on it exactly when
  /// capped. Throws NumericalError when no positive step is admissible.
  StepRecord advance(double stop_time);

  /// Diagnostics of the current state (dt recorded as given).
  StepRecord record(double dt) const;

  std::array<std::vector<double>, 2> recovered_density() const;

 private:
  struct Stage {
    SimulationState s;
    // lineage[k][i]: index in this stage of step-start particle i of species k
    std::array<std::vector<std::uint32_t>, 2> lineage;
  };
  struct Evaluation;

  Evaluation evaluate(const SimulationState& s) const;
  Stage euler(const Stage& st, double dt);
  Stage combine(double a, const Stage& base, double b, const Stage& st) const;
  Stage finalize(Stage st);

  SimulationConfig cfg_;
  Grid grid_;
  Grid merger_grid_;
  double d_min_ = 0.0;
  SimulationState state_;
  // per-step accumulators for the record
  int merges_post_ = 0;
  int pulled_back_ = 0;
  double clipped_weight_ = 0.0;
  std::optional<StateDerivative> reuse_;
};

struct Snapshot {
  double t = 0.0;
  Grid grid;
  std::vector<double> c;
  std::array<std::vector<double>, 2> rho;
  ParticleSystem particles;
};

struct RunResult {
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> series;  // first row is the initial state (dt = 0)
};

Snapshot take_snapshot(const Simulation& sim);

/// Called after every completed step.
using StepObserver = std::function<void(const Simulation&, const StepRecord&)>;

/// Thrown by run() when a step fails; carries everything produced so far.
class RunAborted : public NumericalError {
 public:
  RunAborted(const std::string& what, RunResult partial)
      : NumericalError(what), partial_(std::move(partial)) {}
  const RunResult& partial() const { return partial_; }

 private:
  RunResult partial_;
};

/// Integrates cfg to its final time, taking snapshots at the requested times
/// (hit exactly) and recording every step.
RunResult run(const SimulationConfig& cfg, const StepObserver& observer = {});

}  // namespace fdp
