#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"

namespace fdp {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

/// min over beta_i < 0 of -w_i / beta_i. A zero-weight particle with
/// beta_i < 0 yields 0 unless `skip_empty` is set, in which case such
/// particles are left out (the integrator clips them back to w = 0).
double dt_weight_positivity(std::span<const double> w, std::span<const double> beta,
                            bool skip_empty = false);
double dt_weight_positivity(const ParticleSystem& ps,
                            const std::array<std::vector<double>, 2>& beta,
                            bool skip_empty = false);

/// min over particles of 1 / D_i (see diffusion_loss_rate). A forward Euler
/// weight update from any state with this geometry then stays nonnegative,
/// which the -w/beta bound only guarantees for the state it was computed on.
double dt_weight_exchange(std::span<const double> loss_rate);
double dt_weight_exchange(const ParticleSystem& ps, const SimulationConfig& cfg);

/// min over r_i < 0 of -1 / (2 r_i): areas shrink by at most half per step.
double dt_area_decay(std::span<const double> r);
double dt_area_decay(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel);

/// sqrt(min initial area) / max_i max(|u_i|, |v_i|).
double dt_displacement(double min_initial_area, const ParticleSystem& ps,
                       const std::array<VelocitySamples, 2>& vel);
double dt_displacement(double min_initial_area, double max_component_speed);

/// Explicit diffusive bound min(dx, dy)^2 / (4 nu) for tau = 1; unbounded for
/// tau = 0.
double dt_parabolic(const SimulationConfig& cfg, const Grid& g);

/// Largest |u| or |v| over all particles.
double max_component_speed(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel);

struct StepBounds {
  double weight = kUnbounded;
  double area = kUnbounded;
  double displacement = kUnbounded;
  double parabolic = kUnbounded;
  double exchange = kUnbounded;

  double min() const;
};

/// safety * min(bounds), capped at `time_to_stop` (distance to the next
/// snapshot or the final time). Throws NumericalError if the result is not
/// strictly positive and finite.
double compute_dt(const StepBounds& bounds, double safety, double time_to_stop = kUnbounded);

}  // namespace fdp
