#include "fdp/timestep.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fdp/particle_core.hpp"

namespace fdp {

double dt_weight_positivity(std::span<const double> w, std::span<const double> beta,
                            bool skip_empty) {
  double bound = kUnbounded;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!(beta[i] < 0.0) || (skip_empty && w[i] <= 0.0)) continue;
    bound = std::min(bound, -w[i] / beta[i]);
  }
  return bound;
}

double dt_weight_positivity(const ParticleSystem& ps,
                            const std::array<std::vector<double>, 2>& beta, bool skip_empty) {
  double bound = kUnbounded;
  for (int k = 0; k < ps.n_species; ++k)
    bound = std::min(bound, dt_weight_positivity(ps.species[k].w, beta[k], skip_empty));
  return bound;
}

double dt_area_decay(std::span<const double> r) {
  double bound = kUnbounded;
  for (double ri : r)
    if (ri < 0.0) bound = std::min(bound, -1.0 / (2.0 * ri));
  return bound;
}

double dt_area_decay(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel) {
  double bound = kUnbounded;
  for (int k = 0; k < ps.n_species; ++k) bound = std::min(bound, dt_area_decay(vel[k].r));
  return bound;
}

double max_component_speed(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel) {
  double vmax = 0.0;
  for (int k = 0; k < ps.n_species; ++k)
    for (std::size_t i = 0; i < vel[k].size(); ++i)
      vmax = std::max({vmax, std::abs(vel[k].u[i]), std::abs(vel[k].v[i])});
  return vmax;
}

double dt_displacement(double min_initial_area, double max_component_speed) {
  if (!(max_component_speed > 0.0)) return kUnbounded;
  return std::sqrt(min_initial_area) / max_component_speed;
}

double dt_displacement(double min_initial_area, const ParticleSystem& ps,
                       const std::array<VelocitySamples, 2>& vel) {
  return dt_displacement(min_initial_area, max_component_speed(ps, vel));
}

double dt_parabolic(const SimulationConfig& cfg, const Grid& g) {
  if (cfg.tau == 0) return kUnbounded;
  const double h = std::min(g.dx(), g.dy());
  return h * h / (4.0 * cfg.nu_c);
}

double dt_weight_exchange(std::span<const double> loss_rate) {
  double bound = kUnbounded;
  for (double d : loss_rate)
    if (d > 0.0) bound = std::min(bound, 1.0 / d);
  return bound;
}

double dt_weight_exchange(const ParticleSystem& ps, const SimulationConfig& cfg) {
  double bound = kUnbounded;
  for (int k = 0; k < ps.n_species; ++k)
    bound = std::min(bound, dt_weight_exchange(diffusion_loss_rate(ps.species[k], cfg.species[k].nu,
                                                                   cfg.kernel_cutoff)));
  return bound;
}

double StepBounds::min() const {
  return std::min({weight, exchange, area, displacement, parabolic});
}

double compute_dt(const StepBounds& bounds, double safety, double time_to_stop) {
  const double dt = std::min(safety * bounds.min(), time_to_stop);
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    std::ostringstream os;
    os << "admissible time step is " << dt << " (bounds: weight " << bounds.weight << ", exchange "
       << bounds.exchange << ", area "
       << bounds.area << ", displacement " << bounds.displacement << ", parabolic "
       << bounds.parabolic << "); remove degenerate zero-weight particles";
    throw NumericalError(os.str());
  }
  return dt;
}

}  // namespace fdp
