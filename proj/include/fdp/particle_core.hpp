#pragma once

#include <array>
#include <span>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"

namespace fdp {

inline constexpr double kPi = 3.14159265358979323846;

/// Pairs farther apart than this many sigma_ij are dropped from the diffusion
/// sum when the cutoff is enabled (relative contribution below e^-16).
inline constexpr double kCutoffSigmas = 4.0;

/// eta(z) = (4/pi) exp(-|z|^2)
inline double kernel_eta(Vec2 z) { return 4.0 / kPi * std::exp(-norm2(z)); }

/// eta_sigma(z) = eta(z / sigma) / sigma^2
inline double kernel_eta_sigma(Vec2 z, double sigma) {
  return kernel_eta((1.0 / sigma) * z) / (sigma * sigma);
}

/// Pair width sigma_ij = sqrt((|Omega_i| + |Omega_j|) / 2). Throws
/// ConfigError on a non-positive area.
double sigma_pair(double area_i, double area_j);

/// One particle per cell of the Delta/4 mesh, placed at the cell center with
/// midpoint-rule weight rho_k(center, 0) * (Delta/4)^2.
ParticleSystem init_particles(const SimulationConfig& cfg);

/// Weight exchange rate of the particle diffusion approximation for one
/// species:
///
///   beta_i = nu * sum_j sigma_ij^-2 eta_{sigma_ij}(x_i - x_j) (w_j A_i - w_i A_j).
///
/// With `cutoff`, pairs with |x_i - x_j| > kCutoffSigmas * sigma_ij are skipped
/// and candidates come from a cell hash (near O(N)); otherwise all pairs are
/// summed. Every included pair enters beta_i and beta_j with exactly opposite
/// sign, so the rates sum to zero up to rounding either way. OpenMP-parallel
/// over particles, deterministic for any thread count.
std::vector<double> diffusion_weight_rhs(const ParticleSet& set, double nu, bool cutoff = true);

/// The coefficient multiplying -w_i in beta_i,
///   D_i = nu * sum_j sigma_ij^-2 eta_{sigma_ij}(x_i - x_j) A_j,
/// over the same pairs as diffusion_weight_rhs.
std::vector<double> diffusion_loss_rate(const ParticleSet& set, double nu, bool cutoff = true);

/// Rates for every species of a system (index k uses species[k].nu).
std::array<std::vector<double>, 2> diffusion_weight_rhs(const ParticleSystem& ps,
                                                        const SimulationConfig& cfg);

/// Right-hand side of the particle ODE system: positions move with (u, v),
/// weights change by beta, areas by r * area. Throws ConfigError if the
/// velocity samples or rates are not index-aligned with the particles.
StateDerivative particle_rhs(const ParticleSystem& ps,
                             const std::array<VelocitySamples, 2>& vel,
                             const std::array<std::vector<double>, 2>& beta);

/// Convenience overload computing beta from cfg.
StateDerivative particle_rhs(const ParticleSystem& ps,
                             const std::array<VelocitySamples, 2>& vel,
                             const SimulationConfig& cfg);

}  // namespace fdp
