#pragma once

// Serial, straightforward implementations of the hot kernels. They are kept
// as test oracles and as the baseline in the kernel benchmarks; the solver
// never calls them.

#include <span>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/merger.hpp"
#include "fdp/particles.hpp"

namespace fdp::reference {

/// O(N^2) weight exchange rates, written directly from the kernel functions.
/// With `cutoff`, pairs beyond kCutoffSigmas * sigma_ij are skipped.
std::vector<double> diffusion_weight_rhs(const ParticleSet& set, double nu, bool cutoff);

/// Pre-step merger by exhaustive pair scans: every round merges the globally
/// earliest qualifying pair, until none is left.
Step1Result merger_step1(const ParticleSet& set, const VelocitySamples& vel, double dt, double mu);

/// Particle-to-grid recovery by direct per-cell scans over all particles.
std::vector<double> recover_density(const ParticleSet& set, const Grid& g, double d_min);

/// Five-point Laplacian with explicit ghost handling.
std::vector<double> laplacian(std::span<const double> f, const Grid& g);

}  // namespace fdp::reference
