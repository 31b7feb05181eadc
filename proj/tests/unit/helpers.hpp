#pragma once

#include <random>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"

namespace fdp::test {

// Single-species parabolic config on [-1,1]^2 with unit coefficients.
inline SimulationConfig unit_config(double delta = 0.1) {
  SimulationConfig cfg;
  cfg.name = "unit";
  cfg.tau = 1;
  cfg.n_species = 1;
  cfg.species[0] = {1.0, 1.0, 1.0, Profile::constant(1.0)};
  cfg.nu_c = 1.0;
  cfg.zeta = 1.0;
  cfg.initial_c = Profile::constant(0.0);
  cfg.domain = {-1.0, 1.0, -1.0, 1.0};
  cfg.delta = delta;
  cfg.final_time = 1e-3;
  return cfg;
}

inline ParticleSet random_set(std::size_t n, std::uint64_t seed, const Box& box,
                              double area = 1e-3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(box.x_lo, box.x_hi), uy(box.y_lo, box.y_hi),
      uw(0.0, 1.0), ua(0.5, 1.5);
  ParticleSet s;
  for (std::size_t i = 0; i < n; ++i) s.push_back({ux(rng), uy(rng)}, uw(rng), area * ua(rng));
  return s;
}

// n x n particles of spacing h = 2/n on [-1,1]^2 with unit density, each
// position shifted by up to jitter*h.
inline ParticleSet jittered_lattice(int n, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-jitter, jitter);
  const double h = 2.0 / n;
  ParticleSet s;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      s.push_back({-1 + (a + 0.5 + u(rng)) * h, -1 + (b + 0.5 + u(rng)) * h}, h * h, h * h);
  return s;
}

}  // namespace fdp::test
