#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fdp/domain.hpp"

namespace fdp {

/// One weighted particle: a point mass with its subdomain area.
struct Particle {
  Vec2 pos{};
  double weight = 0.0;
  double area = 0.0;
  int species = 0;  // 0 or 1

  friend bool operator==(const Particle&, const Particle&) = default;
};

/// Structure-of-arrays storage for the particles of a single species.
struct ParticleSet {
  std::vector<double> x, y, w, area;

  std::size_t size() const { return x.size(); }
  bool empty() const { return x.empty(); }
  void reserve(std::size_t n) {
    x.reserve(n);
    y.reserve(n);
    w.reserve(n);
    area.reserve(n);
  }
  void push_back(Vec2 p, double weight, double a) {
    x.push_back(p.x);
    y.push_back(p.y);
    w.push_back(weight);
    area.push_back(a);
  }
  Vec2 pos(std::size_t i) const { return {x[i], y[i]}; }
  Particle get(std::size_t i, int species) const { return {pos(i), w[i], area[i], species}; }

  double total_weight() const;
  double total_area() const;
  /// Weighted centroid; arithmetic mean of positions if the total weight is 0.
  Vec2 centroid() const;

  friend bool operator==(const ParticleSet&, const ParticleSet&) = default;
};

/// Particles of all species. Species k (0-based) lives in `species[k]`.
struct ParticleSystem {
  int n_species = 1;
  std::array<ParticleSet, 2> species{};
  /// min_i |Omega_i(0)| recorded at initialization.
  double min_initial_area = 0.0;

  std::size_t total_count() const {
    std::size_t n = 0;
    for (int k = 0; k < n_species; ++k) n += species[k].size();
    return n;
  }

  friend bool operator==(const ParticleSystem&, const ParticleSystem&) = default;
};

/// Per-particle chemotactic velocity (u, v) = chi grad c and divergence
/// r = chi lap c.
struct VelocitySamples {
  std::vector<double> u, v, r;
  std::size_t size() const { return u.size(); }
  void resize(std::size_t n) {
    u.assign(n, 0.0);
    v.assign(n, 0.0);
    r.assign(n, 0.0);
  }
};

struct ParticleRates {
  std::vector<double> dx, dy, dw, darea;
  std::size_t size() const { return dx.size(); }
};

/// Time derivative of the particle quantities and, for tau = 1, of the grid c.
struct StateDerivative {
  std::array<ParticleRates, 2> species{};
  std::vector<double> dc;  // empty when tau = 0
};

}  // namespace fdp
