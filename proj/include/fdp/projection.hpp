#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"

namespace fdp {

/// Central-difference c_x, c_y and the five-point Laplacian at every cell.
struct DerivativeFields {
  std::vector<double> cx, cy, lap;
};

DerivativeFields grid_derivatives(std::span<const double> c, const Grid& g);

/// Global piecewise-linear reconstruction of a cell-centered field: inside
/// cell (l, m) the value is f_{l,m} + s_x (x - x_l) + s_y (y - y_m), with
/// central-difference slopes of f itself (mirrored ghosts at the boundary).
class LinearInterpolant {
 public:
  LinearInterpolant(std::vector<double> values, const Grid& g);

  /// Throws ConfigError for points outside the domain.
  double operator()(Vec2 p) const { return eval(grid_.locate(p), p); }
  /// No bounds check; points outside are extrapolated from the nearest cell.
  double eval_clamped(Vec2 p) const { return eval(grid_.locate_clamped(p), p); }

  const std::vector<double>& values() const { return values_; }
  const Grid& grid() const { return grid_; }

 private:
  double eval(CellIndex c, Vec2 p) const {
    const std::size_t i = grid_.index(c);
    const Vec2 ctr = grid_.center(c.l, c.m);
    return values_[i] + sx_[i] * (p.x - ctr.x) + sy_[i] * (p.y - ctr.y);
  }

  Grid grid_;
  std::vector<double> values_, sx_, sy_;
};

/// Single-point evaluation of the piecewise-linear interpolant of `field`.
double interpolate_field(std::span<const double> field, const Grid& g, Vec2 p);

/// u = chi_k c_x, v = chi_k c_y, r = chi_k lap c sampled at every particle of
/// every species via the piecewise-linear interpolants of the derivative
/// fields. Particles must lie in the closed domain.
std::array<VelocitySamples, 2> sample_particle_velocity(const ParticleSystem& ps,
                                                        const DerivativeFields& d,
                                                        const Grid& g,
                                                        const SimulationConfig& cfg);

/// Same, with the three interpolants already built.
std::array<VelocitySamples, 2> sample_particle_velocity(const ParticleSystem& ps,
                                                        const LinearInterpolant& cx,
                                                        const LinearInterpolant& cy,
                                                        const LinearInterpolant& lap,
                                                        const SimulationConfig& cfg);

/// Neighbor coefficients of the empty-cell fill: edge neighbors 1/(4 + 2 sqrt 2)
/// each, diagonal neighbors 1/(4 + 4 sqrt 2) each. Four of each sum to one.
inline const double kEdgeFill = 1.0 / (4.0 + 2.0 * std::sqrt(2.0));
inline const double kDiagonalFill = 1.0 / (4.0 + 4.0 * std::sqrt(2.0));

/// Default distance floor of the inverse-distance average: min(dx, dy) / 16.
inline double default_min_distance(const Grid& g) { return std::min(g.dx(), g.dy()) / 16.0; }

/// Grid density of one species recovered from its particles:
///  1. point densities w_i / |Omega_i|;
///  2. inverse-distance average over the particles inside each cell, with
///     distances to the cell center floored at d_min (0 for empty cells);
///  3. one fill pass: every particle-free cell takes the fixed-coefficient
///     average of its eight neighbors from step 2 (neighbors outside the
///     domain contribute zero, coefficients unchanged).
/// Particles must lie inside the domain. Parallel over cells.
std::vector<double> recover_density(const ParticleSet& set, const Grid& g, double d_min);

/// Both species; unused species come back empty.
std::array<std::vector<double>, 2> particles_to_grid(const ParticleSystem& ps, const Grid& g,
                                                     double d_min);

}  // namespace fdp
