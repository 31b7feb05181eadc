#include "fdp/projection.hpp"

#include <algorithm>

#include "fdp/chemo_fd.hpp"

namespace fdp {

DerivativeFields grid_derivatives(std::span<const double> c, const Grid& g) {
  DerivativeFields d;
  d.cx.resize(g.size());
  d.cy.resize(g.size());
  d.lap = laplacian(c, g);
  const double i2x = 0.5 / g.dx();
  const double i2y = 0.5 / g.dy();
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < ny; ++m)
    for (int l = 0; l < nx; ++l) {
      d.cx[g.index(l, m)] = (ghosted(c, g, l + 1, m) - ghosted(c, g, l - 1, m)) * i2x;
      d.cy[g.index(l, m)] = (ghosted(c, g, l, m + 1) - ghosted(c, g, l, m - 1)) * i2y;
    }
  return d;
}

LinearInterpolant::LinearInterpolant(std::vector<double> values, const Grid& g)
    : grid_(g), values_(std::move(values)) {
  if (values_.size() != g.size()) throw ConfigError("field size does not match the grid");
  DerivativeFields slopes = grid_derivatives(values_, g);
  sx_ = std::move(slopes.cx);
  sy_ = std::move(slopes.cy);
}

double interpolate_field(std::span<const double> field, const Grid& g, Vec2 p) {
  const CellIndex c = g.locate(p);
  const Vec2 ctr = g.center(c.l, c.m);
  const double sx = (ghosted(field, g, c.l + 1, c.m) - ghosted(field, g, c.l - 1, c.m)) / (2.0 * g.dx());
  const double sy = (ghosted(field, g, c.l, c.m + 1) - ghosted(field, g, c.l, c.m - 1)) / (2.0 * g.dy());
  return field[g.index(c)] + sx * (p.x - ctr.x) + sy * (p.y - ctr.y);
}

std::array<VelocitySamples, 2> sample_particle_velocity(const ParticleSystem& ps,
                                                        const LinearInterpolant& cx,
                                                        const LinearInterpolant& cy,
                                                        const LinearInterpolant& lap,
                                                        const SimulationConfig& cfg) {
  std::array<VelocitySamples, 2> out;
  const Box& box = cx.grid().box();
  for (int k = 0; k < ps.n_species; ++k) {
    const ParticleSet& s = ps.species[k];
    const double chi = cfg.species[k].chi;
    VelocitySamples& v = out[k];
    v.resize(s.size());
    const auto n = static_cast<std::ptrdiff_t>(s.size());
    bool outside = false;
#pragma omp parallel for schedule(static) reduction(|| : outside)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const Vec2 p = s.pos(i);
      if (!box.contains(p)) outside = true;
      v.u[i] = chi * cx.eval_clamped(p);
      v.v[i] = chi * cy.eval_clamped(p);
      v.r[i] = chi * lap.eval_clamped(p);
    }
    if (outside) throw ConfigError("particle outside the domain while sampling velocities");
  }
  return out;
}

std::array<VelocitySamples, 2> sample_particle_velocity(const ParticleSystem& ps,
                                                        const DerivativeFields& d,
                                                        const Grid& g,
                                                        const SimulationConfig& cfg) {
  return sample_particle_velocity(ps, LinearInterpolant(d.cx, g), LinearInterpolant(d.cy, g),
                                  LinearInterpolant(d.lap, g), cfg);
}

std::vector<double> recover_density(const ParticleSet& s, const Grid& g, double d_min) {
  const std::size_t ncell = g.size();
  const std::size_t n = s.size();

  // Bucket particles by cell (counting sort keeps index order in a cell).
  std::vector<std::size_t> start(ncell + 1, 0);
  std::vector<std::size_t> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    cell[i] = g.index(g.locate_clamped(s.pos(i)));
    ++start[cell[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start[c + 1] += start[c];
  std::vector<std::size_t> items(n);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) items[fill[cell[i]]++] = i;
  }

  std::vector<double> star(ncell, 0.0);
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < ny; ++m)
    for (int l = 0; l < nx; ++l) {
      const std::size_t c = g.index(l, m);
      if (start[c] == start[c + 1]) continue;
      const Vec2 ctr = g.center(l, m);
      double num = 0.0, den = 0.0;
      for (std::size_t q = start[c]; q < start[c + 1]; ++q) {
        const std::size_t i = items[q];
        const double d = std::max(d_min, norm(s.pos(i) - ctr));
        num += (s.w[i] / s.area[i]) / d;
        den += 1.0 / d;
      }
      star[c] = num / den;
    }

  std::vector<double> rho(star);
  auto at = [&](int l, int m) {
    return (l < 0 || l >= nx || m < 0 || m >= ny) ? 0.0 : star[g.index(l, m)];
  };
#pragma omp parallel for schedule(static)
  for (int m = 0; m < ny; ++m)
    for (int l = 0; l < nx; ++l) {
      const std::size_t c = g.index(l, m);
      if (start[c] != start[c + 1]) continue;
      const double edge = at(l + 1, m) + at(l - 1, m) + at(l, m + 1) + at(l, m - 1);
      const double diag = at(l + 1, m + 1) + at(l + 1, m - 1) + at(l - 1, m + 1) + at(l - 1, m - 1);
      rho[c] = kEdgeFill * edge + kDiagonalFill * diag;
    }
  return rho;
}

std::array<std::vector<double>, 2> particles_to_grid(const ParticleSystem& ps, const Grid& g,
                                                     double d_min) {
  std::array<std::vector<double>, 2> rho;
  for (int k = 0; k < ps.n_species; ++k) rho[k] = recover_density(ps.species[k], g, d_min);
  return rho;
}

}  // namespace fdp
