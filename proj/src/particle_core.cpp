#include "fdp/particle_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fdp {

double sigma_pair(double area_i, double area_j) {
  if (!(area_i > 0.0) || !(area_j > 0.0)) throw ConfigError("particle areas must be positive");
  return std::sqrt(0.5 * (area_i + area_j));
}

ParticleSystem init_particles(const SimulationConfig& cfg) {
  const Grid lattice = Grid::with_spacing(cfg.domain, cfg.particle_mesh_size());
  const double cell_area = lattice.dx() * lattice.dy();

  ParticleSystem ps;
  ps.n_species = cfg.n_species;
  ps.min_initial_area = cell_area;
  for (int k = 0; k < cfg.n_species; ++k) {
    ParticleSet& set = ps.species[k];
    set.reserve(lattice.size());
    const Profile& rho0 = cfg.species[k].initial_density;
    for (int m = 0; m < lattice.ny(); ++m)
      for (int l = 0; l < lattice.nx(); ++l) {
        const Vec2 c = lattice.center(l, m);
        set.push_back(c, rho0(c) * cell_area, cell_area);
      }
  }
  return ps;
}

namespace {

constexpr double kFourOverPi = 4.0 / kPi;

// sigma^-2 * eta_sigma(d) * (w_j A_i - w_i A_j) with sigma^2 = (A_i + A_j)/2.
// Evaluated identically for (i, j) and (j, i) up to the sign of the bracket.
inline double pair_exchange(double d2, double s2, double wi, double ai, double wj, double aj) {
  return kFourOverPi * std::exp(-d2 / s2) / (s2 * s2) * (wj * ai - wi * aj);
}

// exchange coefficient sigma^-2 * eta_sigma(d) * A_j: the rate at which
// particle i loses weight per unit of its own density
inline double pair_loss(double d2, double s2, double aj) {
  return kFourOverPi * std::exp(-d2 / s2) / (s2 * s2) * aj;
}

// nu * sum_j term(d2, s2, i, j) over all j != i.
template <class Term>
std::vector<double> all_pairs(const ParticleSet& s, double nu, Term term) {
  const auto n = static_cast<std::ptrdiff_t>(s.size());
  std::vector<double> beta(s.size(), 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double dx = s.x[i] - s.x[j];
      const double dy = s.y[i] - s.y[j];
      const double s2 = 0.5 * (s.area[i] + s.area[j]);
      acc += term(dx * dx + dy * dy, s2, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    beta[i] = nu * acc;
  }
  return beta;
}

// Particles with area above the reference area are "large" and checked
// against everyone directly; the rest are hashed on cells wide enough that
// every small-small pair within the cutoff sits in adjacent cells.
constexpr std::size_t kMaxLargeParticles = 32;
constexpr int kMaxCellsPerAxis = 512;

template <class Term>
std::vector<double> hashed_pairs(const ParticleSet& s, double nu, Term term) {
  const std::size_t n = s.size();
  std::vector<double> beta(n, 0.0);
  if (n < 2) return beta;
  if (n <= 2 * kMaxLargeParticles) {
    // Tiny systems: the hash buys nothing.
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        const double dx = s.x[i] - s.x[j];
        const double dy = s.y[i] - s.y[j];
        const double d2 = dx * dx + dy * dy;
        const double s2 = 0.5 * (s.area[i] + s.area[j]);
        if (d2 > kCutoffSigmas * kCutoffSigmas * s2) continue;
        acc += term(d2, s2, i, j);
      }
      beta[i] = nu * acc;
    }
    return beta;
  }

  std::vector<double> sorted_area = s.area;
  const auto kth = sorted_area.begin() + static_cast<std::ptrdiff_t>(kMaxLargeParticles);
  std::nth_element(sorted_area.begin(), kth, sorted_area.end(), std::greater<>());
  const double area_ref = *kth;

  std::vector<std::size_t> large;
  for (std::size_t i = 0; i < n; ++i)
    if (s.area[i] > area_ref) large.push_back(i);

  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (std::size_t i = 0; i < n; ++i) {
    x_lo = std::min(x_lo, s.x[i]);
    x_hi = std::max(x_hi, s.x[i]);
    y_lo = std::min(y_lo, s.y[i]);
    y_hi = std::max(y_hi, s.y[i]);
  }
  const double reach = kCutoffSigmas * std::sqrt(area_ref);
  const int ncx = std::clamp(static_cast<int>((x_hi - x_lo) / reach), 1, kMaxCellsPerAxis);
  const int ncy = std::clamp(static_cast<int>((y_hi - y_lo) / reach), 1, kMaxCellsPerAxis);
  // Cell widths are >= reach since ncx <= extent / reach.
  const double cw_x = std::max((x_hi - x_lo) / ncx, reach);
  const double cw_y = std::max((y_hi - y_lo) / ncy, reach);
  auto cell_of = [&](std::size_t i) {
    const int cx = std::min(static_cast<int>((s.x[i] - x_lo) / cw_x), ncx - 1);
    const int cy = std::min(static_cast<int>((s.y[i] - y_lo) / cw_y), ncy - 1);
    return std::pair{cx, cy};
  };

  // Counting sort of the small particles by cell, index order within a cell.
  const std::size_t ncell = static_cast<std::size_t>(ncx) * ncy;
  std::vector<std::size_t> start(ncell + 1, 0);
  std::vector<int> cell_id(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (s.area[i] > area_ref) continue;
    const auto [cx, cy] = cell_of(i);
    cell_id[i] = cy * ncx + cx;
    ++start[cell_id[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start[c + 1] += start[c];
  std::vector<std::size_t> items(start[ncell]);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i)
      if (cell_id[i] >= 0) items[fill[cell_id[i]]++] = i;
  }

  const double cut2 = kCutoffSigmas * kCutoffSigmas;
  const auto nn = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < nn; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double xi = s.x[i], yi = s.y[i], ai = s.area[i];
    double acc = 0.0;
    auto visit = [&](std::size_t j) {
      const double dx = xi - s.x[j];
      const double dy = yi - s.y[j];
      const double d2 = dx * dx + dy * dy;
      const double s2 = 0.5 * (ai + s.area[j]);
      if (d2 <= cut2 * s2) acc += term(d2, s2, i, j);
    };

    const double radius = (ai > area_ref) ? kCutoffSigmas * std::sqrt(0.5 * (ai + area_ref)) : reach;
    const int rx = std::max(1, static_cast<int>(std::ceil(radius / cw_x)));
    const int ry = std::max(1, static_cast<int>(std::ceil(radius / cw_y)));
    const auto [cx, cy] = cell_of(i);
    for (int qy = std::max(0, cy - ry); qy <= std::min(ncy - 1, cy + ry); ++qy)
      for (int qx = std::max(0, cx - rx); qx <= std::min(ncx - 1, cx + rx); ++qx) {
        const std::size_t c = static_cast<std::size_t>(qy) * ncx + qx;
        for (std::size_t q = start[c]; q < start[c + 1]; ++q)
          if (items[q] != i) visit(items[q]);
      }
    for (std::size_t j : large)
      if (j != i) visit(j);
    beta[i] = nu * acc;
  }
  return beta;
}

}  // namespace

std::vector<double> diffusion_weight_rhs(const ParticleSet& set, double nu, bool cutoff) {
  auto term = [&set](double d2, double s2, std::size_t i, std::size_t j) {
    return pair_exchange(d2, s2, set.w[i], set.area[i], set.w[j], set.area[j]);
  };
  return cutoff ? hashed_pairs(set, nu, term) : all_pairs(set, nu, term);
}

std::vector<double> diffusion_loss_rate(const ParticleSet& set, double nu, bool cutoff) {
  auto term = [&set](double d2, double s2, std::size_t, std::size_t j) {
    return pair_loss(d2, s2, set.area[j]);
  };
  return cutoff ? hashed_pairs(set, nu, term) : all_pairs(set, nu, term);
}

std::array<std::vector<double>, 2> diffusion_weight_rhs(const ParticleSystem& ps,
                                                        const SimulationConfig& cfg) {
  std::array<std::vector<double>, 2> beta;
  for (int k = 0; k < ps.n_species; ++k)
    beta[k] = diffusion_weight_rhs(ps.species[k], cfg.species[k].nu, cfg.kernel_cutoff);
  return beta;
}

StateDerivative particle_rhs(const ParticleSystem& ps,
                             const std::array<VelocitySamples, 2>& vel,
                             const std::array<std::vector<double>, 2>& beta) {
  StateDerivative d;
  for (int k = 0; k < ps.n_species; ++k) {
    const ParticleSet& s = ps.species[k];
    const VelocitySamples& v = vel[k];
    if (v.u.size() != s.size() || v.v.size() != s.size() || v.r.size() != s.size() ||
        beta[k].size() != s.size())
      throw ConfigError("velocity samples or weight rates are not aligned with the particles");
    ParticleRates& out = d.species[k];
    out.dx = v.u;
    out.dy = v.v;
    out.dw = beta[k];
    out.darea.resize(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) out.darea[i] = v.r[i] * s.area[i];
  }
  return d;
}

StateDerivative particle_rhs(const ParticleSystem& ps,
                             const std::array<VelocitySamples, 2>& vel,
                             const SimulationConfig& cfg) {
  return particle_rhs(ps, vel, diffusion_weight_rhs(ps, cfg));
}

}  // namespace fdp
