#include "fdp/domain.hpp"

#include <algorithm>
#include <sstream>

namespace fdp {

Vec2 Box::nearest_point(Vec2 p) const {
  return {std::clamp(p.x, x_lo, x_hi), std::clamp(p.y, y_lo, y_hi)};
}

double Box::distance_to_boundary(Vec2 p) const {
  if (!contains(p)) return 0.0;
  return std::min({p.x - x_lo, x_hi - p.x, p.y - y_lo, y_hi - p.y});
}

int cells_across(double extent, double h) {
  if (!(extent > 0.0) || !(h > 0.0)) return -1;
  const double ratio = extent / h;
  const double n = std::round(ratio);
  if (n < 1.0 || std::abs(ratio - n) > 1e-9 * std::max(1.0, ratio)) return -1;
  return static_cast<int>(n);
}

ValidationReport check(const SimulationConfig& cfg) {
  ValidationReport report;
  auto require_positive = [&](double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) report.errors.push_back(name + " must be positive");
  };

  if (cfg.tau != 0 && cfg.tau != 1) report.errors.push_back("tau must be 0 or 1");
  if (cfg.n_species != 1 && cfg.n_species != 2) report.errors.push_back("n_species must be 1 or 2");
  const int ns = (cfg.n_species == 2) ? 2 : 1;
  for (int k = 0; k < ns; ++k) {
    const std::string prefix = "species" + std::to_string(k + 1) + ".";
    require_positive(cfg.species[k].chi, prefix + "chi");
    require_positive(cfg.species[k].nu, prefix + "nu");
    require_positive(cfg.species[k].gamma, prefix + "gamma");
    const Profile& rho0 = cfg.species[k].initial_density;
    if (rho0.amplitude < 0.0) report.errors.push_back(prefix + "initial density must be nonnegative");
    if (rho0.kind == Profile::Kind::gaussian && rho0.rate < 0.0)
      report.errors.push_back(prefix + "initial gaussian rate must be nonnegative");
  }
  require_positive(cfg.nu_c, "nu_c");
  require_positive(cfg.zeta, "zeta");
  require_positive(cfg.delta, "delta");

  if (!(cfg.min_dt_fraction >= 0.0 && cfg.min_dt_fraction < 1.0))
    report.errors.push_back("min_dt_fraction must lie in [0, 1)");
  if (!(cfg.safety_factor > 0.0 && cfg.safety_factor <= 1.0))
    report.errors.push_back("safety_factor must lie in (0, 1]");
  if (!(cfg.final_time >= 0.0) || !std::isfinite(cfg.final_time))
    report.errors.push_back("final_time must be nonnegative");

  const Box& b = cfg.domain;
  if (!(b.x_hi > b.x_lo) || !(b.y_hi > b.y_lo)) {
    report.errors.push_back("domain box must be non-empty");
  } else if (cfg.delta > 0.0) {
    if (cells_across(b.width(), cfg.delta) < 0)
      report.errors.push_back("delta must divide the domain width");
    if (cells_across(b.height(), cfg.delta) < 0)
      report.errors.push_back("delta must divide the domain height");
  }

  double prev = -1.0;
  for (double ts : cfg.snapshot_times) {
    if (!(ts >= 0.0) || ts > cfg.final_time) {
      report.errors.push_back("snapshot times must lie in [0, final_time]");
      break;
    }
    if (ts <= prev) {
      report.errors.push_back("snapshot times must be strictly increasing");
      break;
    }
    prev = ts;
  }

  if (ns == 2 && report.errors.empty() && !(cfg.species[1].chi > cfg.species[0].chi))
    report.warnings.push_back("two-species systems are expected to have chi2 > chi1");
  return report;
}

SimulationConfig validate(const SimulationConfig& cfg) {
  const ValidationReport report = check(cfg);
  if (!report.ok()) {
    std::ostringstream os;
    for (std::size_t i = 0; i < report.errors.size(); ++i) {
      if (i) os << '\n';
      os << report.errors[i];
    }
    throw ConfigError(os.str());
  }
  return cfg;
}

Grid::Grid(const Box& box, int nx, int ny)
    : box_(box), nx_(nx), ny_(ny), dx_(box.width() / nx), dy_(box.height() / ny) {
  if (nx <= 0 || ny <= 0) throw ConfigError("grid dimensions must be positive");
  if (!(box.width() > 0.0) || !(box.height() > 0.0)) throw ConfigError("grid box must be non-empty");
}

Grid Grid::with_spacing(const Box& box, double h) {
  const int nx = cells_across(box.width(), h);
  const int ny = cells_across(box.height(), h);
  if (nx < 0 || ny < 0) throw ConfigError("mesh size does not divide the domain extents");
  return Grid(box, nx, ny);
}

CellIndex Grid::locate_clamped(Vec2 p) const {
  const int l = static_cast<int>(std::floor((p.x - box_.x_lo) / dx_));
  const int m = static_cast<int>(std::floor((p.y - box_.y_lo) / dy_));
  return {std::clamp(l, 0, nx_ - 1), std::clamp(m, 0, ny_ - 1)};
}

CellIndex Grid::locate(Vec2 p) const {
  if (!box_.contains(p)) {
    std::ostringstream os;
    os << "point (" << p.x << ", " << p.y << ") lies outside the domain";
    throw ConfigError(os.str());
  }
  return locate_clamped(p);
}

std::vector<double> Grid::sample(const Profile& f) const {
  std::vector<double> out(size());
  for (int m = 0; m < ny_; ++m)
    for (int l = 0; l < nx_; ++l) out[index(l, m)] = f(center(l, m));
  return out;
}

}  // namespace fdp
