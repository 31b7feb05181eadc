#include "fdp/chemo_fd.hpp"

#include <cmath>
#include <sstream>

namespace fdp {

std::vector<double> apply_neumann_ghosts(std::span<const double> f, const Grid& g) {
  const int ex = g.nx() + 2;
  const int ey = g.ny() + 2;
  std::vector<double> out(static_cast<std::size_t>(ex) * ey);
  for (int m = -1; m <= g.ny(); ++m)
    for (int l = -1; l <= g.nx(); ++l)
      out[static_cast<std::size_t>(m + 1) * ex + (l + 1)] = ghosted(f, g, l, m);
  return out;
}

namespace {

// Operator y = zeta x - nu lap x (SPD with mirrored ghosts).
void apply_operator(std::span<const double> x, std::span<double> y, double nu, double zeta,
                    const Grid& g) {
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < ny; ++m)
    for (int l = 0; l < nx; ++l) {
      const double c = x[g.index(l, m)];
      const double lap = (ghosted(x, g, l + 1, m) - 2.0 * c + ghosted(x, g, l - 1, m)) * ix2 +
                         (ghosted(x, g, l, m + 1) - 2.0 * c + ghosted(x, g, l, m - 1)) * iy2;
      y[g.index(l, m)] = zeta * c - nu * lap;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::vector<double> laplacian(std::span<const double> f, const Grid& g) {
  std::vector<double> out(g.size());
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  const int nx = g.nx(), ny = g.ny();
#pragma omp parallel for schedule(static)
  for (int m = 0; m < ny; ++m)
    for (int l = 0; l < nx; ++l) {
      const double c = f[g.index(l, m)];
      out[g.index(l, m)] = (ghosted(f, g, l + 1, m) - 2.0 * c + ghosted(f, g, l - 1, m)) * ix2 +
                           (ghosted(f, g, l, m + 1) - 2.0 * c + ghosted(f, g, l, m - 1)) * iy2;
    }
  return out;
}

std::vector<double> chemo_rhs(std::span<const double> c, std::span<const double> rho1,
                              std::span<const double> rho2, const SimulationConfig& cfg,
                              const Grid& g) {
  std::vector<double> out = laplacian(c, g);
  const double g1 = cfg.species[0].gamma;
  const double g2 = cfg.species[1].gamma;
  const bool two = !rho2.empty();
  for (std::size_t i = 0; i < out.size(); ++i) {
    double v = cfg.nu_c * out[i] + g1 * rho1[i] - cfg.zeta * c[i];
    if (two) v += g2 * rho2[i];
    out[i] = v;
  }
  return out;
}

EllipticSolution solve_elliptic(std::span<const double> rho1, std::span<const double> rho2,
                                const SimulationConfig& cfg, const Grid& g,
                                std::span<const double> warm_start, const EllipticOptions& opts) {
  if (!(cfg.zeta > 0.0)) throw ConfigError("zeta must be positive for the elliptic solve");
  const std::size_t n = g.size();
  const double nu = cfg.nu_c;
  const double zeta = cfg.zeta;

  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i)
    b[i] = cfg.species[0].gamma * rho1[i] + (rho2.empty() ? 0.0 : cfg.species[1].gamma * rho2[i]);

  // Jacobi preconditioner: boundary cells lose one or two neighbor couplings.
  std::vector<double> inv_diag(n);
  const double ix2 = 1.0 / (g.dx() * g.dx());
  const double iy2 = 1.0 / (g.dy() * g.dy());
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      const int cx = (l > 0) + (l < g.nx() - 1);
      const int cy = (m > 0) + (m < g.ny() - 1);
      inv_diag[g.index(l, m)] = 1.0 / (zeta + nu * (cx * ix2 + cy * iy2));
    }

  EllipticSolution sol;
  sol.c = warm_start.size() == n ? std::vector<double>(warm_start.begin(), warm_start.end())
                                 : std::vector<double>(n, 0.0);
  const double bnorm = std::sqrt(dot(b, b));
  if (bnorm == 0.0) {
    sol.c.assign(n, 0.0);
    return sol;
  }

  std::vector<double> r(n), z(n), p(n), q(n);
  apply_operator(sol.c, q, nu, zeta, g);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
  double rnorm = std::sqrt(dot(r, r));
  sol.relative_residual = rnorm / bnorm;
  if (sol.relative_residual <= opts.tolerance) return sol;

  for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
  p = z;
  double rz = dot(r, z);
  const int max_iter = opts.max_iterations > 0 ? opts.max_iterations : static_cast<int>(10 * n) + 10;
  for (int it = 1; it <= max_iter; ++it) {
    apply_operator(p, q, nu, zeta, g);
    const double alpha = rz / dot(p, q);
    for (std::size_t i = 0; i < n; ++i) {
      sol.c[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    rnorm = std::sqrt(dot(r, r));
    sol.iterations = it;
    sol.relative_residual = rnorm / bnorm;
    if (sol.relative_residual <= opts.tolerance) return sol;
    for (std::size_t i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  std::ostringstream os;
  os << "elliptic solve did not converge in " << max_iter
     << " iterations (relative residual " << sol.relative_residual << ")";
  throw NumericalError(os.str());
}

}  // namespace fdp
