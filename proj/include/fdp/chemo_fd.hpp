#pragma once

#include <span>
#include <vector>

#include "fdp/domain.hpp"

namespace fdp {

/// Value at (l, m) with homogeneous Neumann ghost cells: indices one past an
/// edge mirror the adjacent interior cell (c_{-1,m} = c_{0,m}, ...).
inline double ghosted(std::span<const double> f, const Grid& g, int l, int m) {
  l = l < 0 ? 0 : (l >= g.nx() ? g.nx() - 1 : l);
  m = m < 0 ? 0 : (m >= g.ny() ? g.ny() - 1 : m);
  return f[g.index(l, m)];
}

/// Field extended by one layer of mirrored ghost cells, row-major
/// (nx + 2) x (ny + 2); entry (l, m) of the original sits at (l + 1, m + 1).
std::vector<double> apply_neumann_ghosts(std::span<const double> f, const Grid& g);

/// Five-point Laplacian with mirrored ghosts, every cell.
std::vector<double> laplacian(std::span<const double> f, const Grid& g);

/// dc/dt = nu lap c + gamma1 rho1 + gamma2 rho2 - zeta c per cell. An empty
/// rho2 is treated as zero.
std::vector<double> chemo_rhs(std::span<const double> c, std::span<const double> rho1,
                              std::span<const double> rho2, const SimulationConfig& cfg,
                              const Grid& g);

struct EllipticSolution {
  std::vector<double> c;
  int iterations = 0;
  double relative_residual = 0.0;
};

struct EllipticOptions {
  double tolerance = 1e-10;  // relative residual
  int max_iterations = 0;    // 0: 10 * number of cells
};

/// Solves nu lap c + gamma1 rho1 + gamma2 rho2 - zeta c = 0 with mirrored
/// ghosts by Jacobi-preconditioned conjugate gradients on the SPD operator
/// zeta I - nu lap. `warm_start` (may be empty) seeds the iteration. Throws
/// NumericalError with the final residual if the tolerance is not met.
EllipticSolution solve_elliptic(std::span<const double> rho1, std::span<const double> rho2,
                                const SimulationConfig& cfg, const Grid& g,
                                std::span<const double> warm_start = {},
                                const EllipticOptions& opts = {});

}  // namespace fdp
