#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "fdp/domain.hpp"

namespace fdp {

struct RungeEstimate {
  double error = 0.0;
  double rate = 0.0;
};

/// Runge estimate from the differences of three nested solutions,
/// d_coarse = |u(D) - u(D/2)| and d_fine = |u(D/2) - u(D/4)|:
///   error = d_fine^2 / |d_coarse - d_fine|,  rate = log2(d_coarse / d_fine).
RungeEstimate runge_estimate(double d_coarse, double d_fine);

/// Final-time fields of one resolution.
struct FieldSolution {
  Grid grid;
  std::array<std::vector<double>, 3> fields;  // rho1, rho2 (may be empty), c
};

inline constexpr std::array<const char*, 3> kFieldNames = {"rho1", "rho2", "c"};

/// Cell-area weighted discrete L1 and L2 norms of a - b on g.
std::array<double, 2> difference_norms(const Grid& g, const std::vector<double>& a,
                                       const std::vector<double>& b);

/// `fine` evaluated at the cell centers of `target` through its
/// piecewise-linear interpolant.
std::vector<double> resample(const std::vector<double>& fine, const Grid& fine_grid,
                             const Grid& target);

/// One table row; labeled by the finest mesh size of the triple.
struct ConvergenceRow {
  double delta = 0.0;
  // estimate[field][p], p = 0 for L1 and 1 for L2; fields absent from the
  // solutions are NaN
  std::array<std::array<RungeEstimate, 2>, 3> estimate{};
};

/// Differences are taken at the coarse grid's cell centers.
ConvergenceRow runge_row(const FieldSolution& coarse, const FieldSolution& mid,
                         const FieldSolution& fine);

/// Index triples (i, j, k) into `deltas` with deltas[j] = deltas[i]/2 and
/// deltas[k] = deltas[i]/4 (relative tolerance 1e-9), ordered by i.
/// Throws ConfigError when there is none.
std::vector<std::array<std::size_t, 3>> refinement_triples(const std::vector<double>& deltas);

/// Runs `base` to t_end on every mesh size and forms a row per refinement
/// triple. The optional callback reports each finished resolution.
std::vector<ConvergenceRow> convergence_study(
    const SimulationConfig& base, const std::vector<double>& deltas, double t_end,
    const std::function<void(double delta, const FieldSolution&)>& on_solution = {});

/// Plain-text table: delta then error/rate for L1 and L2 of every field.
std::string format_convergence_table(const std::vector<ConvergenceRow>& rows);

}  // namespace fdp
