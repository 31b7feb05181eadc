#include "fdp/convergence.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "fdp/integrator.hpp"
#include "fdp/projection.hpp"

namespace fdp {

RungeEstimate runge_estimate(double d_coarse, double d_fine) {
  return {d_fine * d_fine / std::abs(d_coarse - d_fine), std::log2(d_coarse / d_fine)};
}

std::array<double, 2> difference_norms(const Grid& g, const std::vector<double>& a,
                                       const std::vector<double>& b) {
  if (a.size() != g.size() || b.size() != g.size())
    throw std::invalid_argument("difference_norms: size mismatch");
  const double cell = g.dx() * g.dy();
  double l1 = 0.0, l2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = std::abs(a[i] - b[i]);
    l1 += d;
    l2 += d * d;
  }
  return {l1 * cell, std::sqrt(l2 * cell)};
}

std::vector<double> resample(const std::vector<double>& fine, const Grid& fine_grid,
                             const Grid& target) {
  const LinearInterpolant f(fine, fine_grid);
  std::vector<double> out(target.size());
  for (int m = 0; m < target.ny(); ++m)
    for (int l = 0; l < target.nx(); ++l) out[target.index(l, m)] = f(target.center(l, m));
  return out;
}

ConvergenceRow runge_row(const FieldSolution& coarse, const FieldSolution& mid,
                         const FieldSolution& fine) {
  ConvergenceRow row;
  row.delta = fine.grid.dx();
  const Grid& g = coarse.grid;
  for (std::size_t q = 0; q < 3; ++q) {
    if (coarse.fields[q].empty() || mid.fields[q].empty() || fine.fields[q].empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.estimate[q] = {RungeEstimate{nan, nan}, RungeEstimate{nan, nan}};
      continue;
    }
    const std::vector<double> m = resample(mid.fields[q], mid.grid, g);
    const std::vector<double> f = resample(fine.fields[q], fine.grid, g);
    const auto d_coarse = difference_norms(g, coarse.fields[q], m);
    const auto d_fine = difference_norms(g, m, f);
    for (int p = 0; p < 2; ++p) row.estimate[q][p] = runge_estimate(d_coarse[p], d_fine[p]);
  }
  return row;
}

std::vector<std::array<std::size_t, 3>> refinement_triples(const std::vector<double>& deltas) {
  auto close = [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::abs(b); };
  std::vector<std::array<std::size_t, 3>> out;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    std::size_t j = deltas.size(), k = deltas.size();
    for (std::size_t n = 0; n < deltas.size(); ++n) {
      if (close(deltas[n], deltas[i] / 2)) j = n;
      if (close(deltas[n], deltas[i] / 4)) k = n;
    }
    if (j < deltas.size() && k < deltas.size()) out.push_back({i, j, k});
  }
  if (out.empty())
    throw ConfigError("mesh sizes are not refinement-chained: need D, D/2 and D/4 for some D");
  return out;
}

std::vector<ConvergenceRow> convergence_study(
    const SimulationConfig& base, const std::vector<double>& deltas, double t_end,
    const std::function<void(double, const FieldSolution&)>& on_solution) {
  const auto triples = refinement_triples(deltas);
  std::vector<FieldSolution> sol(deltas.size());
  std::vector<bool> needed(deltas.size(), false);
  for (const auto& t : triples)
    for (std::size_t i : t) needed[i] = true;

  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!needed[i]) continue;
    SimulationConfig cfg = base;
    cfg.delta = deltas[i];
    cfg.final_time = t_end;
    cfg.snapshot_times = {t_end};
    const RunResult r = run(cfg);
    const Snapshot& s = r.snapshots.back();
    sol[i].grid = s.grid;
    sol[i].fields = {s.rho[0], cfg.n_species == 2 ? s.rho[1] : std::vector<double>{}, s.c};
    if (on_solution) on_solution(deltas[i], sol[i]);
  }

  std::vector<ConvergenceRow> rows;
  for (const auto& t : triples) rows.push_back(runge_row(sol[t[0]], sol[t[1]], sol[t[2]]));
  return rows;
}

std::string format_convergence_table(const std::vector<ConvergenceRow>& rows) {
  std::string out = "# delta";
  for (const char* name : kFieldNames)
    for (const char* p : {"L1", "L2"}) out += std::string(" ") + name + "_" + p + "_err " + name + "_" + p + "_rate";
  out += '\n';
  char buf[64];
  for (const ConvergenceRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%.6g", r.delta);
    out += buf;
    for (const auto& q : r.estimate)
      for (const RungeEstimate& e : q) {
        std::snprintf(buf, sizeof buf, " %.3e %.2f", e.error, e.rate);
        out += buf;
      }
    out += '\n';
  }
  return out;
}

}  // namespace fdp
