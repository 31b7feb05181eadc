#include "fdp/reference.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>

#include "fdp/particle_core.hpp"
#include "fdp/projection.hpp"

namespace fdp::reference {

std::vector<double> diffusion_weight_rhs(const ParticleSet& s, double nu, bool cutoff) {
  std::vector<double> beta(s.size(), 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (i == j) continue;
      const double sigma = sigma_pair(s.area[i], s.area[j]);
      const Vec2 d = s.pos(i) - s.pos(j);
      if (cutoff && norm(d) > kCutoffSigmas * sigma) continue;
      beta[i] += nu / (sigma * sigma) * kernel_eta_sigma(d, sigma) *
                 (s.w[j] * s.area[i] - s.w[i] * s.area[j]);
    }
  }
  return beta;
}

Step1Result merger_step1(const ParticleSet& set, const VelocitySamples& vel, double dt, double mu) {
  struct Item {
    Particle p;
    Vec2 v;
    long id;
    std::size_t anchor;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < set.size(); ++i)
    items.push_back({set.get(i, 0), {vel.u[i], vel.v[i]}, static_cast<long>(i), i});
  long next_id = static_cast<long>(set.size());

  Step1Result res;
  for (;;) {
    std::optional<std::tuple<double, long, long>> best;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < items.size(); ++a)
      for (std::size_t b = 0; b < items.size(); ++b) {
        if (items[a].id >= items[b].id) continue;
        const auto t = intersection_params(items[a].p.pos, items[a].v, items[b].p.pos, items[b].v, mu);
        if (!t || t->tau_i <= 0.0 || t->tau_j <= 0.0) continue;
        const double tmax = std::max(t->tau_i, t->tau_j);
        if (tmax >= dt) continue;
        const auto key = std::make_tuple(tmax, items[a].id, items[b].id);
        if (!best || key < *best) {
          best = key;
          best_a = a;
          best_b = b;
        }
      }
    if (!best) break;
    const Item& a = items[best_a];
    const Item& b = items[best_b];
    const double w = a.p.weight + b.p.weight;
    const Vec2 v = w > 0.0 ? (1.0 / w) * (a.p.weight * a.v + b.p.weight * b.v) : 0.5 * (a.v + b.v);
    Item merged{merge_pair(a.p, b.p), v, next_id++, std::min(a.anchor, b.anchor)};
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(std::max(best_a, best_b)));
    items.erase(items.begin() + static_cast<std::ptrdiff_t>(std::min(best_a, best_b)));
    items.push_back(merged);
    ++res.merges;
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) { return a.anchor < b.anchor; });
  for (const Item& it : items) res.set.push_back(it.p.pos, it.p.weight, it.p.area);
  return res;
}

std::vector<double> recover_density(const ParticleSet& s, const Grid& g, double d_min) {
  std::vector<double> star(g.size(), 0.0);
  std::vector<char> occupied(g.size(), 0);
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (!(g.locate(s.pos(i)) == CellIndex{l, m})) continue;
        const double d = std::max(d_min, norm(s.pos(i) - g.center(l, m)));
        num += s.w[i] / s.area[i] / d;
        den += 1.0 / d;
      }
      if (den > 0.0) {
        star[g.index(l, m)] = num / den;
        occupied[g.index(l, m)] = 1;
      }
    }
  std::vector<double> rho = star;
  const double edge = 1.0 / (4.0 + 2.0 * std::sqrt(2.0));
  const double diag = 1.0 / (4.0 + 4.0 * std::sqrt(2.0));
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      if (occupied[g.index(l, m)]) continue;
      double v = 0.0;
      for (int dm = -1; dm <= 1; ++dm)
        for (int dl = -1; dl <= 1; ++dl) {
          if (dl == 0 && dm == 0) continue;
          const int ll = l + dl, mm = m + dm;
          if (ll < 0 || ll >= g.nx() || mm < 0 || mm >= g.ny()) continue;
          v += (dl == 0 || dm == 0 ? edge : diag) * star[g.index(ll, mm)];
        }
      rho[g.index(l, m)] = v;
    }
  return rho;
}

std::vector<double> laplacian(std::span<const double> f, const Grid& g) {
  std::vector<double> out(g.size());
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      const double c = f[g.index(l, m)];
      const double west = l > 0 ? f[g.index(l - 1, m)] : c;
      const double east = l + 1 < g.nx() ? f[g.index(l + 1, m)] : c;
      const double south = m > 0 ? f[g.index(l, m - 1)] : c;
      const double north = m + 1 < g.ny() ? f[g.index(l, m + 1)] : c;
      out[g.index(l, m)] = (east - 2.0 * c + west) / (g.dx() * g.dx()) +
                           (north - 2.0 * c + south) / (g.dy() * g.dy());
    }
  return out;
}

}  // namespace fdp::reference
