#include "fdp/merger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace fdp {

std::optional<IntersectionTimes> intersection_params(Vec2 xi, Vec2 ui, Vec2 xj, Vec2 uj,
                                                     double mu) {
  const double det = ui.x * uj.y - uj.x * ui.y;
  if (!(std::abs(det) > mu)) return std::nullopt;
  const double dx = xj.x - xi.x;
  const double dy = xj.y - xi.y;
  // x_i + tau_i u_i = x_j + tau_j u_j, solved by Cramer's rule.
  return IntersectionTimes{(dx * uj.y - dy * uj.x) / det, (dx * ui.y - dy * ui.x) / det};
}

Particle merge_pair(const Particle& a, const Particle& b) {
  if (a.species != b.species) throw ConfigError("cannot merge particles of different species");
  const double w = a.weight + b.weight;
  Particle out;
  out.species = a.species;
  out.weight = w;
  out.area = a.area + b.area;
  if (w > 0.0) {
    const Vec2 m = a.weight * a.pos + b.weight * b.pos;
    out.pos = {m.x / w, m.y / w};
  } else {
    out.pos = 0.5 * (a.pos + b.pos);
  }
  return out;
}

double search_cell_width(double min_initial_area, double dt, double max_component_speed) {
  const double reach = std::max(std::sqrt(min_initial_area), dt * max_component_speed);
  return 2.0 * reach * (1.0 + 1e-9);
}

namespace {

constexpr int kMaxSearchCells = 1024;

struct Bounds {
  double x0, y0;
  int ncx, ncy;
  double width;
};

Bounds hash_bounds(const ParticleSet& s, double width) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  for (std::size_t i = 0; i < s.size(); ++i) {
    x_lo = std::min(x_lo, s.x[i]);
    x_hi = std::max(x_hi, s.x[i]);
    y_lo = std::min(y_lo, s.y[i]);
    y_hi = std::max(y_hi, s.y[i]);
  }
  if (s.empty()) x_lo = x_hi = y_lo = y_hi = 0.0;
  // Widen cells if the hash would get too large; adjacency stays sufficient.
  const double extent = std::max(x_hi - x_lo, y_hi - y_lo);
  width = std::max(width, extent / kMaxSearchCells);
  const int ncx = std::max(1, static_cast<int>((x_hi - x_lo) / width) + 1);
  const int ncy = std::max(1, static_cast<int>((y_hi - y_lo) / width) + 1);
  return {x_lo, y_lo, ncx, ncy, width};
}

}  // namespace

SearchGrid::SearchGrid(const ParticleSet& set, double cell_width) : set_(&set) {
  const Bounds b = hash_bounds(set, cell_width);
  x0_ = b.x0;
  y0_ = b.y0;
  ncx_ = b.ncx;
  ncy_ = b.ncy;
  width_ = b.width;
  const std::size_t ncell = static_cast<std::size_t>(ncx_) * ncy_;
  start_.assign(ncell + 1, 0);
  std::vector<std::size_t> cell(set.size());
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto [cx, cy] = cell_of(set.pos(i));
    cell[i] = static_cast<std::size_t>(cy) * ncx_ + cx;
    ++start_[cell[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) start_[c + 1] += start_[c];
  items_.resize(set.size());
  std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
  for (std::size_t i = 0; i < set.size(); ++i) items_[fill[cell[i]]++] = i;
}

std::pair<int, int> SearchGrid::cell_of(Vec2 p) const {
  const int cx = std::clamp(static_cast<int>(std::floor((p.x - x0_) / width_)), 0, ncx_ - 1);
  const int cy = std::clamp(static_cast<int>(std::floor((p.y - y0_) / width_)), 0, ncy_ - 1);
  return {cx, cy};
}

std::vector<std::size_t> SearchGrid::candidates(std::size_t i) const {
  std::vector<std::size_t> out;
  const auto [cx, cy] = cell_of(set_->pos(i));
  for (int qy = std::max(0, cy - 1); qy <= std::min(ncy_ - 1, cy + 1); ++qy)
    for (int qx = std::max(0, cx - 1); qx <= std::min(ncx_ - 1, cx + 1); ++qx) {
      const std::size_t c = static_cast<std::size_t>(qy) * ncx_ + qx;
      for (std::size_t q = start_[c]; q < start_[c + 1]; ++q)
        if (items_[q] != i) out.push_back(items_[q]);
    }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Working copy of one species during the pre-step merger. Slots are never
// reused: merged particles are appended and their parts marked dead.
struct MergeWork {
  std::vector<Particle> p;
  std::vector<Vec2> vel;
  std::vector<std::int64_t> id;
  std::vector<std::size_t> anchor;  // lowest original index among constituents
  std::vector<char> alive;
  std::int64_t next_id = 0;

  MergeWork(const ParticleSet& s, const VelocitySamples& v) {
    const std::size_t n = s.size();
    p.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      p.push_back(s.get(i, 0));
      vel.push_back({v.u[i], v.v[i]});
      id.push_back(static_cast<std::int64_t>(i));
      anchor.push_back(i);
      alive.push_back(1);
    }
    next_id = static_cast<std::int64_t>(n);
  }

  std::size_t merge(std::size_t a, std::size_t b) {
    const Particle m = merge_pair(p[a], p[b]);
    const double w = p[a].weight + p[b].weight;
    const Vec2 v = (w > 0.0) ? (1.0 / w) * (p[a].weight * vel[a] + p[b].weight * vel[b])
                             : 0.5 * (vel[a] + vel[b]);
    alive[a] = alive[b] = 0;
    p.push_back(m);
    vel.push_back(v);
    id.push_back(next_id++);
    anchor.push_back(std::min(anchor[a], anchor[b]));
    alive.push_back(1);
    return p.size() - 1;
  }

  ParticleSet survivors() const {
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i < p.size(); ++i)
      if (alive[i]) order.push_back(i);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return anchor[a] < anchor[b]; });
    ParticleSet out;
    out.reserve(order.size());
    for (std::size_t i : order) out.push_back(p[i].pos, p[i].weight, p[i].area);
    return out;
  }
};

struct PairKey {
  double tau_max;
  std::int64_t id_lo, id_hi;
  std::size_t a, b;  // slots
  bool operator>(const PairKey& o) const {
    return std::tie(tau_max, id_lo, id_hi) > std::tie(o.tau_max, o.id_lo, o.id_hi);
  }
};

// Qualifying pair key, evaluated with the lower id first so every caller
// gets bit-identical parameters.
std::optional<PairKey> qualify(const MergeWork& wk, std::size_t a, std::size_t b, double dt,
                               double mu) {
  if (wk.id[a] > wk.id[b]) std::swap(a, b);
  const auto t = intersection_params(wk.p[a].pos, wk.vel[a], wk.p[b].pos, wk.vel[b], mu);
  if (!t || !(t->tau_i > 0.0) || !(t->tau_j > 0.0)) return std::nullopt;
  const double tmax = std::max(t->tau_i, t->tau_j);
  if (!(tmax < dt)) return std::nullopt;
  return PairKey{tmax, wk.id[a], wk.id[b], a, b};
}

}  // namespace

Step1Result merger_step1(const ParticleSet& set, const VelocitySamples& vel, double dt,
                         double min_initial_area, double mu) {
  Step1Result res;
  if (set.size() < 2 || !(dt > 0.0)) {
    res.set = set;
    return res;
  }
  MergeWork wk(set, vel);

  double vmax = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i)
    vmax = std::max({vmax, std::abs(vel.u[i]), std::abs(vel.v[i])});
  const Bounds b = hash_bounds(set, search_cell_width(min_initial_area, dt, vmax));

  auto cell_of = [&](Vec2 p) {
    const int cx = std::clamp(static_cast<int>(std::floor((p.x - b.x0) / b.width)), 0, b.ncx - 1);
    const int cy = std::clamp(static_cast<int>(std::floor((p.y - b.y0) / b.width)), 0, b.ncy - 1);
    return std::pair{cx, cy};
  };
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(b.ncx) * b.ncy);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto [cx, cy] = cell_of(wk.p[i].pos);
    cells[static_cast<std::size_t>(cy) * b.ncx + cx].push_back(i);
  }

  std::priority_queue<PairKey, std::vector<PairKey>, std::greater<>> queue;
  auto scan = [&](std::size_t a, bool only_higher) {
    const auto [cx, cy] = cell_of(wk.p[a].pos);
    for (int qy = std::max(0, cy - 1); qy <= std::min(b.ncy - 1, cy + 1); ++qy)
      for (int qx = std::max(0, cx - 1); qx <= std::min(b.ncx - 1, cx + 1); ++qx)
        for (std::size_t c : cells[static_cast<std::size_t>(qy) * b.ncx + qx]) {
          if (c == a || !wk.alive[c] || (only_higher && c < a)) continue;
          if (auto key = qualify(wk, a, c, dt, mu)) queue.push(*key);
        }
  };
  for (std::size_t i = 0; i < set.size(); ++i) scan(i, true);

  while (!queue.empty()) {
    const PairKey top = queue.top();
    queue.pop();
    if (!wk.alive[top.a] || !wk.alive[top.b]) continue;
    const std::size_t m = wk.merge(top.a, top.b);
    ++res.merges;
    const auto [cx, cy] = cell_of(wk.p[m].pos);
    cells[static_cast<std::size_t>(cy) * b.ncx + cx].push_back(m);
    scan(m, false);
  }
  res.set = wk.survivors();
  return res;
}

SystemStep1Result merger_step1(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel,
                               double dt) {
  double vmax = 0.0;
  for (int k = 0; k < ps.n_species; ++k)
    for (std::size_t i = 0; i < vel[k].size(); ++i)
      vmax = std::max(vmax, std::hypot(vel[k].u[i], vel[k].v[i]));
  const double mu = intersection_threshold(vmax);

  SystemStep1Result out;
  out.particles.n_species = ps.n_species;
  out.particles.min_initial_area = ps.min_initial_area;
  for (int k = 0; k < ps.n_species; ++k) {
    Step1Result r = merger_step1(ps.species[k], vel[k], dt, ps.min_initial_area, mu);
    out.particles.species[k] = std::move(r.set);
    out.merges += r.merges;
  }
  return out;
}

namespace {

struct CellBuckets {
  std::vector<std::size_t> cell, start, items;
};

CellBuckets bucket(const ParticleSet& s, const Grid& g) {
  CellBuckets b;
  const std::size_t ncell = g.size();
  b.cell.resize(s.size());
  b.start.assign(ncell + 1, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    b.cell[i] = g.index(g.locate_clamped(s.pos(i)));
    ++b.start[b.cell[i] + 1];
  }
  for (std::size_t c = 0; c < ncell; ++c) b.start[c + 1] += b.start[c];
  b.items.resize(s.size());
  std::vector<std::size_t> fill(b.start.begin(), b.start.end() - 1);
  for (std::size_t i = 0; i < s.size(); ++i) b.items[fill[b.cell[i]]++] = i;
  return b;
}

Step2Result merge_cells_once(const ParticleSet& s, const Grid& g) {
  const CellBuckets b = bucket(s, g);
  Step2Result res;
  res.new_index.resize(s.size());
  res.set.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    const std::size_t c = b.cell[i];
    const std::size_t first = b.start[c], last = b.start[c + 1];
    if (b.items[first] != i) continue;  // not the lowest index of its cell
    const auto out_idx = static_cast<std::uint32_t>(res.set.size());
    if (last - first == 1) {
      res.set.push_back(s.pos(i), s.w[i], s.area[i]);
      res.new_index[i] = out_idx;
      continue;
    }
    double w = 0.0, wx = 0.0, wy = 0.0, a = 0.0, mx = 0.0, my = 0.0;
    for (std::size_t q = first; q < last; ++q) {
      const std::size_t j = b.items[q];
      w += s.w[j];
      wx += s.w[j] * s.x[j];
      wy += s.w[j] * s.y[j];
      a += s.area[j];
      mx += s.x[j];
      my += s.y[j];
      res.new_index[j] = out_idx;
    }
    const double cnt = static_cast<double>(last - first);
    const Vec2 pos = (w > 0.0) ? Vec2{wx / w, wy / w} : Vec2{mx / cnt, my / cnt};
    res.set.push_back(pos, w, a);
    res.merges += static_cast<int>(last - first) - 1;
  }
  return res;
}

}  // namespace

Step2Result merger_step2(const ParticleSet& set, const Grid& merger_grid) {
  Step2Result res = merge_cells_once(set, merger_grid);
  // A center of mass can round across a cell face; repeat until clean.
  while (!merger_invariant_holds(res.set, merger_grid)) {
    Step2Result again = merge_cells_once(res.set, merger_grid);
    for (auto& idx : res.new_index) idx = again.new_index[idx];
    res.set = std::move(again.set);
    res.merges += again.merges;
  }
  return res;
}

bool merger_invariant_holds(const ParticleSet& set, const Grid& merger_grid) {
  std::vector<char> seen(merger_grid.size(), 0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const std::size_t c = merger_grid.index(merger_grid.locate_clamped(set.pos(i)));
    if (seen[c]) return false;
    seen[c] = 1;
  }
  return true;
}

int pull_back(ParticleSet& set, const Box& box) {
  int moved = 0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vec2 p = set.pos(i);
    if (box.contains(p)) continue;
    const Vec2 q = box.nearest_point(p);
    set.x[i] = q.x;
    set.y[i] = q.y;
    ++moved;
  }
  return moved;
}

int pull_back(ParticleSystem& ps, const Box& box) {
  int moved = 0;
  for (int k = 0; k < ps.n_species; ++k) moved += pull_back(ps.species[k], box);
  return moved;
}

}  // namespace fdp
