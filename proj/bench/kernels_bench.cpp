// Parallel kernels against their serial reference versions.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fdp/chemo_fd.hpp"
#include "fdp/merger.hpp"
#include "fdp/particle_core.hpp"
#include "fdp/projection.hpp"
#include "fdp/reference.hpp"

namespace {

using namespace fdp;

// Lattice particles of spacing h on [-1,1]^2 carrying a Gaussian bump,
// jittered slightly so the hashes see realistic occupancy.
ParticleSet lattice(int per_side, std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.2, 0.2);
  const double h = 2.0 / per_side;
  ParticleSet s;
  s.reserve(static_cast<std::size_t>(per_side) * per_side);
  for (int a = 0; a < per_side; ++a)
    for (int b = 0; b < per_side; ++b) {
      const double x = -1 + (a + 0.5 + jitter(rng)) * h;
      const double y = -1 + (b + 0.5 + jitter(rng)) * h;
      s.push_back({x, y}, 50.0 * std::exp(-10.0 * (x * x + y * y)) * h * h, h * h);
    }
  return s;
}

VelocitySamples focusing(const ParticleSet& s) {
  VelocitySamples v;
  v.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    v.u[i] = -s.x[i];
    v.v[i] = -s.y[i] + 0.3 * s.x[i];
  }
  return v;
}

void BM_Diffusion(benchmark::State& st) {
  const ParticleSet s = lattice(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(diffusion_weight_rhs(s, 1.0, true));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

void BM_DiffusionReference(benchmark::State& st) {
  const ParticleSet s = lattice(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(reference::diffusion_weight_rhs(s, 1.0, true));
  st.SetItemsProcessed(st.iterations() * static_cast<long>(s.size()));
}

void BM_MergerStep1(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ParticleSet s = lattice(n);
  const VelocitySamples v = focusing(s);
  const double a0 = (2.0 / n) * (2.0 / n);
  const double dt = 0.9 * std::sqrt(a0) / 1.3;
  for (auto _ : st)
    benchmark::DoNotOptimize(merger_step1(s, v, dt, a0, intersection_threshold(1.3)));
}

void BM_MergerStep1Reference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  const ParticleSet s = lattice(n);
  const VelocitySamples v = focusing(s);
  const double a0 = (2.0 / n) * (2.0 / n);
  const double dt = 0.9 * std::sqrt(a0) / 1.3;
  for (auto _ : st)
    benchmark::DoNotOptimize(reference::merger_step1(s, v, dt, intersection_threshold(1.3)));
}

void BM_Recover(benchmark::State& st) {
  const int cells = static_cast<int>(st.range(0));
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 2.0 / cells);
  const ParticleSet s = lattice(4 * cells);
  for (auto _ : st) benchmark::DoNotOptimize(recover_density(s, g, default_min_distance(g)));
}

void BM_RecoverReference(benchmark::State& st) {
  const int cells = static_cast<int>(st.range(0));
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 2.0 / cells);
  const ParticleSet s = lattice(4 * cells);
  for (auto _ : st)
    benchmark::DoNotOptimize(reference::recover_density(s, g, default_min_distance(g)));
}

std::vector<double> wave(const Grid& g) {
  std::vector<double> f(g.size());
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      const Vec2 p = g.center(l, m);
      f[g.index(l, m)] = std::cos(M_PI * p.x) * std::cos(2 * M_PI * p.y);
    }
  return f;
}

void BM_Laplacian(benchmark::State& st) {
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 2.0 / st.range(0));
  const auto f = wave(g);
  for (auto _ : st) benchmark::DoNotOptimize(laplacian(f, g));
}

void BM_LaplacianReference(benchmark::State& st) {
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 2.0 / st.range(0));
  const auto f = wave(g);
  for (auto _ : st) benchmark::DoNotOptimize(reference::laplacian(f, g));
}

}  // namespace

BENCHMARK(BM_Diffusion)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DiffusionReference)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MergerStep1)->Arg(60)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_MergerStep1Reference)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Recover)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RecoverReference)->Arg(30)->Arg(60)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Laplacian)->Arg(120)->Arg(480)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_LaplacianReference)->Arg(120)->Arg(480)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
