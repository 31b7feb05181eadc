#include <doctest.h>

#include <cmath>

#include "fdp/chemo_fd.hpp"
#include "fdp/config_io.hpp"
#include "fdp/integrator.hpp"
#include "fdp/merger.hpp"
#include "fdp/projection.hpp"
#include "helpers.hpp"

using namespace fdp;

TEST_CASE("ssp_rk3_step: y' = -y over one step of 0.1") {
  auto euler = [](double y, double h) { return y - h * y; };
  auto combine = [](double a, double x, double b, double y) { return a * x + b * y; };
  auto same = [](double y) { return y; };
  const double y = ssp_rk3_step(1.0, 0.1, euler, combine, same);
  // stages by hand: s1 = 0.9, s2 = 0.75 + 0.25 * 0.81 = 0.9525,
  // y = 1/3 + 2/3 * 0.9525 * 0.9 = 0.904833...
  CHECK(std::abs(y - (1.0 / 3 + 2.0 / 3 * 0.9525 * 0.9)) <= 1e-12);
  CHECK(std::abs(y - (1 - 0.1 + 0.005 - 0.1 * 0.1 * 0.1 / 6)) <= 1e-12);
}

TEST_CASE("ssp_rk3_step: constant velocity advects exactly") {
  auto euler = [](Vec2 p, double h) { return p + h * Vec2{1.0, 0.0}; };
  auto combine = [](double a, Vec2 x, double b, Vec2 y) { return a * x + b * y; };
  auto same = [](Vec2 p) { return p; };
  const Vec2 p = ssp_rk3_step(Vec2{0.25, -0.5}, 1e-3, euler, combine, same);
  CHECK(p.x == doctest::Approx(0.251).epsilon(1e-15));
  CHECK(p.y == -0.5);
}

TEST_CASE("uniform state: particles frozen and c relaxes to gamma rho / zeta") {
  SimulationConfig cfg = test::unit_config(0.25);
  cfg.species[0].initial_density = Profile::constant(2.0);
  cfg.species[0].gamma = 3.0;
  cfg.zeta = 4.0;
  cfg.initial_c = Profile::constant(0.5);
  cfg.final_time = 0.02;
  Simulation sim(cfg);
  const ParticleSystem start = sim.state().particles;
  const double c_eq = 3.0 * 2.0 / 4.0;
  // the scheme applied to c' = zeta (c_eq - c) multiplies the deviation by
  // the RK3 stability polynomial of -zeta dt each step
  double dev = 0.5 - c_eq;
  while (sim.time() < cfg.final_time) {
    const StepRecord r = sim.advance(cfg.final_time);
    const double z = -4.0 * r.dt;
    dev *= 1 + z + z * z / 2 + z * z * z / 6;
    CHECK(r.merges_pre == 0);
    CHECK(r.merges_post == 0);
  }
  CHECK(sim.time() == cfg.final_time);
  const ParticleSystem& end = sim.state().particles;
  REQUIRE(end.species[0].size() == start.species[0].size());
  for (std::size_t i = 0; i < start.species[0].size(); ++i) {
    CHECK(end.species[0].x[i] == doctest::Approx(start.species[0].x[i]).epsilon(1e-14));
    CHECK(end.species[0].y[i] == doctest::Approx(start.species[0].y[i]).epsilon(1e-14));
    CHECK(end.species[0].w[i] == doctest::Approx(start.species[0].w[i]).epsilon(1e-14));
    CHECK(end.species[0].area[i] == doctest::Approx(start.species[0].area[i]).epsilon(1e-14));
  }
  const double exact = c_eq + (0.5 - c_eq) * std::exp(-4.0 * cfg.final_time);
  for (double c : sim.state().c) {
    CHECK(c == doctest::Approx(c_eq + dev).epsilon(1e-13));
    CHECK(c == doctest::Approx(exact).epsilon(1e-6));
  }
}

TEST_CASE("run: t_end = 0 snapshot reproduces the initial state") {
  SimulationConfig cfg = test::unit_config(0.1);
  cfg.species[0].initial_density = Profile::gaussian(3.0, {0, 0}, 2.0);
  cfg.final_time = 0.0;
  cfg.snapshot_times = {0.0};
  const RunResult r = run(cfg);
  REQUIRE(r.snapshots.size() == 1);
  CHECK(r.series.size() == 1);
  const Snapshot& s = r.snapshots[0];
  CHECK(s.t == 0.0);
  const auto exact = s.grid.sample(cfg.species[0].initial_density);
  double err = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) {
    err = std::max(err, std::abs(s.rho[0][i] - exact[i]));
    mx = std::max(mx, exact[i]);
  }
  CHECK(err <= 0.01 * mx);
  CHECK(s.c == s.grid.sample(cfg.initial_c));
}

TEST_CASE("run: snapshot times are hit exactly and time is monotone") {
  SimulationConfig cfg = preset("example3");
  cfg.delta = 0.1;
  cfg.final_time = 3e-3;
  cfg.snapshot_times = {1e-3, 2.5e-3, 3e-3};
  const RunResult r = run(cfg);
  REQUIRE(r.snapshots.size() == 3);
  CHECK(r.snapshots[0].t == 1e-3);
  CHECK(r.snapshots[1].t == 2.5e-3);
  CHECK(r.snapshots[2].t == 3e-3);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    CHECK(r.series[i].t > r.series[i - 1].t);
    CHECK(r.series[i].dt > 0.0);
  }
}

TEST_CASE("run is bit-deterministic") {
  SimulationConfig cfg = preset("example2");
  cfg.delta = 0.2;
  cfg.final_time = 2e-4;
  cfg.snapshot_times = {2e-4};
  const RunResult a = run(cfg);
  const RunResult b = run(cfg);
  REQUIRE(a.series.size() == b.series.size());
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].t == b.series[i].t);
    CHECK(a.series[i].max_rho == b.series[i].max_rho);
    CHECK(a.series[i].mass == b.series[i].mass);
    CHECK(a.series[i].max_c == b.series[i].max_c);
  }
  CHECK(a.snapshots[0].particles == b.snapshots[0].particles);
}

TEST_CASE("weak chemotaxis: recovered maximum decays and weights stay nonnegative") {
  SimulationConfig cfg = test::unit_config(0.1);
  cfg.species[0].chi = 1e-9;
  cfg.species[0].initial_density = Profile::gaussian(5.0, {0.1, 0}, 20.0);
  cfg.final_time = 0.01;
  const RunResult r = run(cfg);
  CHECK(r.series.size() > 3);
  for (std::size_t i = 1; i < r.series.size(); ++i) {
    // individual weights may oscillate on the lattice scale, the recovered
    // density does not
    CHECK(r.series[i].min_weight >= 0.0);
    CHECK(r.series[i].max_rho[0] <= r.series[i - 1].max_rho[0] * (1 + 1e-12));
  }
  CHECK(r.series.back().max_rho[0] < r.series.front().max_rho[0]);
  CHECK(r.series.back().max_particle_density[0] < r.series.front().max_particle_density[0]);
}

TEST_CASE("parabolic-elliptic state: c solves the elliptic problem after every step") {
  SimulationConfig cfg = preset("example5");
  cfg.delta = 0.2;
  cfg.final_time = 5e-4;
  cfg.snapshot_times = {};
  Simulation sim(cfg);
  for (int n = 0; n < 3 && sim.time() < cfg.final_time; ++n) {
    sim.advance(cfg.final_time);
    const auto rho = sim.recovered_density();
    const auto res = chemo_rhs(sim.state().c, rho[0], rho[1], cfg, sim.grid());
    double r2 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      r2 += res[i] * res[i];
      s2 += std::pow(rho[0][i] + rho[1][i], 2);
    }
    CHECK(std::sqrt(r2 / s2) <= 1e-9);
  }
}
