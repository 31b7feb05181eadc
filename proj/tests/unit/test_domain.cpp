#include <doctest.h>

#include <algorithm>
#include <random>

#include "fdp/config_io.hpp"
#include "fdp/domain.hpp"
#include "helpers.hpp"

using namespace fdp;

TEST_CASE("locate: first cell, shared corner tie-break, outside point") {
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 1.0);
  CHECK(g.locate({-0.5, -0.5}) == CellIndex{0, 0});
  CHECK(g.locate({0.0, 0.0}) == CellIndex{1, 1});
  CHECK_THROWS_AS(g.locate({2.0, 0.0}), ConfigError);
}

TEST_CASE("locate clamps the outer boundary onto valid cells") {
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 0.5);
  CHECK(g.locate({1.0, 1.0}) == CellIndex{3, 3});
  CHECK(g.locate({-1.0, 1.0}) == CellIndex{0, 3});
}

TEST_CASE("locate is total on the closed box and its cell contains the point") {
  const Grid g = Grid::with_spacing({-0.5, 0.5, -0.5, 0.5}, 1.0 / 20);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int n = 0; n < 2000; ++n) {
    Vec2 p{u(rng), u(rng)};
    if (n % 10 == 0) p.x = -0.5 + (n % 21) * g.dx();  // exactly on faces
    const CellIndex c = g.locate(p);
    const Vec2 ctr = g.center(c.l, c.m);
    CHECK(std::abs(p.x - ctr.x) <= 0.5 * g.dx() * (1 + 1e-12));
    CHECK(std::abs(p.y - ctr.y) <= 0.5 * g.dy() * (1 + 1e-12));
  }
}

TEST_CASE("grid layout is cell centered") {
  const Grid g = Grid::with_spacing({-1, 1, -1, 1}, 2.0 / 15);
  CHECK(g.nx() == 15);
  CHECK(g.ny() == 15);
  CHECK(g.center(0, 0).x == doctest::Approx(-1 + 1.0 / 15));
  CHECK(g.nx() * g.dx() == doctest::Approx(2.0));
  CHECK(g.index(3, 2) == 2u * 15 + 3);
}

TEST_CASE("validate: example 5 parameters are valid") {
  const SimulationConfig cfg = preset("example5");
  CHECK(check(cfg).ok());
  CHECK(check(cfg).warnings.empty());
}

TEST_CASE("validate: zeta = 0 is rejected by name") {
  SimulationConfig cfg = test::unit_config();
  cfg.zeta = 0.0;
  const ValidationReport r = check(cfg);
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0] == "zeta must be positive");
  CHECK_THROWS_WITH_AS(validate(cfg), doctest::Contains("zeta must be positive"), ConfigError);
}

TEST_CASE("validate: delta 2/15 fits [-1,1]^2 with 15 cells") {
  SimulationConfig cfg = preset("example1");
  cfg.delta = 2.0 / 15;
  CHECK(check(cfg).ok());
  CHECK(cells_across(cfg.domain.width(), cfg.delta) == 15);
}

TEST_CASE("validate lists every violated constraint") {
  SimulationConfig cfg = test::unit_config();
  cfg.tau = 2;
  cfg.nu_c = -1;
  cfg.delta = 0.3;
  cfg.domain = {0, 1, 0, 1};
  const ValidationReport r = check(cfg);
  CHECK(r.errors.size() == 4);
  CHECK(std::count(r.errors.begin(), r.errors.end(), "tau must be 0 or 1") == 1);
  CHECK(std::count(r.errors.begin(), r.errors.end(), "nu_c must be positive") == 1);
  CHECK(std::count(r.errors.begin(), r.errors.end(), "delta must divide the domain width") == 1);
}

TEST_CASE("validate: empty box and bad snapshots") {
  SimulationConfig cfg = test::unit_config();
  cfg.domain = {1, 1, 0, 1};
  CHECK_FALSE(check(cfg).ok());
  cfg = test::unit_config();
  cfg.snapshot_times = {5e-4, 2e-4};
  CHECK_FALSE(check(cfg).ok());
  cfg.snapshot_times = {2e-3};
  CHECK_FALSE(check(cfg).ok());
}

TEST_CASE("validate: chi2 <= chi1 is only a warning") {
  SimulationConfig cfg = preset("example1");
  cfg.species[1].chi = 1.0;
  const ValidationReport r = check(cfg);
  CHECK(r.ok());
  CHECK(r.warnings.size() == 1);
}

TEST_CASE("mesh sizes keep the fixed ratios") {
  for (const auto& name : preset_names()) {
    const SimulationConfig cfg = preset(name);
    CHECK(cfg.particle_mesh_size() == cfg.delta / 4);
    CHECK(cfg.merger_mesh_size() == cfg.delta / 8);
    CHECK(cells_across(cfg.domain.width(), cfg.particle_mesh_size()) ==
          4 * cells_across(cfg.domain.width(), cfg.delta));
  }
}

TEST_CASE("box helpers") {
  const Box b{-1, 1, -1, 1};
  CHECK(b.nearest_point({1.2, 0.3}) == Vec2{1.0, 0.3});
  CHECK(b.distance_to_boundary({0.5, 0.0}) == doctest::Approx(0.5));
  CHECK(b.contains({1.0, -1.0}));
  CHECK_FALSE(b.contains({1.0 + 1e-15, 0.0}));
}
