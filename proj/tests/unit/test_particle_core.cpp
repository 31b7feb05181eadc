#include <doctest.h>

#include <cmath>
#include <numeric>

#include "fdp/config_io.hpp"
#include "fdp/integrator.hpp"
#include "fdp/particle_core.hpp"
#include "fdp/reference.hpp"
#include "helpers.hpp"

using namespace fdp;

namespace {

double abs_sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s;
}

}  // namespace

TEST_CASE("kernel is positive, even and normalized to eta(0) = 4/pi") {
  CHECK(kernel_eta({0, 0}) == doctest::Approx(4.0 / kPi));
  CHECK(kernel_eta({1, 0}) == doctest::Approx(4.0 / kPi * std::exp(-1.0)).epsilon(1e-14));
  CHECK(kernel_eta_sigma({0.3, -0.2}, 0.5) == kernel_eta_sigma({-0.3, 0.2}, 0.5));
  CHECK(kernel_eta_sigma({30, 0}, 1.0) >= 0.0);
  CHECK(kernel_eta_sigma({0.1, 0}, 0.5) == doctest::Approx(kernel_eta({0.2, 0}) / 0.25));
}

TEST_CASE("sigma_pair") {
  CHECK(sigma_pair(1, 1) == 1.0);
  CHECK(sigma_pair(0.02, 0.08) == doctest::Approx(0.2236067977).epsilon(1e-9));
  CHECK(sigma_pair(0.02, 0.08) == sigma_pair(0.08, 0.02));
  CHECK_THROWS_AS(sigma_pair(2, 0), ConfigError);
}

TEST_CASE("init_particles: counts and areas on the Delta/4 lattice") {
  SimulationConfig cfg = preset("example1");
  cfg.delta = 2.0 / 15;
  const ParticleSystem ps = init_particles(cfg);
  CHECK(ps.n_species == 2);
  CHECK(ps.species[0].size() == 3600);
  CHECK(ps.species[1].size() == 3600);
  CHECK(ps.min_initial_area == doctest::Approx(1.0 / 900).epsilon(1e-14));
  for (double a : ps.species[0].area) CHECK(a == ps.min_initial_area);
}

TEST_CASE("init_particles: constant density gives C*|Omega|") {
  SimulationConfig cfg = test::unit_config(0.2);
  cfg.species[0].initial_density = Profile::constant(3.0);
  const ParticleSystem ps = init_particles(cfg);
  const double h = 0.05;
  for (double w : ps.species[0].w) CHECK(w == doctest::Approx(3.0 * h * h).epsilon(1e-14));
  CHECK(ps.species[0].total_weight() == doctest::Approx(12.0).epsilon(1e-12));
}

TEST_CASE("init_particles: example 1 mass against midpoint sum and the Gaussian integral") {
  SimulationConfig cfg = preset("example1");
  cfg.delta = 2.0 / 15;
  const ParticleSystem ps = init_particles(cfg);
  // independent midpoint sum over the 60 x 60 lattice
  const double h = 1.0 / 30;
  double mid = 0.0;
  for (int a = 0; a < 60; ++a)
    for (int b = 0; b < 60; ++b) {
      const double x = -1 + (a + 0.5) * h, y = -1 + (b + 0.5) * h;
      mid += 500 * std::exp(-100 * (x * x + y * y)) * h * h;
    }
  const double exact = 5 * kPi * std::pow(std::erf(10.0), 2);
  CHECK(ps.species[0].total_weight() == doctest::Approx(mid).epsilon(1e-12));
  CHECK(std::abs(mid - exact) / exact < 0.01);
}

TEST_CASE("init_particles keeps zero-weight particles") {
  SimulationConfig cfg = test::unit_config(0.5);
  cfg.species[0].initial_density = Profile::constant(0.0);
  const ParticleSystem ps = init_particles(cfg);
  CHECK(ps.species[0].size() == 256);  // (2 / (0.5 / 4))^2
  CHECK(ps.species[0].total_weight() == 0.0);
}

TEST_CASE("diffusion: single particle has no exchange") {
  ParticleSet s;
  s.push_back({0, 0}, 1.0, 1.0);
  CHECK(diffusion_weight_rhs(s, 1.0, false) == std::vector<double>{0.0});
  CHECK(diffusion_weight_rhs(s, 1.0, true) == std::vector<double>{0.0});
}

TEST_CASE("diffusion: two-particle hand evaluation") {
  ParticleSet s;
  s.push_back({0, 0}, 1.0, 1.0);
  s.push_back({1, 0}, 0.0, 1.0);
  const double expected = 4.0 / kPi * std::exp(-1.0);  // 0.468399...
  for (bool cutoff : {false, true}) {
    const auto beta = diffusion_weight_rhs(s, 1.0, cutoff);
    CHECK(beta[0] == doctest::Approx(-expected).epsilon(1e-12));
    CHECK(beta[1] == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(expected == doctest::Approx(0.468399).epsilon(1e-6));
}

TEST_CASE("diffusion: rates sum to zero and match the serial oracle") {
  const ParticleSet s = test::random_set(500, 11, {-1, 1, -1, 1}, 4e-3);
  const auto beta = diffusion_weight_rhs(s, 2.0, false);
  const auto ref = reference::diffusion_weight_rhs(s, 2.0, false);
  const double scale = abs_sum(beta);
  CHECK(std::abs(std::accumulate(beta.begin(), beta.end(), 0.0)) <= 1e-12 * scale);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(beta[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}

TEST_CASE("diffusion: hashed cutoff sum equals the cutoff oracle, also with merged giants") {
  ParticleSet s = test::random_set(1500, 5, {-1, 1, -1, 1}, 1e-3);
  // a few heavy merged particles with large areas
  s.push_back({0.1, 0.1}, 5.0, 0.2);
  s.push_back({-0.7, 0.4}, 2.0, 0.05);
  s.push_back({0.9, -0.9}, 1.0, 0.8);
  const auto fast = diffusion_weight_rhs(s, 1.0, true);
  const auto ref = reference::diffusion_weight_rhs(s, 1.0, true);
  const double scale = abs_sum(ref) / static_cast<double>(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(fast[i] - ref[i]) <= 1e-12 * scale + 1e-12 * std::abs(ref[i]));
  CHECK(std::abs(std::accumulate(fast.begin(), fast.end(), 0.0)) <= 1e-12 * abs_sum(fast));
}

TEST_CASE("diffusion: cutoff changes results only negligibly") {
  SimulationConfig cfg = test::unit_config(0.2);
  cfg.species[0].initial_density = Profile::gaussian(10, {0, 0}, 5);
  const ParticleSet s = init_particles(cfg).species[0];
  const auto full = diffusion_weight_rhs(s, 1.0, false);
  const auto cut = diffusion_weight_rhs(s, 1.0, true);
  double diff = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) diff += std::abs(full[i] - cut[i]);
  CHECK(diff <= 1e-5 * abs_sum(full));  // tail beyond 4 sigma is e^-16 per pair
}

TEST_CASE("diffusion: equivariant under relabeling") {
  const ParticleSet s = test::random_set(300, 3, {0, 1, 0, 1}, 2e-3);
  std::vector<std::size_t> perm(s.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 rng(1);
  std::shuffle(perm.begin(), perm.end(), rng);
  ParticleSet p;
  for (std::size_t i : perm) p.push_back(s.pos(i), s.w[i], s.area[i]);
  const auto a = diffusion_weight_rhs(s, 1.0, true);
  const auto b = diffusion_weight_rhs(p, 1.0, true);
  for (std::size_t n = 0; n < perm.size(); ++n) CHECK(b[n] == doctest::Approx(a[perm[n]]).epsilon(1e-12));
}

TEST_CASE("diffusion: species never interact and use their own nu") {
  SimulationConfig cfg = preset("example1");
  cfg.delta = 0.5;
  cfg.species[1].nu = 3.0;
  ParticleSystem ps = init_particles(cfg);
  const auto both = diffusion_weight_rhs(ps, cfg);
  const auto alone1 = diffusion_weight_rhs(ps.species[0], 1.0, true);
  const auto alone2 = diffusion_weight_rhs(ps.species[1], 3.0, true);
  CHECK(both[0] == alone1);
  CHECK(both[1] == alone2);
  // scrambling species 2 leaves species 1 untouched
  for (double& w : ps.species[1].w) w *= 7.0;
  CHECK(diffusion_weight_rhs(ps, cfg)[0] == alone1);
}

TEST_CASE("particle_rhs: frozen geometry for constant c, area rate r*A") {
  SimulationConfig cfg = test::unit_config(0.5);
  cfg.species[0].initial_density = Profile::gaussian(1, {0.2, 0}, 3);
  const ParticleSystem ps = init_particles(cfg);
  std::array<VelocitySamples, 2> vel;
  vel[0].resize(ps.species[0].size());
  const StateDerivative d = particle_rhs(ps, vel, cfg);
  CHECK(abs_sum(d.species[0].dx) == 0.0);
  CHECK(abs_sum(d.species[0].darea) == 0.0);
  CHECK(abs_sum(d.species[0].dw) > 0.0);

  ParticleSystem one;
  one.n_species = 1;
  one.species[0].push_back({0, 0}, 1.0, 0.5);
  std::array<VelocitySamples, 2> v1;
  v1[0].resize(1);
  v1[0].r[0] = -1.0;
  const StateDerivative d1 = particle_rhs(one, v1, std::array<std::vector<double>, 2>{{{0.0}, {}}});
  CHECK(d1.species[0].darea[0] == -0.5);
}

TEST_CASE("particle_rhs: two moving particles compose velocity and exchange") {
  ParticleSystem ps;
  ps.n_species = 1;
  ps.species[0].push_back({0, 0}, 1.0, 1.0);
  ps.species[0].push_back({1, 0}, 0.0, 1.0);
  std::array<VelocitySamples, 2> vel;
  vel[0].resize(2);
  vel[0].u = {1.0, 1.0};
  SimulationConfig cfg = test::unit_config();
  const StateDerivative d = particle_rhs(ps, vel, cfg);
  CHECK(d.species[0].dx == std::vector<double>{1.0, 1.0});
  CHECK(d.species[0].dy == std::vector<double>{0.0, 0.0});
  CHECK(d.species[0].dw[1] == doctest::Approx(4.0 / kPi * std::exp(-1.0)));
}

TEST_CASE("particle_rhs rejects misaligned samples") {
  ParticleSystem ps;
  ps.n_species = 1;
  ps.species[0].push_back({0, 0}, 1.0, 1.0);
  std::array<VelocitySamples, 2> vel;
  vel[0].resize(2);
  CHECK_THROWS_AS(particle_rhs(ps, vel, test::unit_config()), ConfigError);
}

TEST_CASE("particle diffusion matches the heat kernel within 5% L1 at t = 1e-3") {
  // rho_t = nu lap rho from a Gaussian of variance s2 per axis; zero velocity,
  // uniform areas, 60 x 60 particles on [-1,1]^2.
  const double nu = 5.0, s2 = 0.04, t_end = 1e-3;
  SimulationConfig cfg = test::unit_config(2.0 / 15);
  cfg.species[0].initial_density = Profile::gaussian(1.0, {0, 0}, 0.5 / s2);
  const ParticleSystem ps = init_particles(cfg);
  ParticleSet s = ps.species[0];
  REQUIRE(s.size() == 3600);

  using W = std::vector<double>;
  const double dt = t_end / 40;
  auto euler = [&](const W& w, double h) {
    ParticleSet tmp = s;
    tmp.w = w;
    const W beta = diffusion_weight_rhs(tmp, nu, true);
    W out = w;
    for (std::size_t i = 0; i < w.size(); ++i) out[i] += h * beta[i];
    return out;
  };
  auto combine = [](double a, const W& x, double b, const W& y) {
    W out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
    return out;
  };
  auto same = [](W w) { return w; };
  W w = s.w;
  for (int n = 0; n < 40; ++n) w = ssp_rk3_step(w, dt, euler, combine, same);

  const double var = s2 + 2 * nu * t_end;
  double err = 0.0, norm = 0.0, moved = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double r2 = s.x[i] * s.x[i] + s.y[i] * s.y[i];
    const double exact = s2 / var * std::exp(-0.5 * r2 / var);
    err += std::abs(w[i] / s.area[i] - exact);
    moved += std::abs(s.w[i] / s.area[i] - exact);
    norm += exact;
  }
  CHECK(err / norm <= 0.05);
  // the check is meaningful: doing nothing would be far off
  CHECK(moved / norm > 0.1);
  CHECK(err < 0.2 * moved);
}
