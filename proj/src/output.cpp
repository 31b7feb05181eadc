#include "fdp/output.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "fdp/config_io.hpp"

namespace fdp {

namespace {

void put(std::string& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  f.close();
  if (!f) throw std::runtime_error("write failed for '" + path.string() + "'");
}

}  // namespace

std::string format_field(const Grid& g, const std::vector<double>& values, double t,
                         const std::string& name) {
  if (values.size() != g.size())
    throw std::invalid_argument("field '" + name + "' does not match its grid");
  std::string out = "# ";
  out += std::to_string(g.nx()) + " " + std::to_string(g.ny());
  for (double v : {g.box().x_lo, g.box().x_hi, g.box().y_lo, g.box().y_hi, t}) {
    out += ' ';
    put(out, v);
  }
  out += ' ' + name + '\n';
  for (int m = 0; m < g.ny(); ++m)
    for (int l = 0; l < g.nx(); ++l) {
      const Vec2 p = g.center(l, m);
      put(out, p.x);
      out += ' ';
      put(out, p.y);
      out += ' ';
      put(out, values[g.index(l, m)]);
      out += '\n';
    }
  return out;
}

std::string format_particles(const ParticleSystem& ps, double t) {
  std::string out = "# species x y w area t\n";
  for (int k = 0; k < ps.n_species; ++k) {
    const ParticleSet& s = ps.species[k];
    for (std::size_t i = 0; i < s.size(); ++i) {
      out += std::to_string(k + 1);
      for (double v : {s.x[i], s.y[i], s.w[i], s.area[i], t}) {
        out += ' ';
        put(out, v);
      }
      out += '\n';
    }
  }
  return out;
}

std::string format_series(const std::vector<StepRecord>& series) {
  std::string out = "# t dt n1 n2 mass1 mass2 maxrho1 maxrho2 maxpart1 maxpart2 maxc\n";
  for (const StepRecord& r : series) {
    put(out, r.t);
    out += ' ';
    put(out, r.dt);
    out += ' ' + std::to_string(r.count[0]) + ' ' + std::to_string(r.count[1]);
    for (double v : {r.mass[0], r.mass[1], r.max_rho[0], r.max_rho[1], r.max_particle_density[0],
                     r.max_particle_density[1], r.max_c}) {
      out += ' ';
      put(out, v);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::filesystem::path> emit(const std::vector<Snapshot>& snapshots,
                                        const std::vector<StepRecord>& series,
                                        const std::filesystem::path& dir,
                                        const SimulationConfig* cfg) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

  std::vector<std::filesystem::path> written;
  std::string manifest = "# file kind t\n";
  auto add = [&](const std::string& name, const std::string& kind, const std::string& text,
                 const double* t) {
    write_file(dir / name, text);
    written.push_back(dir / name);
    manifest += name + ' ' + kind + ' ';
    if (t) put(manifest, *t);
    else manifest += '-';
    manifest += '\n';
  };

  if (cfg) add("config.ini", "config", format_config(*cfg), nullptr);
  add("series.dat", "series", format_series(series), nullptr);
  for (std::size_t n = 0; n < snapshots.size(); ++n) {
    const Snapshot& s = snapshots[n];
    char prefix[16];
    std::snprintf(prefix, sizeof prefix, "snap%03zu_", n);
    add(prefix + std::string("c.dat"), "field", format_field(s.grid, s.c, s.t, "c"), &s.t);
    for (int k = 0; k < s.particles.n_species; ++k) {
      const std::string name = "rho" + std::to_string(k + 1);
      add(prefix + name + ".dat", "field", format_field(s.grid, s.rho[k], s.t, name), &s.t);
    }
    add(prefix + std::string("particles.dat"), "particles", format_particles(s.particles, s.t), &s.t);
  }
  write_file(dir / "manifest.txt", manifest);
  written.push_back(dir / "manifest.txt");
  return written;
}

}  // namespace fdp
