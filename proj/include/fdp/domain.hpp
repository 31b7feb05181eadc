#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdp {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) = default;
};

inline double norm2(Vec2 v) { return v.x * v.x + v.y * v.y; }
inline double norm(Vec2 v) { return std::sqrt(norm2(v)); }

/// Closed axis-aligned rectangle [x_lo, x_hi] x [y_lo, y_hi].
struct Box {
  double x_lo = -1.0;
  double x_hi = 1.0;
  double y_lo = -1.0;
  double y_hi = 1.0;

  double width() const { return x_hi - x_lo; }
  double height() const { return y_hi - y_lo; }
  double area() const { return width() * height(); }
  bool contains(Vec2 p) const {
    return p.x >= x_lo && p.x <= x_hi && p.y >= y_lo && p.y <= y_hi;
  }
  /// Nearest point of the closed box (coordinate clamp).
  Vec2 nearest_point(Vec2 p) const;
  /// Distance from an interior point to the boundary; 0 on or outside it.
  double distance_to_boundary(Vec2 p) const;

  friend bool operator==(const Box&, const Box&) = default;
};

/// Thrown for invalid input data (configuration, geometry preconditions).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a numerical sub-step cannot proceed (solver failure, dt = 0).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Scalar initial profile evaluated pointwise. Covers every built-in initial
/// condition: a constant, or amplitude * exp(-rate * |x - center|^2).
struct Profile {
  enum class Kind { constant, gaussian };
  Kind kind = Kind::constant;
  double amplitude = 0.0;
  Vec2 center{};
  double rate = 0.0;

  static Profile constant(double value) { return {Kind::constant, value, {}, 0.0}; }
  static Profile gaussian(double amplitude, Vec2 center, double rate) {
    return {Kind::gaussian, amplitude, center, rate};
  }

  double operator()(Vec2 p) const {
    if (kind == Kind::constant) return amplitude;
    return amplitude * std::exp(-rate * norm2(p - center));
  }

  friend bool operator==(const Profile&, const Profile&) = default;
};

struct SpeciesParams {
  double chi = 1.0;    // chemosensitivity
  double nu = 1.0;     // cell diffusion
  double gamma = 1.0;  // chemoattractant production rate
  Profile initial_density = Profile::constant(0.0);

  friend bool operator==(const SpeciesParams&, const SpeciesParams&) = default;
};

/// Physical and numerical parameters of the one/two-species chemotaxis system.
struct SimulationConfig {
  std::string name = "custom";
  int tau = 1;  // 1: parabolic-parabolic, 0: parabolic-elliptic
  int n_species = 2;
  std::array<SpeciesParams, 2> species{};
  double nu_c = 1.0;  // chemoattractant diffusion
  double zeta = 1.0;  // chemoattractant decay
  Profile initial_c = Profile::constant(0.0);
  Box domain{};
  double delta = 0.1;  // FD mesh size
  double final_time = 0.0;
  std::vector<double> snapshot_times;
  double safety_factor = 0.9;
  bool kernel_cutoff = true;
  // a step shorter than this fraction of final_time aborts the run; the
  // bounds collapse geometrically once a particle concentrates without limit
  double min_dt_fraction = 1e-10;

  double particle_mesh_size() const { return delta / 4.0; }
  double merger_mesh_size() const { return delta / 8.0; }
  double initial_particle_area() const {
    const double h = particle_mesh_size();
    return h * h;
  }

  friend bool operator==(const SimulationConfig&, const SimulationConfig&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

/// Collects every violated constraint; never throws.
ValidationReport check(const SimulationConfig& cfg);

/// Returns cfg unchanged if valid, otherwise throws ConfigError naming every
/// violated constraint (one per line).
SimulationConfig validate(const SimulationConfig& cfg);

/// Number of cells of size h across an extent; -1 if h does not divide it.
int cells_across(double extent, double h);

struct CellIndex {
  int l = 0;  // x index, 0-based
  int m = 0;  // y index, 0-based
  friend bool operator==(CellIndex, CellIndex) = default;
};

/// Uniform cell-centered rectangular mesh. Cell (l, m) has center
/// (x_lo + (l + 1/2) dx, y_lo + (m + 1/2) dy); storage is row-major with l
/// fastest.
class Grid {
 public:
  Grid() = default;
  Grid(const Box& box, int nx, int ny);
  /// Mesh of cell size h; h must divide both extents.
  static Grid with_spacing(const Box& box, double h);

  const Box& box() const { return box_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  std::size_t size() const { return static_cast<std::size_t>(nx_) * ny_; }
  std::size_t index(int l, int m) const {
    return static_cast<std::size_t>(m) * nx_ + static_cast<std::size_t>(l);
  }
  std::size_t index(CellIndex c) const { return index(c.l, c.m); }
  Vec2 center(int l, int m) const {
    return {box_.x_lo + (l + 0.5) * dx_, box_.y_lo + (m + 0.5) * dy_};
  }

  /// Cell containing p. Interior cell faces belong to the cell with the larger
  /// index; the outer boundary clamps to the nearest valid cell. Throws
  /// ConfigError if p lies strictly outside the box.
  CellIndex locate(Vec2 p) const;
  /// As locate() but clamps any point (no bounds check). For hot loops over
  /// particles that are already known to be inside the box.
  CellIndex locate_clamped(Vec2 p) const;

  std::vector<double> zeros() const { return std::vector<double>(size(), 0.0); }
  std::vector<double> sample(const Profile& f) const;

 private:
  Box box_{};
  int nx_ = 0;
  int ny_ = 0;
  double dx_ = 0.0;
  double dy_ = 0.0;
};

}  // namespace fdp
