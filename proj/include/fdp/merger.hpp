#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fdp/domain.hpp"
#include "fdp/particles.hpp"

namespace fdp {

/// Trajectory parameters at which two straight forward-Euler paths
/// x_i + tau_i u_i and x_j + tau_j u_j cross.
struct IntersectionTimes {
  double tau_i = 0.0;
  double tau_j = 0.0;
};

/// Crossing parameters of the two trajectories, or nullopt when the paths are
/// (numerically) parallel, i.e. |u_i v_j - u_j v_i| <= mu.
std::optional<IntersectionTimes> intersection_params(Vec2 xi, Vec2 ui, Vec2 xj, Vec2 uj,
                                                     double mu);

/// Degeneracy threshold for the crossing test: 1e-12 * V^2 with V the largest
/// particle speed (the determinant carries units of speed squared).
inline double intersection_threshold(double max_speed) { return 1e-12 * max_speed * max_speed; }

/// Coalesces two same-species particles into one at their center of mass
/// (midpoint if both are massless) carrying the summed weight and area.
Particle merge_pair(const Particle& a, const Particle& b);

/// Width of the neighbor-search cells for a step of length dt: twice the
/// largest one-step travel, so any pair that can meet within dt sits in
/// adjacent cells.
double search_cell_width(double min_initial_area, double dt, double max_component_speed);

/// Uniform cell hash over one species' particles for neighbor queries.
class SearchGrid {
 public:
  SearchGrid(const ParticleSet& set, double cell_width);

  /// Particles in the 3x3 block of cells around particle i, excluding i,
  /// in ascending index order.
  std::vector<std::size_t> candidates(std::size_t i) const;

  double cell_width() const { return width_; }
  int cells_x() const { return ncx_; }
  int cells_y() const { return ncy_; }

 private:
  std::pair<int, int> cell_of(Vec2 p) const;

  const ParticleSet* set_;
  double width_ = 0.0;
  double x0_ = 0.0, y0_ = 0.0;
  int ncx_ = 1, ncy_ = 1;
  std::vector<std::size_t> start_, items_;
};

/// Outcome of the pre-step merger for one species.
struct Step1Result {
  ParticleSet set;
  int merges = 0;
};

/// Pre-step merger: while some same-species pair has crossing parameters
/// tau_i, tau_j > 0 with max(tau_i, tau_j) < dt, coalesce the pair with the
/// smallest max(tau) (ties by particle id) and re-check the merged particle,
/// which moves with the mass-weighted velocity of its parts. Candidate pairs
/// come from a SearchGrid. Survivors keep the relative order of their
/// lowest-index constituent.
Step1Result merger_step1(const ParticleSet& set, const VelocitySamples& vel, double dt,
                         double min_initial_area, double mu);

struct SystemStep1Result {
  ParticleSystem particles;
  int merges = 0;
};

/// All species; mu from the largest particle speed over the whole system.
SystemStep1Result merger_step1(const ParticleSystem& ps, const std::array<VelocitySamples, 2>& vel,
                               double dt);

/// Outcome of the post-stage merger for one species. new_index maps each
/// input particle to the output particle that absorbed it.
struct Step2Result {
  ParticleSet set;
  std::vector<std::uint32_t> new_index;
  int merges = 0;
};

/// Collapses the particles sharing a merger cell into one particle at their
/// center of mass with summed weight and area. Output order follows the
/// lowest input index of each group. Particles must lie inside the merger
/// grid's box.
Step2Result merger_step2(const ParticleSet& set, const Grid& merger_grid);

/// True if no merger cell holds two or more particles of the set.
bool merger_invariant_holds(const ParticleSet& set, const Grid& merger_grid);

/// Moves every particle outside the closed box to the nearest boundary point.
/// Returns the number of relocated particles.
int pull_back(ParticleSet& set, const Box& box);
int pull_back(ParticleSystem& ps, const Box& box);

}  // namespace fdp
