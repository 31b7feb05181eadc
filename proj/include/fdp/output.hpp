#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fdp/integrator.hpp"

namespace fdp {

/// Writes a run to `dir` (created if needed):
///
///   series.dat                   one row per step
///   snapNNN_c.dat, _rho1, _rho2  grid fields
///   snapNNN_particles.dat        raw particles of all species
///   manifest.txt                 "file kind t" per written file
///   config.ini                   the configuration, when given
///
/// Numbers are printed with %.17g, so identical runs give identical bytes.
/// Returns the paths written. I/O failures throw std::runtime_error naming
/// the path.
std::vector<std::filesystem::path> emit(const std::vector<Snapshot>& snapshots,
                                        const std::vector<StepRecord>& series,
                                        const std::filesystem::path& dir,
                                        const SimulationConfig* cfg = nullptr);

std::string format_field(const Grid& g, const std::vector<double>& values, double t,
                         const std::string& name);
std::string format_particles(const ParticleSystem& ps, double t);
std::string format_series(const std::vector<StepRecord>& series);

}  // namespace fdp
