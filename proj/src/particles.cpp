#include "fdp/particles.hpp"

#include <numeric>

namespace fdp {

double ParticleSet::total_weight() const { return std::accumulate(w.begin(), w.end(), 0.0); }

double ParticleSet::total_area() const { return std::accumulate(area.begin(), area.end(), 0.0); }

Vec2 ParticleSet::centroid() const {
  if (empty()) return {};
  const double mass = total_weight();
  Vec2 acc{};
  if (mass > 0.0) {
    for (std::size_t i = 0; i < size(); ++i) acc = acc + w[i] * pos(i);
    return (1.0 / mass) * acc;
  }
  for (std::size_t i = 0; i < size(); ++i) acc = acc + pos(i);
  return (1.0 / static_cast<double>(size())) * acc;
}

}  // namespace fdp
