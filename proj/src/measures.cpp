#include "sfd/measures.hpp"

#include <numbers>

namespace sfd {
namespace {
constexpr double kPi = std::numbers::pi;
}

CornerSplit equal_corner_split() {
  return [](const CornerId&) { return CornerWeights{}; };
}

double weighted_volume(const AlphaComplex& cx, const BallSet& set) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double r = set[i].radius;
    sum += set[i].weight * cx.vertices()[i].nu * r * r * r;
  }
  return 4 * kPi / 3 * sum.value();
}

double weighted_area(const AlphaComplex& cx, const BallSet& set) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < set.size(); ++i) {
    const double r = set[i].radius;
    sum += set[i].weight * cx.vertices()[i].sigma * r * r;
  }
  return 4 * kPi * sum.value();
}

double weighted_mean_curvature(const AlphaComplex& cx, const BallSet& set) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < set.size(); ++i)
    sum += 4 * kPi * set[i].weight * cx.vertices()[i].sigma * set[i].radius;
  for (const EdgeRecord& e : cx.edges()) {
    if (e.sigma == 0) continue;
    const double w = set[e.i].weight + set[e.j].weight;
    sum += -kPi / 2 * w * e.geometry.circle_radius * e.geometry.dihedral * e.sigma;
  }
  return sum.value();
}

double weighted_gaussian_curvature(const AlphaComplex& cx, const BallSet& set,
                                   const CornerSplit& split) {
  CompensatedSum sum;
  for (std::size_t i = 0; i < set.size(); ++i)
    sum += 4 * kPi * set[i].weight * cx.vertices()[i].sigma;
  for (const EdgeRecord& e : cx.edges()) {
    if (e.sigma == 0) continue;
    const double w = set[e.i].weight + set[e.j].weight;
    const double lambda = lambda_ij(e.geometry, set[e.i].radius, set[e.j].radius);
    sum += -kPi * w * e.sigma * lambda;
  }
  for (const TriangleRecord& t : cx.triangles()) {
    for (int side = 0; side < 2; ++side) {
      if (!t.exposed[side]) continue;
      const CornerWeights a = split(CornerId{{t.i, t.j, t.k}, side == 0 ? 1 : -1});
      const double w =
          a.alpha_i * set[t.i].weight + a.alpha_j * set[t.j].weight + a.alpha_k * set[t.k].weight;
      // each exposed point carries half of sigma_ijk
      sum += 2 * w * 0.5 * t.geometry.solid_angle;
    }
  }
  return sum.value();
}

MeasureSet weighted_measures(const AlphaComplex& cx, const BallSet& set,
                             const CornerSplit& split) {
  return MeasureSet{weighted_volume(cx, set), weighted_area(cx, set),
                    weighted_mean_curvature(cx, set),
                    weighted_gaussian_curvature(cx, set, split)};
}

MeasureSet weighted_measures(const BallSet& set) {
  return weighted_measures(build_alpha_complex(set), set);
}

double morphometric_energy(const MeasureSet& m, const MorphometricCoefficients& mu) {
  return mu.mu0 * m.volume + mu.mu1 * m.area + mu.mu2 * m.mean + mu.mu3 * m.gauss / 3;
}

}  // namespace sfd
