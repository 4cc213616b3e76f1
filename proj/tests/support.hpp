#pragma once

// Shared helpers for the test programs: random configurations and momenta.

#include <random>
#include <vector>

#include "sfd/alpha_complex.hpp"

namespace sfd::testing {

// Random draws closer than this (relative to the mean radius) to a change
// of the complex are not generic enough for h = 1e-5 central differences.
constexpr double kGenericMargin = 1e-3;

struct RandomSpec {
  int count = 10;
  double min_radius = 0.8, max_radius = 1.6;
  double min_weight = 1.0, max_weight = 1.0;
  double box = 3.0;  // centers uniform in [0, box]^3
};

inline BallSet random_balls(std::mt19937_64& rng, const RandomSpec& spec) {
  std::uniform_real_distribution<double> pos(0.0, spec.box);
  std::uniform_real_distribution<double> rad(spec.min_radius, spec.max_radius);
  std::uniform_real_distribution<double> wt(spec.min_weight, spec.max_weight);
  std::vector<BallD> balls(spec.count);
  for (BallD& b : balls) {
    b.center = Vector3(pos(rng), pos(rng), pos(rng));
    b.radius = rad(rng);
    b.weight = spec.min_weight == spec.max_weight ? spec.min_weight : wt(rng);
  }
  return BallSet(std::move(balls));
}

inline Eigen::VectorXd random_momentum(std::mt19937_64& rng, std::size_t balls) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd t(3 * balls);
  for (Eigen::Index k = 0; k < t.size(); ++k) t[k] = normal(rng);
  return t.normalized();
}

// Rotation by a random unit quaternion.
inline Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q(normal(rng), normal(rng), normal(rng), normal(rng));
  return q.normalized().toRotationMatrix();
}

inline BallSet rigidly_moved(const BallSet& set, const Eigen::Matrix3d& rotation,
                             const Vector3& shift) {
  std::vector<BallD> out(set.begin(), set.end());
  for (BallD& b : out) b.center = rotation * b.center + shift;
  return BallSet(std::move(out));
}

}  // namespace sfd::testing
