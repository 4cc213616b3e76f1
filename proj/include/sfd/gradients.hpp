#pragma once

// Derivatives of the weighted measures with respect to the ball centers.
// Every gradient is a 3n-vector laid out like BallSet::state().
//
// The Gaussian curvature has no gradient here.

#include <optional>
#include <vector>

#include "sfd/alpha_complex.hpp"

namespace sfd {

struct GradientField {
  Eigen::VectorXd g;
  // Mean curvature only: patch, arc-length and arc-fraction contributions.
  std::optional<Eigen::VectorXd> p, q, s;

  Vector3 at(int i) const { return g.segment<3>(3 * i); }
};

GradientField volume_gradient(const AlphaComplex& cx, const BallSet& set);
GradientField area_gradient(const AlphaComplex& cx, const BallSet& set);
GradientField mean_curvature_gradient(const AlphaComplex& cx, const BallSet& set);

// Time derivatives along a momentum t (a 3n-vector of center velocities).

std::vector<double> sigma_i_prime(const AlphaComplex& cx, const BallSet& set,
                                  const Eigen::VectorXd& t);

struct PairRates {
  double radius = 0;    // r_ij'
  double dihedral = 0;  // phi_ij'
};
// Aligned with cx.edges().
std::vector<PairRates> pair_scalar_primes(const AlphaComplex& cx, const BallSet& set,
                                          const Eigen::VectorXd& t);

// Motion equivalent to t for the circle of (i, j) that keeps its center and
// axis fixed: the frame rotation omega is removed and the stretch V_ij is
// shared between x_i and x_j.
struct RetargetedMotion {
  Vector3 omega = Vector3::Zero();
  Vector3 stretch = Vector3::Zero();  // V_ij
  double center_shift = 0;            // D
  std::vector<Vector3> velocity;      // T_ijk for every ball k
};
RetargetedMotion retarget_motion(const BallSet& set, int i, int j, const Eigen::VectorXd& t);

// Aligned with cx.edges().
std::vector<double> sigma_ij_prime(const AlphaComplex& cx, const BallSet& set,
                                   const Eigen::VectorXd& t);

}  // namespace sfd
