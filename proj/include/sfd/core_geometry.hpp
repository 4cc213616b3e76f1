#pragma once

// Closed-form geometry of one, two and three balls.
//
// All routines are templated on the scalar type so they can be instantiated
// with long double for reference computations in tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sfd/errors.hpp"

namespace sfd {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;
using Vector3 = Vec3<double>;

inline constexpr double kDefaultTolerance = 1e-12;

template <typename Scalar>
struct Ball {
  Vec3<Scalar> center = Vec3<Scalar>::Zero();
  Scalar radius = Scalar(1);
  Scalar weight = Scalar(1);
};

// Power distance of a point from a ball; negative inside.
template <typename Scalar>
Scalar power_distance(const Ball<Scalar>& b, const Vec3<Scalar>& a) {
  return (a - b.center).squaredNorm() - b.radius * b.radius;
}

// Circle S_i ∩ S_j. u points from x_j towards x_i; xi_i is the signed
// distance from x_i to the radical plane along -u.
template <typename Scalar>
struct PairGeometry {
  Scalar dist{};
  Scalar xi_i{};
  Scalar xi_j{};
  Scalar circle_radius{};
  Scalar dihedral{};  // angle between the sphere normals along the circle
  Vec3<Scalar> circle_center = Vec3<Scalar>::Zero();
  Vec3<Scalar> u = Vec3<Scalar>::Zero();
};

template <typename Scalar>
struct PairDerivatives {
  Scalar d_radius{};     // d r_ij / d dist
  Scalar d_dihedral{};   // d phi_ij / d dist
  Scalar d_cap_unit{};   // d sigma_i / d dist for a single uncovered cap
  Scalar center_shift{}; // D: x_ij moves by D times the stretch of x_j
};

// S_i ∩ S_j ∩ S_k. Points are ordered so that (u_ij, u_ik, plus - center)
// is a right-handed frame.
template <typename Scalar>
struct TripleGeometry {
  Vec3<Scalar> plus = Vec3<Scalar>::Zero();
  Vec3<Scalar> minus = Vec3<Scalar>::Zero();
  Vec3<Scalar> center = Vec3<Scalar>::Zero();  // midpoint of the two points
  Vec3<Scalar> normal = Vec3<Scalar>::Zero();  // unit, from center to plus
  Scalar half_chord{};                         // r_ijk
  Vec3<Scalar> u_ijk = Vec3<Scalar>::Zero();
  Scalar solid_angle{};  // same at both points by mirror symmetry
};

template <typename Scalar>
Scalar solid_angle(const Vec3<Scalar>& a, const Vec3<Scalar>& b, const Vec3<Scalar>& c,
                   Scalar tol = Scalar(kDefaultTolerance)) {
  const Scalar triple = a.dot(b.cross(c));
  if (!(std::abs(triple) > tol)) throw DegenerateFrame("solid angle of a coplanar frame");
  const Scalar den = Scalar(1) + a.dot(b) + b.dot(c) + c.dot(a);
  return Scalar(2) * std::atan2(std::abs(triple), den);
}

template <typename Scalar>
PairGeometry<Scalar> pair_geometry(const Ball<Scalar>& bi, const Ball<Scalar>& bj,
                                   Scalar tol = Scalar(kDefaultTolerance)) {
  using std::abs;
  using std::sqrt;
  const Vec3<Scalar> diff = bi.center - bj.center;
  const Scalar d = diff.norm();
  const Scalar ri = bi.radius, rj = bj.radius;
  const Scalar scale = ri + rj;
  const Scalar inner = d - abs(ri - rj);
  const Scalar outer = scale - d;
  if (!(inner > tol * scale) || !(outer > tol * scale))
    throw DisjointOrNested("spheres do not meet in a circle");

  PairGeometry<Scalar> g;
  g.dist = d;
  g.u = diff / d;
  const Scalar disc = inner * (d + abs(ri - rj)) * outer * (scale + d);
  const Scalar four_area = sqrt(disc);
  g.circle_radius = four_area / (Scalar(2) * d);
  g.xi_i = (d * d + ri * ri - rj * rj) / (Scalar(2) * d);
  g.xi_j = d - g.xi_i;
  g.dihedral = std::atan2(Scalar(2) * g.circle_radius * d, ri * ri + rj * rj - d * d);
  g.circle_center = bi.center - g.xi_i * g.u;
  return g;
}

template <typename Scalar>
PairDerivatives<Scalar> pair_derivatives(const PairGeometry<Scalar>& g, Scalar ri, Scalar rj) {
  const Scalar d = g.dist;
  const Scalar dr2 = ri * ri - rj * rj;
  const Scalar four_area = Scalar(2) * d * g.circle_radius;
  PairDerivatives<Scalar> out;
  out.d_radius = (dr2 * dr2 - d * d * d * d) / (Scalar(2) * d * d * four_area);
  out.d_dihedral = Scalar(2) * d / four_area;
  out.center_shift = (Scalar(1) - dr2 / (d * d)) / Scalar(2);
  out.d_cap_unit = out.center_shift / (Scalar(2) * ri);
  return out;
}

template <typename Scalar>
PairDerivatives<Scalar> pair_derivatives(const Ball<Scalar>& bi, const Ball<Scalar>& bj,
                                         Scalar tol = Scalar(kDefaultTolerance)) {
  return pair_derivatives(pair_geometry(bi, bj, tol), bi.radius, bj.radius);
}

template <typename Scalar>
TripleGeometry<Scalar> triple_geometry(const Ball<Scalar>& bi, const Ball<Scalar>& bj,
                                       const Ball<Scalar>& bk,
                                       Scalar tol = Scalar(kDefaultTolerance)) {
  const Vec3<Scalar> ej = bj.center - bi.center;
  const Vec3<Scalar> ek = bk.center - bi.center;
  const Scalar jj = ej.squaredNorm(), kk = ek.squaredNorm(), jk = ej.dot(ek);
  const Scalar det = jj * kk - jk * jk;
  if (!(det > tol * jj * kk)) throw NoTriplePoint("collinear centers");
  const Scalar ri2 = bi.radius * bi.radius;
  const Scalar rhs_j = (jj + ri2 - bj.radius * bj.radius) / Scalar(2);
  const Scalar rhs_k = (kk + ri2 - bk.radius * bk.radius) / Scalar(2);
  const Scalar a = (kk * rhs_j - jk * rhs_k) / det;
  const Scalar b = (jj * rhs_k - jk * rhs_j) / det;

  TripleGeometry<Scalar> g;
  g.center = bi.center + a * ej + b * ek;
  const Scalar h2 = ri2 - (g.center - bi.center).squaredNorm();
  if (!(h2 > tol * ri2)) throw NoTriplePoint("spheres share no point");
  g.half_chord = std::sqrt(h2);
  g.normal = ej.cross(ek).normalized();
  g.plus = g.center + g.half_chord * g.normal;
  g.minus = g.center - g.half_chord * g.normal;

  const Vec3<Scalar> uij = -ej.normalized();
  const Vec3<Scalar> uik = -ek.normalized();
  g.u_ijk = (uik - uik.dot(uij) * uij).normalized();

  const Vec3<Scalar> ni = (g.plus - bi.center) / bi.radius;
  const Vec3<Scalar> nj = (g.plus - bj.center) / bj.radius;
  const Vec3<Scalar> nk = (g.plus - bk.center) / bk.radius;
  g.solid_angle = solid_angle(ni, nj, nk, tol);
  return g;
}

// Unit tangent of the circle at corner P, oriented into ball k.
template <typename Scalar>
Vec3<Scalar> tangent_at_corner(const PairGeometry<Scalar>& pair, const Vec3<Scalar>& p,
                               const Vec3<Scalar>& center_k,
                               Scalar tol = Scalar(kDefaultTolerance)) {
  const Vec3<Scalar> radial = pair.circle_center - p;
  const Vec3<Scalar> t = radial.cross(pair.u) / radial.norm();
  const Vec3<Scalar> to_k = center_k - p;
  const Scalar s = to_k.dot(t);
  if (!(std::abs(s) > tol * to_k.norm())) throw SignUndetermined("sphere tangent to circle");
  return s > 0 ? t : Vec3<Scalar>(-t);
}

// d/d r_ij of arcsin(h_k / r_ij) with h_k held fixed.
template <typename Scalar>
Scalar arc_angle_derivative(const PairGeometry<Scalar>& pair, const Vec3<Scalar>& p,
                            const Vec3<Scalar>& center_k,
                            Scalar tol = Scalar(kDefaultTolerance)) {
  const Vec3<Scalar> a = center_k - p;
  const Scalar rho = pair.circle_radius;
  const Scalar h = (pair.circle_center - p).dot(a);
  const Scalar full = rho * rho * a.squaredNorm();
  const Scalar rad = full - h * h;
  if (!(rad > tol * full)) throw TangentialContact("sphere tangent to circle");
  return -h / (rho * std::sqrt(rad));
}

// Rate at which the uncovered arc grows at corner P when the circle radius
// grows with its center, its plane and ball k held fixed.
template <typename Scalar>
Scalar corner_slide_per_radius(const PairGeometry<Scalar>& pair, const Vec3<Scalar>& p,
                               const Vec3<Scalar>& center_k,
                               Scalar tol = Scalar(kDefaultTolerance)) {
  const Vec3<Scalar> a = center_k - p;
  const Vec3<Scalar> t = tangent_at_corner(pair, p, center_k, tol);
  const Scalar rho = pair.circle_radius;
  return a.dot(pair.circle_center - p) / (rho * rho * a.dot(t));
}

template <typename Scalar>
Scalar cap_area_fraction(Scalar r, Scalar xi, Scalar tol = Scalar(kDefaultTolerance)) {
  if (!(r > 0) || std::abs(xi) > r * (Scalar(1) + tol))
    throw OutOfRange("cap height outside the sphere");
  return std::clamp((r + xi) / (Scalar(2) * r), Scalar(0), Scalar(1));
}

template <typename Scalar>
Scalar lambda_ij(const PairGeometry<Scalar>& pair, Scalar ri, Scalar rj) {
  return pair.xi_i / ri + pair.xi_j / rj;
}

}  // namespace sfd
