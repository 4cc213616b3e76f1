#include "sfd/gradients.hpp"

#include <numbers>
#include <string>

namespace sfd {
namespace {

constexpr double kPi = std::numbers::pi;

void add(Eigen::VectorXd& g, int i, const Vector3& v) { g.segment<3>(3 * i) += v; }

Vector3 block(const Eigen::VectorXd& t, int i) { return t.segment<3>(3 * i); }

// In-plane direction of facet ij pointing away from ball k.
Vector3 facet_edge_normal(const BallSet& set, const EdgeRecord& e, int k) {
  const Vector3 w = set[e.i].center - set[k].center;
  return (w - w.dot(e.geometry.u) * e.geometry.u).normalized();
}

// Derivative of the exposed area of S_i along the motion, expressed as
// coefficient vectors of (t_i - t_j) for every edge at i:
//   r_i / d * (xi_j Theta u_ij + sum_k 2 r_ijk nu_ijk u_ijk)
// with u_ij pointing from x_j to x_i.
template <typename Visit>
void for_each_patch_term(const AlphaComplex& cx, const BallSet& set, Visit&& visit) {
  std::vector<std::vector<const TriangleRecord*>> by_edge(cx.edges().size());
  for (const TriangleRecord& t : cx.triangles()) {
    if (t.nu <= 0) continue;
    const int tri[3] = {t.i, t.j, t.k};
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b) {
        const EdgeRecord* e = cx.find_edge(tri[a], tri[b]);
        by_edge[e - cx.edges().data()].push_back(&t);
      }
  }
  for (std::size_t s = 0; s < cx.edges().size(); ++s) {
    const EdgeRecord& e = cx.edges()[s];
    if (e.nu <= 0) continue;
    Vector3 rotation = Vector3::Zero();
    for (const TriangleRecord* t : by_edge[s]) {
      const int k = t->i + t->j + t->k - e.i - e.j;
      rotation += 2 * t->geometry.half_chord * t->nu * facet_edge_normal(set, e, k);
    }
    const double d = e.geometry.dist;
    const double theta = 2 * kPi * e.sigma;
    // ordered (i, j): u_ij = u; ordered (j, i): u_ji = -u
    const Vector3 vi = set[e.i].radius / d * (e.geometry.xi_j * theta * e.geometry.u + rotation);
    const Vector3 vj = set[e.j].radius / d * (-e.geometry.xi_i * theta * e.geometry.u + rotation);
    visit(e.i, e.j, vi);
    visit(e.j, e.i, vj);
  }
}

// Patch part of sum_i c_i sigma_i with c_i = 4 pi w_i r_i^power.
Eigen::VectorXd patch_gradient(const AlphaComplex& cx, const BallSet& set, int power) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(3 * set.size());
  for_each_patch_term(cx, set, [&](int i, int j, const Vector3& v) {
    const double r = set[i].radius;
    const double c = set[i].weight * std::pow(r, power - 2);
    add(g, i, c * v);
    add(g, j, -c * v);
  });
  return g;
}

struct CornerTerm {
  const EdgeRecord* edge;
  int k;
  Vector3 point;
};

template <typename Visit>
void for_each_corner(const AlphaComplex& cx, Visit&& visit) {
  for (const TriangleRecord& t : cx.triangles()) {
    for (int side = 0; side < 2; ++side) {
      if (!t.exposed[side]) continue;
      const Vector3& p = t.point(side == 0 ? 1 : -1);
      const int tri[3] = {t.i, t.j, t.k};
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          visit(CornerTerm{cx.find_edge(tri[a], tri[b]), tri[3 - a - b], p});
    }
  }
}

// Velocity of the corner along its tangent toward ball k, as linear forms:
// v = <a, T_k> / den + ratio * rho'/rho.
struct CornerSlide {
  Vector3 a;
  double den;
  double radial;  // <a, x_ij - P> / den
};

CornerSlide corner_slide(const BallSet& set, const CornerTerm& c) {
  const PairGeometry<double>& g = c.edge->geometry;
  const Vector3 a = set[c.k].center - c.point;
  Vector3 tangent;
  try {
    tangent = tangent_at_corner(g, c.point, set[c.k].center);
  } catch (const SignUndetermined&) {
    throw DegenerateState("corner is being created or destroyed on circle (" +
                              std::to_string(c.edge->i) + "," + std::to_string(c.edge->j) +
                              ") by ball " + std::to_string(c.k),
                          {c.edge->i, c.edge->j, c.k});
  }
  const double den = a.dot(tangent);
  return CornerSlide{a, den, a.dot(g.circle_center - c.point) / den};
}

}  // namespace

GradientField volume_gradient(const AlphaComplex& cx, const BallSet& set) {
  GradientField out;
  out.g = Eigen::VectorXd::Zero(3 * set.size());
  for (const EdgeRecord& e : cx.edges()) {
    if (e.nu <= 0) continue;
    const double scale = e.facet_area / e.geometry.dist;
    const Vector3 c = e.geometry.circle_center + e.centroid_offset;
    const Vector3 v = scale * (set[e.i].weight * (c - set[e.j].center) -
                               set[e.j].weight * (c - set[e.i].center));
    add(out.g, e.i, v);
    add(out.g, e.j, -v);
  }
  return out;
}

GradientField area_gradient(const AlphaComplex& cx, const BallSet& set) {
  return GradientField{patch_gradient(cx, set, 2), {}, {}, {}};
}

GradientField mean_curvature_gradient(const AlphaComplex& cx, const BallSet& set) {
  const Eigen::Index dim = Eigen::Index(3 * set.size());
  Eigen::VectorXd p = patch_gradient(cx, set, 1);
  Eigen::VectorXd q = Eigen::VectorXd::Zero(dim);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(dim);

  for (const EdgeRecord& e : cx.edges()) {
    if (e.sigma <= 0) continue;
    const auto der = pair_derivatives(e.geometry, set[e.i].radius, set[e.j].radius);
    const double w = set[e.i].weight + set[e.j].weight;
    const double coef = -kPi / 2 * w * e.sigma *
                        (e.geometry.dihedral * der.d_radius +
                         e.geometry.circle_radius * der.d_dihedral);
    add(q, e.i, coef * e.geometry.u);
    add(q, e.j, -coef * e.geometry.u);
  }

  for_each_corner(cx, [&](const CornerTerm& c) {
    const EdgeRecord& e = *c.edge;
    const PairGeometry<double>& g = e.geometry;
    const CornerSlide slide = corner_slide(set, c);
    const auto der = pair_derivatives(g, set[e.i].radius, set[e.j].radius);
    const double w = set[e.i].weight + set[e.j].weight;
    const double coef = -w * g.dihedral / (4 * slide.den);

    const double shift = der.center_shift;
    const Vector3 dv =
        (set[c.k].center - shift * set[e.j].center + (shift - 1) * set[e.i].center) / g.dist;
    const Vector3& a = slide.a;
    const Vector3& u = g.u;
    const Vector3 b = (-shift + u.dot(dv)) * a - a.dot(u) * dv;
    const Vector3 cc = (shift - 1 - u.dot(dv)) * a + a.dot(u) * dv;
    add(s, c.k, coef * a);
    add(s, e.j, coef * b);
    add(s, e.i, coef * cc);

    const double radial = -w * g.dihedral / 4 * slide.radial * der.d_radius / g.circle_radius;
    add(s, e.i, radial * u);
    add(s, e.j, -radial * u);
  });

  GradientField out;
  out.g = p + q + s;
  out.p = std::move(p);
  out.q = std::move(q);
  out.s = std::move(s);
  return out;
}

std::vector<double> sigma_i_prime(const AlphaComplex& cx, const BallSet& set,
                                  const Eigen::VectorXd& t) {
  std::vector<double> out(set.size(), 0.0);
  for_each_patch_term(cx, set, [&](int i, int j, const Vector3& v) {
    const double r = set[i].radius;
    out[i] += v.dot(block(t, i) - block(t, j)) / (4 * kPi * r * r);
  });
  return out;
}

std::vector<PairRates> pair_scalar_primes(const AlphaComplex& cx, const BallSet& set,
                                          const Eigen::VectorXd& t) {
  std::vector<PairRates> out;
  out.reserve(cx.edges().size());
  for (const EdgeRecord& e : cx.edges()) {
    const auto der = pair_derivatives(e.geometry, set[e.i].radius, set[e.j].radius);
    const double stretch = e.geometry.u.dot(block(t, e.i) - block(t, e.j));
    out.push_back(PairRates{der.d_radius * stretch, der.d_dihedral * stretch});
  }
  return out;
}

RetargetedMotion retarget_motion(const BallSet& set, int i, int j, const Eigen::VectorXd& t) {
  RetargetedMotion m;
  const Vector3 xi = set[i].center, xj = set[j].center;
  const double d = (xi - xj).norm();
  const Vector3 u = (xi - xj) / d;
  const double ri = set[i].radius, rj = set[j].radius;
  m.center_shift = 0.5 * (1 - (ri * ri - rj * rj) / (d * d));
  const Vector3 ti = block(t, i);
  m.omega = (block(t, j) - ti).cross(u) / d;
  auto relative = [&](int k) {
    return Vector3(block(t, k) - ti - m.omega.cross(set[k].center - xi));
  };
  m.stretch = relative(j);
  m.velocity.resize(set.size());
  for (std::size_t k = 0; k < set.size(); ++k)
    m.velocity[k] = relative(int(k)) - m.center_shift * m.stretch;
  return m;
}

std::vector<double> sigma_ij_prime(const AlphaComplex& cx, const BallSet& set,
                                   const Eigen::VectorXd& t) {
  std::vector<double> out(cx.edges().size(), 0.0);
  const auto rates = pair_scalar_primes(cx, set, t);
  for_each_corner(cx, [&](const CornerTerm& c) {
    const EdgeRecord& e = *c.edge;
    const std::size_t s = std::size_t(&e - cx.edges().data());
    const CornerSlide slide = corner_slide(set, c);
    const RetargetedMotion m = retarget_motion(set, e.i, e.j, t);
    const double rho = e.geometry.circle_radius;
    const double v =
        slide.a.dot(m.velocity[c.k]) / slide.den + slide.radial * rates[s].radius / rho;
    out[s] += v / (2 * kPi * rho);
  });
  return out;
}

}  // namespace sfd
