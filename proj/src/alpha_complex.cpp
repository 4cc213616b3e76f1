#include "sfd/alpha_complex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <set>
#include <string>

#include "sfd/regular_triangulation.hpp"

namespace sfd {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2 * std::numbers::pi;

// Fractions below this are round-off of an empty clip.
constexpr double kFractionFloor = 1e-12;

double snap_fraction(double x) { return x < kFractionFloor ? 0.0 : std::min(x, 1.0); }

// nu_i = sigma_i + facet term cancels to second order near an internal
// tangency, so round-off is judged against the size of the summands. An
// exposed sphere always meets its own cell.
double snap_cell_fraction(double sigma, double facet, double facet_abs) {
  const double nu = sigma + facet;
  if (nu > kFractionFloor * (sigma + facet_abs)) return std::min(nu, 1.0);
  return sigma > 0 ? std::numeric_limits<double>::min() : 0.0;
}

std::vector<int> intersect(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<std::vector<int>> overlap_lists(const BallSet& set) {
  const int n = int(set.size());
  std::vector<std::vector<int>> out(n);
  if (n == 0) return out;
  const double cell = 2 * set.max_radius();
  std::map<std::array<long long, 3>, std::vector<int>> grid;
  auto key = [&](const Vector3& c) {
    return std::array<long long, 3>{(long long)std::floor(c.x() / cell),
                                    (long long)std::floor(c.y() / cell),
                                    (long long)std::floor(c.z() / cell)};
  };
  for (int i = 0; i < n; ++i) grid[key(set[i].center)].push_back(i);
  for (int i = 0; i < n; ++i) {
    const auto k = key(set[i].center);
    for (long long dx = -1; dx <= 1; ++dx)
      for (long long dy = -1; dy <= 1; ++dy)
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if (j <= i) continue;
            const double d = (set[i].center - set[j].center).norm();
            if (d < set[i].radius + set[j].radius) {
              out[i].push_back(j);
              out[j].push_back(i);
            }
          }
        }
  }
  for (auto& l : out) std::sort(l.begin(), l.end());
  return out;
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  int components() {
    int c = 0;
    for (int i = 0; i < int(parent.size()); ++i) c += find(i) == i;
    return c;
  }
};

std::vector<Eigen::Vector2d> clip_polygon(const std::vector<Eigen::Vector2d>& poly, double a,
                                          double b, double c) {
  std::vector<Eigen::Vector2d> out;
  const int m = int(poly.size());
  for (int s = 0; s < m; ++s) {
    const Eigen::Vector2d& p = poly[s];
    const Eigen::Vector2d& q = poly[(s + 1) % m];
    const double fp = a * p.x() + b * p.y() - c;
    const double fq = a * q.x() + b * q.y() - c;
    if (fp <= 0) out.push_back(p);
    if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) out.push_back(p + (fp / (fp - fq)) * (q - p));
  }
  return out;
}

double cross2(const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
  return p.x() * q.y() - p.y() * q.x();
}

}  // namespace

ClippedDisk clip_disk(double rho, const std::vector<Eigen::Vector2d>& polygon) {
  ClippedDisk out;
  if (polygon.size() < 3) return out;
  const double rho2 = rho * rho;
  double area = 0;
  Eigen::Vector2d moment = Eigen::Vector2d::Zero();
  const int m = int(polygon.size());
  for (int s = 0; s < m; ++s) {
    const Eigen::Vector2d a = polygon[s];
    const Eigen::Vector2d ab = polygon[(s + 1) % m] - a;
    const double qa = ab.squaredNorm();
    if (qa == 0) continue;
    std::vector<double> cuts{0.0};
    const double qb = a.dot(ab), qc = a.squaredNorm() - rho2;
    const double disc = qb * qb - qa * qc;
    if (disc > 0) {
      const double root = std::sqrt(disc);
      for (double t : {(-qb - root) / qa, (-qb + root) / qa})
        if (t > 0 && t < 1) cuts.push_back(t);
    }
    cuts.push_back(1.0);
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const Eigen::Vector2d p = a + cuts[c] * ab;
      const Eigen::Vector2d q = a + cuts[c + 1] * ab;
      const Eigen::Vector2d mid = a + 0.5 * (cuts[c] + cuts[c + 1]) * ab;
      if (mid.squaredNorm() <= rho2) {
        const double tri = 0.5 * cross2(p, q);
        area += tri;
        moment += tri * (p + q) / 3;
      } else {
        const double theta = std::atan2(cross2(p, q), p.dot(q));
        area += 0.5 * rho2 * theta;
        const Eigen::Vector2d ph = p.normalized(), qh = q.normalized();
        moment += (rho2 * rho / 3) * Eigen::Vector2d(qh.y() - ph.y(), ph.x() - qh.x());
      }
    }
  }
  if (area > 0) {
    out.area = area;
    out.centroid = moment / area;
  }
  return out;
}

const EdgeRecord* AlphaComplex::find_edge(int i, int j) const {
  if (i > j) std::swap(i, j);
  auto it = edge_index_.find(std::uint64_t(i) * n_ + std::uint64_t(j));
  return it == edge_index_.end() ? nullptr : &edges_[it->second];
}

const TriangleRecord* AlphaComplex::find_triangle(int i, int j, int k) const {
  int s[3] = {i, j, k};
  std::sort(s, s + 3);
  auto it = triangle_index_.find((std::uint64_t(s[0]) * n_ + std::uint64_t(s[1])) * n_ +
                                 std::uint64_t(s[2]));
  return it == triangle_index_.end() ? nullptr : &triangles_[it->second];
}

std::vector<Simplex> AlphaComplex::simplices() const {
  std::vector<Simplex> out;
  for (int i = 0; i < int(vertices_.size()); ++i)
    if (vertices_[i].nu > 0) out.push_back(Simplex{i});
  for (const auto& e : edges_)
    if (e.nu > 0) out.push_back(Simplex{e.i, e.j});
  for (const auto& t : triangles_)
    if (t.nu > 0) out.push_back(Simplex{t.i, t.j, t.k});
  for (const auto& t : tetrahedra_)
    if (t.nu > 0) out.push_back(Simplex{t.i, t.j, t.k, t.l});
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Simplex> AlphaComplex::boundary_simplices() const {
  std::vector<Simplex> out;
  for (int i = 0; i < int(vertices_.size()); ++i)
    if (vertices_[i].sigma > 0) out.push_back(Simplex{i});
  for (const auto& e : edges_)
    if (e.sigma > 0) out.push_back(Simplex{e.i, e.j});
  for (const auto& t : triangles_)
    if (t.sigma() > 0) out.push_back(Simplex{t.i, t.j, t.k});
  std::sort(out.begin(), out.end());
  return out;
}

double AlphaComplex::nu(const Simplex& s) const {
  switch (s.dim) {
    case 0: return vertices_.at(s.v[0]).nu;
    case 1: {
      const EdgeRecord* e = find_edge(s.v[0], s.v[1]);
      return e ? e->nu : 0.0;
    }
    case 2: {
      const TriangleRecord* t = find_triangle(s.v[0], s.v[1], s.v[2]);
      return t ? t->nu : 0.0;
    }
    case 3:
      for (const auto& t : tetrahedra_)
        if (Simplex{t.i, t.j, t.k, t.l} == s) return t.nu;
      return 0.0;
  }
  return 0.0;
}

double AlphaComplex::sigma(const Simplex& s) const {
  switch (s.dim) {
    case 0: return vertices_.at(s.v[0]).sigma;
    case 1: {
      const EdgeRecord* e = find_edge(s.v[0], s.v[1]);
      return e ? e->sigma : 0.0;
    }
    case 2: {
      const TriangleRecord* t = find_triangle(s.v[0], s.v[1], s.v[2]);
      return t ? t->sigma() : 0.0;
    }
  }
  return 0.0;
}

bool AlphaComplex::contains(const Simplex& s) const { return nu(s) > 0; }

int AlphaComplex::exposed_corner_count() const {
  int c = 0;
  for (const auto& t : triangles_) c += int(t.exposed[0]) + int(t.exposed[1]);
  return c;
}

int AlphaComplex::exposed_arc_count() const {
  int c = 0;
  for (const auto& e : edges_) c += int(e.arcs.size());
  return c;
}

AlphaComplex enumerate_candidates(const BallSet& set, const ComplexOptions& options) {
  AlphaComplex cx;
  const int n = int(set.size());
  cx.n_ = std::uint64_t(std::max(n, 1));
  cx.vertices_.assign(n, VertexRecord{});
  cx.neighbors_ = overlap_lists(set);
  const double tol = options.tolerance;

  for (int i = 0; i < n; ++i) {
    for (int j : cx.neighbors_[i]) {
      if (j <= i) continue;
      const BallD &bi = set[i], &bj = set[j];
      try {
        EdgeRecord e;
        e.i = i;
        e.j = j;
        e.geometry = pair_geometry(bi, bj, tol);
        const Vector3& u = e.geometry.u;
        int axis = 0;
        u.cwiseAbs().minCoeff(&axis);
        const Vector3 ref = Vector3::Unit(axis);
        e.e1 = (ref - ref.dot(u) * u).normalized();
        e.e2 = u.cross(e.e1);
        cx.edge_index_[std::uint64_t(i) * cx.n_ + std::uint64_t(j)] = int(cx.edges_.size());
        cx.edges_.push_back(std::move(e));
      } catch (const DisjointOrNested&) {
        const double d = (bi.center - bj.center).norm();
        if (d < bi.radius + bj.radius - tol * (bi.radius + bj.radius)) {
          if (bi.radius < bj.radius || (bi.radius == bj.radius && i > j))
            cx.vertices_[i].sphere_buried = true;
          else
            cx.vertices_[j].sphere_buried = true;
        }
      }
    }
  }

  for (const EdgeRecord& e : cx.edges_) {
    for (int k : intersect(cx.neighbors_[e.i], cx.neighbors_[e.j])) {
      if (k <= e.j || !cx.find_edge(e.i, k) || !cx.find_edge(e.j, k)) continue;
      try {
        TriangleRecord t;
        t.i = e.i;
        t.j = e.j;
        t.k = k;
        t.geometry = triple_geometry(set[e.i], set[e.j], set[k], tol);
        cx.triangle_index_[(std::uint64_t(e.i) * cx.n_ + std::uint64_t(e.j)) * cx.n_ +
                           std::uint64_t(k)] = int(cx.triangles_.size());
        cx.triangles_.push_back(std::move(t));
      } catch (const Error&) {
      }
    }
  }

  for (const TriangleRecord& t : cx.triangles_) {
    const auto common =
        intersect(intersect(cx.neighbors_[t.i], cx.neighbors_[t.j]), cx.neighbors_[t.k]);
    for (int l : common) {
      if (l <= t.k) continue;
      if (!cx.find_triangle(t.i, t.j, l) || !cx.find_triangle(t.i, t.k, l) ||
          !cx.find_triangle(t.j, t.k, l))
        continue;
      cx.tetrahedra_.push_back(TetrahedronRecord{t.i, t.j, t.k, l});
    }
  }

  if (options.with_mosaic) {
    TriangulationOptions topt;
    topt.tolerance = tol;
    cx.mosaic_ = build_regular_triangulation(set, topt).tetrahedra();
  }
  return cx;
}

void compute_fractions(AlphaComplex& cx, const BallSet& set, const ComplexOptions& options) {
  const int n = int(set.size());
  (void)options;

  for (TriangleRecord& t : cx.triangles_) {
    for (int side = 0; side < 2; ++side) {
      const Vector3& p = side == 0 ? t.geometry.plus : t.geometry.minus;
      bool exposed = true;
      for (int l : cx.neighbors_[t.i]) {
        if (l == t.j || l == t.k) continue;
        if (power_distance(set[l], p) <= 0) {
          exposed = false;
          break;
        }
      }
      t.exposed[side] = exposed;
    }
  }

  struct Corner {
    double angle;
    bool start;
    CornerId id;
  };
  for (EdgeRecord& e : cx.edges_) {
    const PairGeometry<double>& g = e.geometry;
    const double rho = g.circle_radius;
    const auto common = intersect(cx.neighbors_[e.i], cx.neighbors_[e.j]);

    std::vector<Corner> corners;
    bool any_points = false, covered = false;
    for (int k : common) {
      const TriangleRecord* t = cx.find_triangle(e.i, e.j, k);
      if (!t) {
        if (power_distance(set[k], Vector3(g.circle_center + rho * e.e1)) < 0) covered = true;
        continue;
      }
      any_points = true;
      for (int side = 0; side < 2; ++side) {
        if (!t->exposed[side]) continue;
        const Vector3& p = side == 0 ? t->geometry.plus : t->geometry.minus;
        const Vector3 rel = p - g.circle_center;
        const double angle = std::atan2(rel.dot(e.e2), rel.dot(e.e1));
        const Vector3 ccw = g.u.cross(rel);
        const bool entering = ccw.dot(set[k].center - p) > 0;
        corners.push_back({angle, !entering, CornerId{{t->i, t->j, t->k}, side == 0 ? 1 : -1}});
      }
    }

    e.arcs.clear();
    e.full_circle = false;
    if (corners.empty()) {
      e.full_circle = !any_points && !covered;
      e.sigma = e.full_circle ? 1.0 : 0.0;
    } else {
      std::sort(corners.begin(), corners.end(),
                [](const Corner& a, const Corner& b) { return a.angle < b.angle; });
      const int m = int(corners.size());
      double total = 0;
      for (int s = 0; s < m; ++s) {
        if (!corners[s].start) continue;
        const Corner& next = corners[(s + 1) % m];
        if (next.start)
          throw DegenerateState("exposed arcs on a circle do not alternate", {e.i, e.j});
        double angle = next.angle - corners[s].angle;
        if (angle <= 0) angle += kTwoPi;
        e.arcs.push_back(ExposedArc{corners[s].id, next.id, angle});
        total += angle;
      }
      if (2 * int(e.arcs.size()) != m)
        throw DegenerateState("unpaired corner on a circle", {e.i, e.j});
      e.sigma = std::min(1.0, total / kTwoPi);
    }

    // Facet: disk clipped by the power half-planes of the common neighbors.
    std::vector<Eigen::Vector2d> poly{{-2 * rho, -2 * rho},
                                      {2 * rho, -2 * rho},
                                      {2 * rho, 2 * rho},
                                      {-2 * rho, 2 * rho}};
    const Vector3 y0 = g.circle_center - set[e.i].center;
    const double ri2 = set[e.i].radius * set[e.i].radius;
    for (int k : common) {
      const Vector3 delta = set[k].center - set[e.i].center;
      const double a = 2 * e.e1.dot(delta), b = 2 * e.e2.dot(delta);
      const double c =
          delta.squaredNorm() + ri2 - set[k].radius * set[k].radius - 2 * y0.dot(delta);
      poly = clip_polygon(poly, a, b, c);
      if (poly.size() < 3) break;
    }
    const ClippedDisk facet = clip_disk(rho, poly);
    e.nu = snap_fraction(facet.area / (kPi * rho * rho));
    e.facet_area = e.nu > 0 ? facet.area : 0.0;
    e.centroid_offset = facet.centroid.x() * e.e1 + facet.centroid.y() * e.e2;
  }

  for (TriangleRecord& t : cx.triangles_) {
    const auto common =
        intersect(intersect(cx.neighbors_[t.i], cx.neighbors_[t.j]), cx.neighbors_[t.k]);
    const Vector3& lo_pt = t.geometry.minus;
    const Vector3 span = t.geometry.plus - t.geometry.minus;
    const Vector3& xi = set[t.i].center;
    const double ri2 = set[t.i].radius * set[t.i].radius;
    double lo = 0, hi = 1;
    for (int l : common) {
      const Vector3 delta = set[l].center - xi;
      const double slope = 2 * span.dot(delta);
      const double rest =
          delta.squaredNorm() + ri2 - set[l].radius * set[l].radius - 2 * (lo_pt - xi).dot(delta);
      if (slope > 0)
        hi = std::min(hi, rest / slope);
      else if (slope < 0)
        lo = std::max(lo, rest / slope);
      else if (rest < 0)
        hi = lo - 1;
      if (hi <= lo) break;
    }
    t.nu = snap_fraction(hi - lo);
  }

  for (TetrahedronRecord& t : cx.tetrahedra_) {
    const Vector3& xi = set[t.i].center;
    const double ri2 = set[t.i].radius * set[t.i].radius;
    Eigen::Matrix3d m;
    Vector3 rhs;
    const int others[3] = {t.j, t.k, t.l};
    for (int r = 0; r < 3; ++r) {
      const Vector3 delta = set[others[r]].center - xi;
      m.row(r) = delta.transpose();
      rhs[r] = 0.5 * (delta.squaredNorm() + ri2 - set[others[r]].radius * set[others[r]].radius);
    }
    const Vector3 y = m.fullPivLu().solve(rhs);
    t.orthocenter = xi + y;
    const double own = y.squaredNorm() - ri2;
    bool inside = own < 0;
    for (int l : cx.neighbors_[t.i]) {
      if (!inside) break;
      if (l == t.j || l == t.k || l == t.l) continue;
      if (power_distance(set[l], t.orthocenter) <= own) inside = false;
    }
    t.nu = inside ? 1.0 : 0.0;
  }

  std::vector<std::vector<int>> incident_edges(n), incident_triangles(n);
  for (int s = 0; s < int(cx.edges_.size()); ++s) {
    incident_edges[cx.edges_[s].i].push_back(s);
    incident_edges[cx.edges_[s].j].push_back(s);
  }
  for (int s = 0; s < int(cx.triangles_.size()); ++s) {
    const auto& t = cx.triangles_[s];
    for (int v : {t.i, t.j, t.k}) incident_triangles[v].push_back(s);
  }

  for (int i = 0; i < n; ++i) {
    VertexRecord& vr = cx.vertices_[i];
    const BallD& bi = set[i];
    const double r = bi.radius;
    double facet_sum = 0, facet_abs = 0;
    for (int s : incident_edges[i]) {
      const EdgeRecord& e = cx.edges_[s];
      const double xi = e.i == i ? e.geometry.xi_i : e.geometry.xi_j;
      const double term = xi * e.geometry.circle_radius * e.geometry.circle_radius * e.nu;
      facet_sum += term;
      facet_abs += std::abs(term);
    }
    facet_sum /= 4 * r * r * r;
    facet_abs /= 4 * r * r * r;
    if (vr.sphere_buried) {
      vr.sigma = 0;
      vr.boundary_cycles = vr.cap_components = 0;
      vr.nu = snap_cell_fraction(0.0, facet_sum, facet_abs);
      continue;
    }

    const int caps = int(incident_edges[i].size());
    std::vector<Vector3> axis(caps);
    std::vector<double> half_angle(caps);
    double arc_term = 0;
    int full = 0;
    std::map<CornerId, int> corner_ids;
    std::vector<std::pair<CornerId, CornerId>> links;
    for (int c = 0; c < caps; ++c) {
      const EdgeRecord& e = cx.edges_[incident_edges[i][c]];
      const bool first = e.i == i;
      axis[c] = first ? Vector3(-e.geometry.u) : e.geometry.u;
      const double xi = first ? e.geometry.xi_i : e.geometry.xi_j;
      half_angle[c] = std::acos(std::clamp(xi / r, -1.0, 1.0));
      arc_term += (xi / r) * kTwoPi * e.sigma;
      full += int(e.full_circle);
      for (const ExposedArc& a : e.arcs) {
        corner_ids.emplace(a.start, int(corner_ids.size()));
        corner_ids.emplace(a.end, int(corner_ids.size()));
        links.emplace_back(a.start, a.end);
      }
    }
    UnionFind cap_sets(caps);
    for (int a = 0; a < caps; ++a)
      for (int b = a + 1; b < caps; ++b) {
        const double between =
            std::atan2(axis[a].cross(axis[b]).norm(), axis[a].dot(axis[b]));
        if (between < half_angle[a] + half_angle[b]) cap_sets.unite(a, b);
      }
    UnionFind cycles(int(corner_ids.size()));
    for (const auto& [a, b] : links) cycles.unite(corner_ids[a], corner_ids[b]);

    double corner_term = 0;
    for (int s : incident_triangles[i]) {
      const TriangleRecord& t = cx.triangles_[s];
      for (int side = 0; side < 2; ++side) {
        if (!t.exposed[side]) continue;
        const Vector3& p = t.point(side == 0 ? 1 : -1);
        const Vector3 normal = (p - bi.center) / r;
        Vector3 g[2];
        int c = 0;
        for (int v : {t.i, t.j, t.k}) {
          if (v == i) continue;
          const Vector3 a = (set[v].center - bi.center).normalized();
          g[c++] = a - a.dot(normal) * normal;
        }
        corner_term += std::atan2(g[0].cross(g[1]).norm(), g[0].dot(g[1]));
      }
    }

    vr.boundary_cycles = full + (corner_ids.empty() ? 0 : cycles.components());
    vr.cap_components = caps == 0 ? 0 : cap_sets.components();
    const double chi = vr.patch_euler();
    vr.sigma = std::clamp((kTwoPi * chi + arc_term - corner_term) / (4 * kPi), 0.0, 1.0);
    vr.nu = snap_cell_fraction(vr.sigma, facet_sum, facet_abs);
  }
}

AlphaComplex build_alpha_complex(const BallSet& set, const ComplexOptions& options) {
  AlphaComplex cx = enumerate_candidates(set, options);
  compute_fractions(cx, set, options);
  return cx;
}

}  // namespace sfd
