#include "sfd/regular_triangulation.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>

namespace sfd {
namespace {

using LD = long double;
constexpr int kInf = -1;

struct Pt {
  LD x, y, z, w;
};

LD det3(LD a, LD b, LD c, LD d, LD e, LD f, LD g, LD h, LD i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

LD orient(const Pt& a, const Pt& b, const Pt& c, const Pt& d) {
  return det3(b.x - a.x, b.y - a.y, b.z - a.z, c.x - a.x, c.y - a.y, c.z - a.z, d.x - a.x,
              d.y - a.y, d.z - a.z);
}

// Negative times orient(a,b,c,d) when e lies below the lifted plane.
LD power_det(const Pt& a, const Pt& b, const Pt& c, const Pt& d, const Pt& e) {
  LD m[4][4];
  const Pt* q[4] = {&a, &b, &c, &d};
  for (int r = 0; r < 4; ++r) {
    const LD dx = q[r]->x - e.x, dy = q[r]->y - e.y, dz = q[r]->z - e.z;
    m[r][0] = dx;
    m[r][1] = dy;
    m[r][2] = dz;
    m[r][3] = dx * dx + dy * dy + dz * dz - q[r]->w + e.w;
  }
  LD det = 0;
  for (int r = 0; r < 4; ++r) {
    LD minor[9];
    int c = 0;
    for (int rr = 0; rr < 4; ++rr) {
      if (rr == r) continue;
      minor[c++] = m[rr][0];
      minor[c++] = m[rr][1];
      minor[c++] = m[rr][2];
    }
    const LD sub = det3(minor[0], minor[1], minor[2], minor[3], minor[4], minor[5], minor[6],
                        minor[7], minor[8]);
    det += ((r + 3) % 2 == 0 ? 1 : -1) * m[r][3] * sub;
  }
  return det;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Tet {
  std::array<int, 4> v;
  std::array<int, 4> nb{-1, -1, -1, -1};
  bool alive = true;
  bool infinite() const { return v[3] == kInf; }
};

class Builder {
 public:
  Builder(std::vector<Pt> pts, const TriangulationOptions& opt, LD scale)
      : pts_(std::move(pts)), opt_(opt) {
    orient_eps_ = LD(opt.tolerance) * scale * scale * scale;
    power_eps_ = orient_eps_ * scale * scale;
  }

  bool start(std::vector<int>& order);
  void insert(int e);
  void finish(RegularTriangulation& out) const;

 private:
  void near(std::initializer_list<int> ids) {
    std::vector<int> v;
    for (int i : ids)
      if (i != kInf) v.push_back(i);
    Simplex s = Simplex::from(v.data(), int(v.size()));
    if (opt_.strict)
      throw DegenerateState("near-degenerate predicate on " + s.str(), v);
    near_.insert(s);
  }
  bool finite_conflict(const Tet& t, int e) {
    const LD det = power_det(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], pts_[t.v[3]], pts_[e]);
    if (std::abs(det) <= power_eps_) near({t.v[0], t.v[1], t.v[2], t.v[3], e});
    return det < 0;
  }
  bool conflict(int ti, int e) {
    const Tet& t = tets_[ti];
    if (!t.infinite()) return finite_conflict(t, e);
    const LD o = orient(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], pts_[e]);
    if (o > orient_eps_) return true;
    if (o < -orient_eps_) return false;
    near({t.v[0], t.v[1], t.v[2], e});
    return finite_conflict(tets_[t.nb[3]], e);
  }
  void link(int a, int fa, int b, int fb) {
    tets_[a].nb[fa] = b;
    tets_[b].nb[fb] = a;
  }

  std::vector<Pt> pts_;
  TriangulationOptions opt_;
  LD orient_eps_ = 0, power_eps_ = 0;
  std::vector<Tet> tets_;
  std::set<Simplex> near_;
};

bool Builder::start(std::vector<int>& order) {
  const int n = int(pts_.size());
  auto dist2 = [&](int a, int b) {
    const LD dx = pts_[a].x - pts_[b].x, dy = pts_[a].y - pts_[b].y, dz = pts_[a].z - pts_[b].z;
    return dx * dx + dy * dy + dz * dz;
  };
  int i0 = 0, i1 = -1, i2 = -1, i3 = -1;
  LD best = 0;
  for (int i = 1; i < n; ++i)
    if (dist2(i0, i) > best) best = dist2(i0, i), i1 = i;
  if (i1 < 0) return false;
  best = 0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    const LD ax = pts_[i1].x - pts_[i0].x, ay = pts_[i1].y - pts_[i0].y, az = pts_[i1].z - pts_[i0].z;
    const LD bx = pts_[i].x - pts_[i0].x, by = pts_[i].y - pts_[i0].y, bz = pts_[i].z - pts_[i0].z;
    const LD cx = ay * bz - az * by, cy = az * bx - ax * bz, cz = ax * by - ay * bx;
    const LD area = cx * cx + cy * cy + cz * cz;
    if (area > best) best = area, i2 = i;
  }
  if (i2 < 0) return false;
  best = 0;
  for (int i = 0; i < n; ++i) {
    if (i == i0 || i == i1 || i == i2) continue;
    const LD o = std::abs(orient(pts_[i0], pts_[i1], pts_[i2], pts_[i]));
    if (o > best) best = o, i3 = i;
  }
  if (i3 < 0 || best <= orient_eps_) return false;

  std::array<int, 4> v{i0, i1, i2, i3};
  if (orient(pts_[i0], pts_[i1], pts_[i2], pts_[i3]) < 0) std::swap(v[2], v[3]);
  tets_.push_back(Tet{v});
  for (int f = 0; f < 4; ++f) {
    std::array<int, 3> face;
    int c = 0;
    for (int k = 0; k < 4; ++k)
      if (k != f) face[c++] = v[k];
    if (orient(pts_[face[0]], pts_[face[1]], pts_[face[2]], pts_[v[f]]) > 0)
      std::swap(face[1], face[2]);
    tets_.push_back(Tet{{face[0], face[1], face[2], kInf}});
    link(0, f, int(tets_.size()) - 1, 3);
  }
  // Side faces of the infinite tets pair up through the shared hull edges.
  std::map<std::pair<int, int>, std::pair<int, int>> pending;
  for (int t = 1; t <= 4; ++t) {
    for (int h = 0; h < 3; ++h) {
      int a = -2, b = -2;
      for (int k = 0; k < 3; ++k) {
        if (k == h) continue;
        (a == -2 ? a : b) = tets_[t].v[k];
      }
      auto key = std::minmax(a, b);
      auto it = pending.find(key);
      if (it == pending.end()) {
        pending[key] = {t, h};
      } else {
        link(t, h, it->second.first, it->second.second);
        pending.erase(it);
      }
    }
  }
  order.clear();
  for (int i = 0; i < n; ++i)
    if (i != i0 && i != i1 && i != i2 && i != i3) order.push_back(i);
  return true;
}

void Builder::insert(int e) {
  const int count = int(tets_.size());
  int seed = -1;
  for (int t = 0; t < count && seed < 0; ++t)
    if (tets_[t].alive && !tets_[t].infinite() && conflict(t, e)) seed = t;
  for (int t = 0; t < count && seed < 0; ++t)
    if (tets_[t].alive && tets_[t].infinite() && conflict(t, e)) seed = t;
  if (seed < 0) return;

  std::vector<char> in_cavity(count, 0), tested(count, 0);
  std::vector<int> cavity{seed}, stack{seed};
  in_cavity[seed] = tested[seed] = 1;
  while (!stack.empty()) {
    const int t = stack.back();
    stack.pop_back();
    for (int f = 0; f < 4; ++f) {
      const int nb = tets_[t].nb[f];
      if (tested[nb]) continue;
      tested[nb] = 1;
      if (conflict(nb, e)) {
        in_cavity[nb] = 1;
        cavity.push_back(nb);
        stack.push_back(nb);
      }
    }
  }

  std::map<std::pair<int, int>, std::pair<int, int>> pending;
  for (int t : cavity) {
    for (int f = 0; f < 4; ++f) {
      const int outside = tets_[t].nb[f];
      if (in_cavity[outside]) continue;
      Tet fresh{tets_[t].v};
      fresh.v[f] = e;
      const int id = int(tets_.size());
      tets_.push_back(fresh);
      const int face_out =
          int(std::find(tets_[id].v.begin(), tets_[id].v.end(), e) - tets_[id].v.begin());
      int back = 0;
      while (tets_[outside].nb[back] != t) ++back;
      link(id, face_out, outside, back);
      for (int h = 0; h < 4; ++h) {
        if (h == face_out) continue;
        int a = -2, b = -2;
        for (int k = 0; k < 4; ++k) {
          if (k == h || k == face_out) continue;
          (a == -2 ? a : b) = tets_[id].v[k];
        }
        auto key = std::minmax(a, b);
        auto it = pending.find(key);
        if (it == pending.end()) {
          pending[key] = {id, h};
        } else {
          link(id, h, it->second.first, it->second.second);
          pending.erase(it);
        }
      }
    }
  }
  for (int t : cavity) tets_[t].alive = false;
  if (!pending.empty()) throw DegenerateState("cavity is not star-shaped", {e});
}

void Builder::finish(RegularTriangulation& out) const {
  std::vector<char> used(pts_.size(), 0);
  for (const Tet& t : tets_) {
    if (!t.alive) continue;
    for (int v : t.v)
      if (v != kInf) used[v] = 1;
    if (!t.infinite()) out.cells.push_back(Simplex{t.v[0], t.v[1], t.v[2], t.v[3]});
  }
  for (std::size_t i = 0; i < used.size(); ++i)
    if (!used[i]) out.hidden.push_back(int(i));
  out.near_degenerate.assign(near_.begin(), near_.end());
  std::sort(out.cells.begin(), out.cells.end());
}

}  // namespace

std::vector<Simplex> RegularTriangulation::simplices() const {
  std::set<Simplex> all;
  for (const Simplex& c : cells) {
    all.insert(c);
    for (const Simplex& f : c.faces()) all.insert(f);
  }
  return {all.begin(), all.end()};
}

std::vector<Simplex> RegularTriangulation::tetrahedra() const {
  std::vector<Simplex> out;
  for (const Simplex& c : cells)
    if (c.dim == 3) out.push_back(c);
  return out;
}

double power_test(const BallSet& set, const Simplex& tet, int e) {
  auto pt = [&](int i) {
    const BallD& b = set[i];
    return Pt{b.center.x(), b.center.y(), b.center.z(), LD(b.radius) * b.radius};
  };
  const LD o = orient(pt(tet.v[0]), pt(tet.v[1]), pt(tet.v[2]), pt(tet.v[3]));
  const LD det = power_det(pt(tet.v[0]), pt(tet.v[1]), pt(tet.v[2]), pt(tet.v[3]), pt(e));
  return double(o > 0 ? det : -det);
}

RegularTriangulation build_regular_triangulation(const BallSet& set,
                                                 const TriangulationOptions& options) {
  RegularTriangulation out;
  const int n = int(set.size());
  if (n == 0) return out;
  if (n <= 3) {
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    out.cells.push_back(Simplex::from(ids.data(), n));
    return out;
  }

  Eigen::Vector3d lo = set[0].center, hi = set[0].center;
  for (const BallD& b : set) {
    lo = lo.cwiseMin(b.center);
    hi = hi.cwiseMax(b.center);
  }
  const double extent = std::max((hi - lo).norm(), set.max_radius());
  const Eigen::Vector3d mid = (lo + hi) / 2;

  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<Pt> pts;
    for (int i = 0; i < n; ++i) {
      Eigen::Vector3d c = set[i].center - mid;
      if (attempt == 1) {
        for (int k = 0; k < 3; ++k) {
          const std::uint64_t h = splitmix(std::uint64_t(i) * 3 + k);
          c[k] += 1e-6 * extent * (double(h >> 11) * 0x1.0p-53 - 0.5);
        }
      }
      pts.push_back(Pt{c.x(), c.y(), c.z(), LD(set[i].radius) * set[i].radius});
    }
    Builder builder(std::move(pts), options, extent);
    std::vector<int> order;
    if (!builder.start(order)) continue;
    for (int e : order) builder.insert(e);
    builder.finish(out);
    out.perturbed = attempt == 1;
    return out;
  }
  throw DegenerateState("ball centers are degenerate beyond repair");
}

}  // namespace sfd
