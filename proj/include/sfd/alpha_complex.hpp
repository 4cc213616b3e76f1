#pragma once

// Dual complex of the union of balls together with the size fractions of
// every simplex: nu (share of the clipped ball, disk, segment or point that
// survives inside its power cell) and sigma (share of the sphere, circle or
// point pair that lies on the boundary of the union).

#include <array>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "sfd/ball_set.hpp"
#include "sfd/simplex.hpp"

namespace sfd {

// Triple point of balls (a < b < c), side +1 for the plus point.
struct CornerId {
  std::array<int, 3> triple{};
  int side = 0;
  auto operator<=>(const CornerId&) const = default;
};

struct ExposedArc {
  CornerId start, end;  // counterclockwise about the edge axis u
  double angle = 0;
};

struct VertexRecord {
  double nu = 0, sigma = 0;
  bool sphere_buried = false;  // S_i lies inside another ball
  int boundary_cycles = 0;     // closed boundary curves of the exposed patch
  int cap_components = 0;      // connected components of the covered caps
  int patch_euler() const {
    if (sphere_buried) return 0;
    return boundary_cycles + 2 - 2 * cap_components;
  }
};

struct EdgeRecord {
  int i = -1, j = -1;  // i < j
  PairGeometry<double> geometry;
  Vector3 e1 = Vector3::Zero(), e2 = Vector3::Zero();  // (e1, e2, u) right-handed
  double nu = 0, sigma = 0;
  double facet_area = 0;                       // area of the clipped disk
  Vector3 centroid_offset = Vector3::Zero();   // facet centroid minus circle center
  bool full_circle = false;                    // exposed with no corners
  std::vector<ExposedArc> arcs;
};

struct TriangleRecord {
  int i = -1, j = -1, k = -1;  // sorted
  TripleGeometry<double> geometry;
  double nu = 0;
  std::array<bool, 2> exposed{false, false};  // plus, minus
  double sigma() const { return 0.5 * (int(exposed[0]) + int(exposed[1])); }
  const Vector3& point(int side) const { return side > 0 ? geometry.plus : geometry.minus; }
};

struct TetrahedronRecord {
  int i = -1, j = -1, k = -1, l = -1;
  Vector3 orthocenter = Vector3::Zero();
  double nu = 0;
};

struct ComplexOptions {
  double tolerance = kDefaultTolerance;
  bool with_mosaic = false;  // also build the full regular triangulation
};

class AlphaComplex {
 public:
  std::size_t ball_count() const { return vertices_.size(); }
  const std::vector<VertexRecord>& vertices() const { return vertices_; }
  // Candidate records: every intersecting pair, every triple with two triple
  // points and every quadruple of such triples. Membership is nu > 0.
  const std::vector<EdgeRecord>& edges() const { return edges_; }
  const std::vector<TriangleRecord>& triangles() const { return triangles_; }
  const std::vector<TetrahedronRecord>& tetrahedra() const { return tetrahedra_; }
  const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }

  const EdgeRecord* find_edge(int i, int j) const;
  const TriangleRecord* find_triangle(int i, int j, int k) const;

  std::vector<Simplex> simplices() const;  // members, sorted
  std::vector<Simplex> boundary_simplices() const;
  bool contains(const Simplex& s) const;
  double nu(const Simplex& s) const;
  double sigma(const Simplex& s) const;

  // Regular triangulation tetrahedra, present when built with_mosaic.
  const std::optional<std::vector<Simplex>>& mosaic() const { return mosaic_; }

  // Number of exposed corners and arcs, used for the Euler characteristic.
  int exposed_corner_count() const;
  int exposed_arc_count() const;

 private:
  friend AlphaComplex enumerate_candidates(const BallSet&, const ComplexOptions&);
  friend void compute_fractions(AlphaComplex&, const BallSet&, const ComplexOptions&);

  std::vector<VertexRecord> vertices_;
  std::vector<EdgeRecord> edges_;
  std::vector<TriangleRecord> triangles_;
  std::vector<TetrahedronRecord> tetrahedra_;
  std::vector<std::vector<int>> neighbors_;  // overlapping balls, sorted
  std::unordered_map<std::uint64_t, int> edge_index_;
  std::unordered_map<std::uint64_t, int> triangle_index_;
  std::uint64_t n_ = 0;
  std::optional<std::vector<Simplex>> mosaic_;
};

AlphaComplex enumerate_candidates(const BallSet& set, const ComplexOptions& options = {});
void compute_fractions(AlphaComplex& complex, const BallSet& set,
                       const ComplexOptions& options = {});
AlphaComplex build_alpha_complex(const BallSet& set, const ComplexOptions& options = {});

// Area and centroid of a disk of radius rho at the origin clipped by a convex
// polygon given counterclockwise.
struct ClippedDisk {
  double area = 0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
};
ClippedDisk clip_disk(double rho, const std::vector<Eigen::Vector2d>& polygon);

}  // namespace sfd
