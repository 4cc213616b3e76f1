#pragma once

#include <vector>

#include "sfd/ball_set.hpp"
#include "sfd/simplex.hpp"

namespace sfd {

struct TriangulationOptions {
  // Throw DegenerateState instead of recording near-zero predicates.
  bool strict = false;
  double tolerance = kDefaultTolerance;
};

// Weighted Delaunay (regular) triangulation of the ball centers, weights r^2.
struct RegularTriangulation {
  std::vector<Simplex> cells;            // maximal simplices, sorted
  std::vector<int> hidden;               // balls whose power cell is empty
  std::vector<Simplex> near_degenerate;  // vertex sets of near-zero predicates
  bool perturbed = false;                // input was flat and got jittered

  std::vector<Simplex> simplices() const;
  std::vector<Simplex> tetrahedra() const;
};

RegularTriangulation build_regular_triangulation(const BallSet& set,
                                                 const TriangulationOptions& options = {});

// Sign of the power test of ball e against the orthosphere of tet (a,b,c,d):
// negative if e conflicts with the tet.
double power_test(const BallSet& set, const Simplex& tet, int e);

}  // namespace sfd
