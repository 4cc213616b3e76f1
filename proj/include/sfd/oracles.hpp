#pragma once

// Independent checks of the analytic quantities: finite differences, Monte
// Carlo sampling of the fractions, the Steiner expansion of the thickened
// union and Gauss-Bonnet.

#include <cstdint>
#include <functional>
#include <vector>

#include "sfd/alpha_complex.hpp"

namespace sfd {

using StateFunction = std::function<double(const BallSet&)>;

struct FDConfig {
  double step = 1e-5;
  // Check that the alpha complex is the same at both stencil points.
  bool check_complex = true;
};

// Central difference of f along momentum t; throws CrossedDegeneracy when
// the stencil straddles a change of the alpha complex.
double fd_directional(const StateFunction& f, const BallSet& set, const Eigen::VectorXd& t,
                      const FDConfig& config = {});

struct MCConfig {
  std::int64_t samples = 1'000'000;  // per quantity
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct FractionEstimate {
  double sigma = 0, sigma_error = 0;  // error is one standard deviation
  double nu = 0, nu_error = 0;
};

// Uniform samples on each sphere (sigma_i) and in each ball (nu_i). Every
// quantity draws from its own seeded stream, so results do not depend on
// the thread count.
std::vector<FractionEstimate> mc_fractions(const BallSet& set, const MCConfig& config = {});

struct SteinerFit {
  double volume = 0;
  double area = 0;
  double mean = 0;
  double gauss_third = 0;  // G / 3
  double residual = 0;     // max relative misfit of V(eps)
};

// Cubic least-squares fit of the union volume of the balls inflated by eps.
// The fit uses unit weights. Throws TopologyChange if the alpha complex is
// not the same across the grid.
SteinerFit steiner_fit(const BallSet& set,
                       const std::vector<double>& grid = {0, 0.5e-3, 1e-3, 2e-3, 4e-3});

// Euler characteristic of the boundary of the union.
int boundary_euler_characteristic(const AlphaComplex& complex);

// 2 pi chi of the boundary surface.
double gauss_bonnet(const AlphaComplex& complex);

}  // namespace sfd
