#pragma once

#include <functional>

#include "sfd/alpha_complex.hpp"

namespace sfd {

struct MeasureSet {
  double volume = 0;
  double area = 0;
  double mean = 0;
  double gauss = 0;  // total Gaussian curvature
};

struct MorphometricCoefficients {
  double mu0 = 0, mu1 = 0, mu2 = 0, mu3 = 0;
};

// Shares of the three balls meeting at a boundary corner; they sum to one.
struct CornerWeights {
  double alpha_i = 1.0 / 3, alpha_j = 1.0 / 3, alpha_k = 1.0 / 3;
};
using CornerSplit = std::function<CornerWeights(const CornerId&)>;

CornerSplit equal_corner_split();

double weighted_volume(const AlphaComplex& cx, const BallSet& set);
double weighted_area(const AlphaComplex& cx, const BallSet& set);
double weighted_mean_curvature(const AlphaComplex& cx, const BallSet& set);
double weighted_gaussian_curvature(const AlphaComplex& cx, const BallSet& set,
                                   const CornerSplit& split = equal_corner_split());

MeasureSet weighted_measures(const AlphaComplex& cx, const BallSet& set,
                             const CornerSplit& split = equal_corner_split());
MeasureSet weighted_measures(const BallSet& set);

// mu0 V + mu1 A + mu2 M + mu3 G/3
double morphometric_energy(const MeasureSet& m, const MorphometricCoefficients& mu);

}  // namespace sfd
