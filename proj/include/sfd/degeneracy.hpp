#pragma once

// Violations of general position and the discontinuities they cause.
//
// Condition I: five balls whose orthosphere is shared (a flip of the
// regular triangulation). Condition II: spheres meeting non-transversally,
// which makes the alpha complex gain or lose an interval of simplices.

#include <string>
#include <vector>

#include "sfd/alpha_complex.hpp"

namespace sfd {

enum class CaseLabel { C1, C2, C3, N01, N02, N03, N12, N13, N23, Flip };

enum class MeanOrder { SqrtEps, Eps, Continuous };
enum class GradientJump { Unbounded, Bounded, None };

struct DegeneracyReport {
  int condition = 2;
  CaseLabel label = CaseLabel::C1;
  int flip_before = 0, flip_after = 0;  // FLIP(b->a)
  std::vector<int> involved;
  std::vector<Simplex> added, removed;
  double proximity = 0;
  MeanOrder predicted_mean_order = MeanOrder::SqrtEps;
  GradientJump predicted_gradient_jump = GradientJump::Unbounded;

  std::string label_name() const;
};

const char* to_string(CaseLabel label);
const char* to_string(MeanOrder order);
const char* to_string(GradientJump jump);

// Table of the expected change of the mean curvature and its gradient.
DegeneracyReport make_report(CaseLabel label);

std::vector<DegeneracyReport> check_general_position(const BallSet& set, double tol);

// Maps the difference of two nearby complexes to a single event.
DegeneracyReport classify_event(const AlphaComplex& before, const AlphaComplex& after);

// Straight-line motion of all centers between two states.
class LinearTrajectory {
 public:
  LinearTrajectory(BallSet base, Eigen::VectorXd from, Eigen::VectorXd to);
  LinearTrajectory(const BallSet& from, const BallSet& to);

  BallSet at(double s) const { return base_.with_state(from_ + s * (to_ - from_)); }
  double length() const { return (to_ - from_).norm(); }
  Eigen::VectorXd direction() const { return (to_ - from_) / length(); }

 private:
  BallSet base_;
  Eigen::VectorXd from_, to_;
};

struct EventLocation {
  double before = 0, after = 1;  // parameters bracketing the change
  DegeneracyReport report;
};

// Bisects for the single change of the alpha complex (or of the mosaic when
// with_mosaic is set) along the trajectory.
EventLocation locate_event(const LinearTrajectory& path, bool with_mosaic = false);

struct ProbeResult {
  EventLocation event;
  std::vector<double> eps;           // distances from the event along the path
  std::vector<double> mean_change;   // |M(eps) - M(0) - eps * M'_absent|
  std::vector<double> gradient_jump; // |grad M(eps) - grad M_absent(0)|
  double mean_exponent = 0;
  double gradient_exponent = 0;
  bool gradient_bounded = true;
};

ProbeResult probe_order(const LinearTrajectory& path);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace sfd
