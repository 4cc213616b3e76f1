#include "sfd/ball_set.hpp"

#include <cmath>
#include <string>

namespace sfd {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DisjointOrNested: return "DisjointOrNested";
    case ErrorKind::NoTriplePoint: return "NoTriplePoint";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::SignUndetermined: return "SignUndetermined";
    case ErrorKind::TangentialContact: return "TangentialContact";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::UnrecognizedEvent: return "UnrecognizedEvent";
    case ErrorKind::CrossedDegeneracy: return "CrossedDegeneracy";
    case ErrorKind::TopologyChange: return "TopologyChange";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

BallSet::BallSet(std::vector<BallD> balls) : balls_(std::move(balls)) {
  for (std::size_t i = 0; i < balls_.size(); ++i) {
    const BallD& b = balls_[i];
    if (!b.center.allFinite() || !std::isfinite(b.weight) || !std::isfinite(b.radius))
      throw InvalidInput("non-finite value in ball " + std::to_string(i), {int(i)});
    if (!(b.radius > 0))
      throw InvalidInput("non-positive radius in ball " + std::to_string(i), {int(i)});
  }
}

Eigen::VectorXd BallSet::state() const {
  Eigen::VectorXd x(3 * balls_.size());
  for (std::size_t i = 0; i < balls_.size(); ++i) x.segment<3>(3 * i) = balls_[i].center;
  return x;
}

BallSet BallSet::with_state(const Eigen::Ref<const Eigen::VectorXd>& centers) const {
  if (centers.size() != Eigen::Index(3 * balls_.size()))
    throw InvalidInput("state vector has the wrong length");
  std::vector<BallD> out = balls_;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].center = centers.segment<3>(3 * i);
  return BallSet(std::move(out));
}

BallSet BallSet::moved(const Eigen::Ref<const Eigen::VectorXd>& momentum, double step) const {
  return with_state(state() + step * momentum);
}

BallSet BallSet::inflated(double eps) const {
  std::vector<BallD> out = balls_;
  for (auto& b : out) b.radius += eps;
  return BallSet(std::move(out));
}

BallSet BallSet::with_unit_weights() const {
  std::vector<BallD> out = balls_;
  for (auto& b : out) b.weight = 1.0;
  return BallSet(std::move(out));
}

double BallSet::mean_radius() const {
  if (balls_.empty()) return 1.0;
  double s = 0;
  for (const auto& b : balls_) s += b.radius;
  return s / double(balls_.size());
}

double BallSet::max_radius() const {
  double m = 0;
  for (const auto& b : balls_) m = std::max(m, b.radius);
  return m;
}

}  // namespace sfd
