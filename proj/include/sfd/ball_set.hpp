#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

#include "sfd/core_geometry.hpp"

namespace sfd {

using BallD = Ball<double>;

// Immutable collection of weighted balls. The state vector stacks the
// centers as (x0, y0, z0, x1, ...).
class BallSet {
 public:
  BallSet() = default;
  explicit BallSet(std::vector<BallD> balls);

  std::size_t size() const noexcept { return balls_.size(); }
  bool empty() const noexcept { return balls_.empty(); }
  const BallD& operator[](std::size_t i) const { return balls_[i]; }
  const std::vector<BallD>& balls() const noexcept { return balls_; }
  auto begin() const { return balls_.begin(); }
  auto end() const { return balls_.end(); }

  Eigen::VectorXd state() const;
  BallSet with_state(const Eigen::Ref<const Eigen::VectorXd>& centers) const;
  BallSet moved(const Eigen::Ref<const Eigen::VectorXd>& momentum, double step) const;
  BallSet inflated(double eps) const;
  BallSet with_unit_weights() const;

  double mean_radius() const;
  double max_radius() const;

 private:
  std::vector<BallD> balls_;
};

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
    return *this;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace sfd
