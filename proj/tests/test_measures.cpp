#include <doctest.h>

#include <numbers>
#include <random>

#include "sfd/measures.hpp"
#include "sfd/oracles.hpp"
#include "support.hpp"

using namespace sfd;

namespace {

constexpr double kPi = std::numbers::pi;

BallD ball(double x, double y, double z, double r, double w = 1) {
  return BallD{Vector3(x, y, z), r, w};
}

// Lens-shaped union of two balls from cap formulas.
MeasureSet pair_reference(const BallD& a, const BallD& b) {
  const double d = (b.center - a.center).norm();
  const double xi = (d * d + a.radius * a.radius - b.radius * b.radius) / (2 * d);
  const double ha = a.radius - xi, hb = b.radius - (d - xi);
  const double rho = std::sqrt(a.radius * a.radius - xi * xi);
  auto cap_volume = [](double r, double h) { return kPi * h * h * (3 * r - h) / 3; };
  const double va = 4 * kPi * std::pow(a.radius, 3) / 3 - cap_volume(a.radius, ha);
  const double vb = 4 * kPi * std::pow(b.radius, 3) / 3 - cap_volume(b.radius, hb);
  const double aa = 4 * kPi * a.radius * a.radius - 2 * kPi * a.radius * ha;
  const double ab = 4 * kPi * b.radius * b.radius - 2 * kPi * b.radius * hb;
  const double normals =
      std::acos((a.radius * a.radius + b.radius * b.radius - d * d) / (2 * a.radius * b.radius));
  const double crease = 0.5 * (a.weight + b.weight) * 2 * kPi * rho * normals;
  MeasureSet m;
  m.volume = a.weight * va + b.weight * vb;
  m.area = a.weight * aa + b.weight * ab;
  m.mean = a.weight * aa / a.radius + b.weight * ab / b.radius - 0.5 * crease;
  return m;
}

void check_close(const MeasureSet& got, const MeasureSet& want, double tol) {
  const double scale = std::max({1.0, std::abs(want.volume), std::abs(want.area), std::abs(want.mean)});
  CHECK(std::abs(got.volume - want.volume) <= tol * scale);
  CHECK(std::abs(got.area - want.area) <= tol * scale);
  CHECK(std::abs(got.mean - want.mean) <= tol * scale);
  CHECK(std::abs(got.gauss - want.gauss) <= tol * scale);
}

BallSet with_weights(const BallSet& set, const std::vector<double>& w) {
  std::vector<BallD> balls(set.begin(), set.end());
  for (std::size_t i = 0; i < balls.size(); ++i) balls[i].weight = w[i];
  return BallSet(std::move(balls));
}

}  // namespace

TEST_SUITE("measures") {
  TEST_CASE("single ball") {
    for (double r : {0.3, 1.0, 2.5})
      for (double w : {1.0, -0.7, 2.0}) {
        const MeasureSet m = weighted_measures(BallSet({ball(1, -2, 0.5, r, w)}));
        CHECK(m.volume == doctest::Approx(w * 4 * kPi * r * r * r / 3).epsilon(1e-14));
        CHECK(m.area == doctest::Approx(w * 4 * kPi * r * r).epsilon(1e-14));
        CHECK(m.mean == doctest::Approx(w * 4 * kPi * r).epsilon(1e-14));
        CHECK(m.gauss == doctest::Approx(w * 4 * kPi).epsilon(1e-14));
      }
  }

  TEST_CASE("two unit balls at unit distance") {
    const MeasureSet m = weighted_measures(BallSet({ball(0, 0, 0, 1), ball(1, 0, 0, 1)}));
    CHECK(std::abs(m.volume - 9 * kPi / 4) < 1e-12);
    CHECK(std::abs(m.area - 6 * kPi) < 1e-12);
    CHECK(std::abs(m.mean - 16.0004) < 1e-4);
    CHECK(std::abs(m.mean - (6 * kPi - kPi * kPi / (2 * std::sqrt(3.0)))) < 1e-12);
    CHECK(std::abs(m.gauss - 4 * kPi) < 1e-12);
  }

  TEST_CASE("pairs against cap formulas") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> radius(0.5, 2.0), weight(-1.0, 2.0), unit(0.05, 0.95);
    for (int trial = 0; trial < 200; ++trial) {
      const double ra = radius(rng), rb = radius(rng);
      const double lo = std::abs(ra - rb), hi = ra + rb;
      const double d = lo + unit(rng) * (hi - lo);
      const Vector3 axis = Vector3::Random().normalized();
      const BallD a = ball(0.1, 0.2, 0.3, ra, weight(rng));
      const BallD b{a.center + d * axis, rb, weight(rng)};
      MeasureSet want = pair_reference(a, b);
      BallD ua = a, ub = b;
      ua.weight = ub.weight = 1;
      const MeasureSet unweighted = weighted_measures(BallSet({ua, ub}));
      CHECK(std::abs(unweighted.gauss - 4 * kPi) < 1e-10);
      const MeasureSet got = weighted_measures(BallSet({a, b}));
      want.gauss = got.gauss;
      check_close(got, want, 1e-11);
    }
  }

  TEST_CASE("morphometric energy") {
    const MeasureSet m = weighted_measures(BallSet({ball(0, 0, 0, 1), ball(1, 0, 0, 1)}));
    CHECK(std::abs(morphometric_energy(m, {0, 0, 0, 3}) - 4 * kPi) < 1e-12);
    CHECK(morphometric_energy(m, {1, 2, 3, 4}) ==
          doctest::Approx(m.volume + 2 * m.area + 3 * m.mean + 4 * m.gauss / 3).epsilon(1e-15));
  }

  TEST_CASE("measures are linear in the weights") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> weight(-1.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {12, 0.8, 1.6, 1, 1, 3.0});
      std::vector<double> wa(set.size()), wb(set.size()), sum(set.size());
      for (std::size_t i = 0; i < set.size(); ++i) {
        wa[i] = weight(rng);
        wb[i] = weight(rng);
        sum[i] = 2 * wa[i] - 0.5 * wb[i];
      }
      const MeasureSet a = weighted_measures(with_weights(set, wa));
      const MeasureSet b = weighted_measures(with_weights(set, wb));
      MeasureSet want{2 * a.volume - 0.5 * b.volume, 2 * a.area - 0.5 * b.area,
                      2 * a.mean - 0.5 * b.mean, 2 * a.gauss - 0.5 * b.gauss};
      check_close(weighted_measures(with_weights(set, sum)), want, 1e-12);
    }
  }

  TEST_CASE("rigid motion and relabeling leave measures unchanged") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {12, 0.8, 1.6, -1, 2, 3.0});
      const MeasureSet base = weighted_measures(set);
      const BallSet moved =
          testing::rigidly_moved(set, testing::random_rotation(rng), Vector3(0.7, -1.3, 2.1));
      check_close(weighted_measures(moved), base, 1e-11);
      std::vector<BallD> shuffled(set.begin(), set.end());
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      check_close(weighted_measures(BallSet(std::move(shuffled))), base, 1e-11);
    }
  }

  TEST_CASE("corner split matters only with unequal weights") {
    const CornerSplit lopsided = [](const CornerId&) { return CornerWeights{0.6, 0.3, 0.1}; };
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {12, 0.8, 1.6, 1, 1, 3.0});
      const AlphaComplex cx = build_alpha_complex(set);
      const double equal = weighted_gaussian_curvature(cx, set);
      CHECK(std::abs(weighted_gaussian_curvature(cx, set, lopsided) - equal) < 1e-10);
      CHECK(std::abs(equal - gauss_bonnet(cx)) < 1e-9);
    }
  }

  TEST_CASE("area is the radial derivative of volume") {
    std::mt19937_64 rng(37);
    const double h = 1e-5;
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {10, 0.8, 1.6, 1, 1, 3.0});
      const double area = weighted_measures(set).area;
      const double dv =
          (weighted_measures(set.inflated(h)).volume - weighted_measures(set.inflated(-h)).volume) / (2 * h);
      CHECK(std::abs(dv - area) < 1e-6 * area);
    }
  }

  TEST_CASE("volume against sampling") {
    std::mt19937_64 rng(41);
    const BallSet set = testing::random_balls(rng, {8, 0.8, 1.6, 1, 1, 2.0});
    Vector3 lo = set[0].center, hi = set[0].center;
    for (const BallD& b : set) {
      lo = lo.cwiseMin(b.center - Vector3::Constant(b.radius));
      hi = hi.cwiseMax(b.center + Vector3::Constant(b.radius));
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int samples = 400000;
    int hits = 0;
    for (int s = 0; s < samples; ++s) {
      const Vector3 p = lo + Vector3(unit(rng), unit(rng), unit(rng)).cwiseProduct(hi - lo);
      for (const BallD& b : set)
        if ((p - b.center).squaredNorm() < b.radius * b.radius) {
          ++hits;
          break;
        }
    }
    const double box = (hi - lo).prod();
    const double p = double(hits) / samples;
    const double sd = box * std::sqrt(p * (1 - p) / samples);
    CHECK(std::abs(box * p - weighted_measures(set).volume) < 4 * sd);
  }
}
