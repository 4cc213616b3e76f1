#include <doctest.h>

#include <random>

#include "sfd/degeneracy.hpp"
#include "sfd/errors.hpp"
#include "sfd/gradients.hpp"
#include "sfd/measures.hpp"
#include "sfd/oracles.hpp"
#include "support.hpp"

using namespace sfd;

namespace {

BallD ball(double x, double y, double z, double r, double w = 1) {
  return BallD{Vector3(x, y, z), r, w};
}

struct Measure {
  const char* name;
  double (*value)(const AlphaComplex&, const BallSet&);
  GradientField (*gradient)(const AlphaComplex&, const BallSet&);
};

const Measure kMeasures[] = {
    {"volume", weighted_volume, volume_gradient},
    {"area", weighted_area, area_gradient},
    {"mean", weighted_mean_curvature, mean_curvature_gradient},
};

double evaluate(const Measure& m, const BallSet& set) { return m.value(build_alpha_complex(set), set); }

// Finite difference of a per-simplex quantity, aligned with the edges or
// vertices of the base complex.
template <class Extract>
std::vector<double> fd_records(const BallSet& set, const Eigen::VectorXd& t, double h, Extract extract) {
  const auto plus = extract(build_alpha_complex(set.moved(t, h)));
  const auto minus = extract(build_alpha_complex(set.moved(t, -h)));
  std::vector<double> out(plus.size());
  for (std::size_t s = 0; s < out.size(); ++s) out[s] = (plus[s] - minus[s]) / (2 * h);
  return out;
}

bool same_complex(const BallSet& set, const Eigen::VectorXd& t, double h) {
  return build_alpha_complex(set.moved(t, h)).simplices() ==
             build_alpha_complex(set.moved(t, -h)).simplices() &&
         build_alpha_complex(set.moved(t, h)).simplices() == build_alpha_complex(set).simplices();
}

}  // namespace

TEST_SUITE("gradients") {
  TEST_CASE("gradients match finite differences") {
    std::mt19937_64 rng(11);
    int checked = 0;
    while (checked < 30) {
      const BallSet set = testing::random_balls(rng, {10, 0.8, 1.6, -1, 2, 3.0});
      const Eigen::VectorXd t = testing::random_momentum(rng, int(set.size()));
      if (!check_general_position(set, testing::kGenericMargin).empty()) continue;
      const AlphaComplex cx = build_alpha_complex(set);
      try {
        for (const Measure& m : kMeasures) {
          const std::string name = m.name;
          CAPTURE(name);
          const Eigen::VectorXd g = m.gradient(cx, set).g;
          const double fd = fd_directional([&](const BallSet& s) { return evaluate(m, s); }, set, t);
          CAPTURE(fd);
          CAPTURE(checked);
          CHECK(std::abs(g.dot(t) - fd) <= 1e-6 * std::max(1.0, g.norm()));
        }
        ++checked;
      } catch (const CrossedDegeneracy&) {
      }
    }
  }

  TEST_CASE("mean curvature gradient splits into three parts") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {12, 0.8, 1.6, -1, 2, 3.0});
      const GradientField f = mean_curvature_gradient(build_alpha_complex(set), set);
      REQUIRE(f.p.has_value());
      CHECK((*f.p + *f.q + *f.s - f.g).norm() <= 1e-12 * std::max(1.0, f.g.norm()));
    }
  }

  TEST_CASE("gradients vanish under rigid motions") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 10; ++trial) {
      const BallSet set = testing::random_balls(rng, {12, 0.8, 1.6, -1, 2, 3.0});
      const AlphaComplex cx = build_alpha_complex(set);
      for (const Measure& m : kMeasures) {
        const GradientField f = m.gradient(cx, set);
        Vector3 force = Vector3::Zero(), torque = Vector3::Zero();
        for (std::size_t i = 0; i < set.size(); ++i) {
          force += f.at(int(i));
          torque += set[i].center.cross(f.at(int(i)));
        }
        CHECK(force.norm() <= 1e-10 * std::max(1.0, f.g.norm()));
        CHECK(torque.norm() <= 1e-10 * std::max(1.0, f.g.norm()));
      }
    }
  }

  TEST_CASE("two balls pull along their axis with opposite forces") {
    const BallSet set({ball(0, 0, 0, 1.0, 1.3), ball(0.9, 0.4, -0.2, 1.2, 0.6)});
    const AlphaComplex cx = build_alpha_complex(set);
    const Vector3 axis = (set[1].center - set[0].center).normalized();
    for (const Measure& m : kMeasures) {
      const GradientField f = m.gradient(cx, set);
      CHECK((f.at(0) + f.at(1)).norm() < 1e-12);
      CHECK(f.at(0).cross(axis).norm() < 1e-12);
      CHECK(f.at(0).norm() > 0.1);
    }
  }

  TEST_CASE("single ball has zero gradient") {
    const BallSet set({ball(1, 2, 3, 1.4, 0.8)});
    const AlphaComplex cx = build_alpha_complex(set);
    for (const Measure& m : kMeasures) CHECK(m.gradient(cx, set).g.norm() == 0);
  }

  TEST_CASE("retargeted motion fixes the circle") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
      const BallSet set = testing::random_balls(rng, {6, 0.8, 1.6, 1, 1, 2.0});
      const AlphaComplex cx = build_alpha_complex(set);
      const Eigen::VectorXd t = testing::random_momentum(rng, int(set.size()));
      for (const EdgeRecord& e : cx.edges()) {
        const RetargetedMotion m = retarget_motion(set, e.i, e.j, t);
        const Vector3 u = e.geometry.u;
        CHECK(m.stretch.cross(u).norm() < 1e-12);
        CHECK(std::abs(m.omega.dot(u)) < 1e-12);
        Eigen::VectorXd v(3 * set.size());
        for (std::size_t k = 0; k < set.size(); ++k) v.segment<3>(3 * k) = m.velocity[k];
        CHECK((m.velocity[e.j] - m.velocity[e.i] - m.stretch).norm() < 1e-12);
        const double h = 1e-5;
        auto circle = [&](double s) {
          const BallSet moved = set.moved(v, s);
          return pair_geometry(moved[e.i], moved[e.j]);
        };
        const auto ahead = circle(h), behind = circle(-h);
        CHECK((ahead.circle_center - behind.circle_center).norm() / (2 * h) < 1e-8);
        CHECK((ahead.u - behind.u).norm() / (2 * h) < 1e-8);
      }
    }
  }

  TEST_CASE("fraction rates match finite differences") {
    std::mt19937_64 rng(15);
    const double h = 1e-6;
    int checked = 0;
    while (checked < 10) {
      const BallSet set = testing::random_balls(rng, {10, 0.8, 1.6, 1, 1, 3.0});
      const Eigen::VectorXd t = testing::random_momentum(rng, int(set.size()));
      if (!same_complex(set, t, h)) continue;
      const AlphaComplex cx = build_alpha_complex(set);

      const auto vertex = fd_records(set, t, h, [](const AlphaComplex& c) {
        std::vector<double> out;
        for (const VertexRecord& v : c.vertices()) out.push_back(v.sigma);
        return out;
      });
      const auto vertex_rates = sigma_i_prime(cx, set, t);
      for (std::size_t i = 0; i < vertex.size(); ++i) CHECK(std::abs(vertex_rates[i] - vertex[i]) < 1e-6);

      auto per_edge = [](auto field) {
        return [field](const AlphaComplex& c) {
          std::vector<double> out;
          for (const EdgeRecord& e : c.edges()) out.push_back(field(e));
          return out;
        };
      };
      const auto edge = fd_records(set, t, h, per_edge([](const EdgeRecord& e) { return e.sigma; }));
      const auto radius = fd_records(set, t, h, per_edge([](const EdgeRecord& e) { return e.geometry.circle_radius; }));
      const auto dihedral = fd_records(set, t, h, per_edge([](const EdgeRecord& e) { return e.geometry.dihedral; }));
      const auto edge_rates = sigma_ij_prime(cx, set, t);
      const auto pair_rates = pair_scalar_primes(cx, set, t);
      REQUIRE(edge.size() == edge_rates.size());
      for (std::size_t s = 0; s < edge.size(); ++s) {
        CHECK(std::abs(edge_rates[s] - edge[s]) < 1e-6);
        CHECK(std::abs(pair_rates[s].radius - radius[s]) < 1e-6);
        CHECK(std::abs(pair_rates[s].dihedral - dihedral[s]) < 1e-6);
      }
      ++checked;
    }
  }
}
