#include "sfd/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "sfd/measures.hpp"

namespace sfd {
namespace {

std::vector<int> changed_vertices(const std::vector<Simplex>& a, const std::vector<Simplex>& b) {
  std::vector<Simplex> diff;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(),
                                std::back_inserter(diff));
  std::vector<int> ids;
  for (const Simplex& s : diff) ids.insert(ids.end(), s.begin(), s.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Vector3 random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vector3 v;
  do {
    v = Vector3(normal(rng), normal(rng), normal(rng));
  } while (v.squaredNorm() < 1e-24);
  return v.normalized();
}

struct Estimate {
  double mean = 0, error = 0;
};

Estimate bernoulli(std::int64_t hits, std::int64_t samples) {
  const double p = double(hits) / double(samples);
  return {p, std::sqrt(p * (1 - p) / double(samples))};
}

}  // namespace

double fd_directional(const StateFunction& f, const BallSet& set, const Eigen::VectorXd& t,
                      const FDConfig& config) {
  const BallSet plus = set.moved(t, config.step);
  const BallSet minus = set.moved(t, -config.step);
  if (config.check_complex) {
    const auto a = build_alpha_complex(plus).simplices();
    const auto b = build_alpha_complex(minus).simplices();
    if (a != b)
      throw CrossedDegeneracy("finite-difference stencil crosses a change of the complex",
                              changed_vertices(a, b));
  }
  return (f(plus) - f(minus)) / (2 * config.step);
}

std::vector<FractionEstimate> mc_fractions(const BallSet& set, const MCConfig& config) {
  const int n = int(set.size());
  if (config.samples <= 0) throw InvalidInput("sample count must be positive");
  std::vector<std::vector<int>> overlap(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && (set[i].center - set[j].center).norm() < set[i].radius + set[j].radius)
        overlap[i].push_back(j);

  std::vector<FractionEstimate> out(n);
  // task 2i: sigma_i, task 2i+1: nu_i
  auto run = [&](int task) {
    const int i = task / 2;
    const bool volume = task % 2 == 1;
    std::mt19937_64 rng(splitmix(config.seed * 0x100000001b3ULL + std::uint64_t(task)));
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const BallD& b = set[i];
    std::int64_t hits = 0;
    for (std::int64_t s = 0; s < config.samples; ++s) {
      const Vector3 dir = random_direction(rng);
      if (!volume) {
        const Vector3 p = b.center + b.radius * dir;
        const bool covered = std::any_of(overlap[i].begin(), overlap[i].end(), [&](int j) {
          return (p - set[j].center).squaredNorm() < set[j].radius * set[j].radius;
        });
        hits += !covered;
      } else {
        const Vector3 p = b.center + b.radius * std::cbrt(uniform(rng)) * dir;
        const double own = power_distance(b, p);
        const bool outside = std::any_of(overlap[i].begin(), overlap[i].end(),
                                         [&](int j) { return power_distance(set[j], p) < own; });
        hits += !outside;
      }
    }
    const Estimate e = bernoulli(hits, config.samples);
    if (volume) {
      out[i].nu = e.mean;
      out[i].nu_error = e.error;
    } else {
      out[i].sigma = e.mean;
      out[i].sigma_error = e.error;
    }
  };

  const unsigned workers =
      std::max(1u, config.threads ? config.threads : std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::jthread> pool;
  for (unsigned w = 0; w < std::min<unsigned>(workers, unsigned(2 * n)); ++w)
    pool.emplace_back([&] {
      for (int task = next++; task < 2 * n; task = next++) run(task);
    });
  pool.clear();
  return out;
}

SteinerFit steiner_fit(const BallSet& set, const std::vector<double>& grid) {
  if (grid.size() < 4) throw InvalidInput("cubic fit needs at least four grid points");
  const BallSet unit = set.with_unit_weights();
  const double scale = *std::max_element(grid.begin(), grid.end());
  if (!(scale > 0)) throw InvalidInput("grid must contain a positive thickening");

  Eigen::MatrixXd design(grid.size(), 4);
  Eigen::VectorXd volume(grid.size());
  std::vector<Simplex> reference;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const BallSet thick = unit.inflated(grid[k]);
    const AlphaComplex cx = build_alpha_complex(thick);
    auto simplices = cx.simplices();
    if (k == 0)
      reference = std::move(simplices);
    else if (simplices != reference)
      throw TopologyChange("alpha complex changes across the thickening grid",
                           changed_vertices(simplices, reference));
    const double x = grid[k] / scale;
    design.row(Eigen::Index(k)) << 1, x, x * x, x * x * x;
    volume[Eigen::Index(k)] = weighted_volume(cx, thick);
  }
  const Eigen::Vector4d c = design.colPivHouseholderQr().solve(volume);
  const Eigen::VectorXd misfit = design * c - volume;

  SteinerFit fit;
  fit.volume = c[0];
  fit.area = c[1] / scale;
  fit.mean = c[2] / (scale * scale);
  fit.gauss_third = c[3] / (scale * scale * scale);
  for (Eigen::Index k = 0; k < volume.size(); ++k)
    fit.residual = std::max(fit.residual, std::abs(misfit[k]) / std::abs(volume[k]));
  return fit;
}

int boundary_euler_characteristic(const AlphaComplex& complex) {
  int patches = 0;
  for (const VertexRecord& v : complex.vertices()) patches += v.patch_euler();
  return patches - complex.exposed_arc_count() + complex.exposed_corner_count();
}

double gauss_bonnet(const AlphaComplex& complex) {
  return 2 * std::numbers::pi * boundary_euler_characteristic(complex);
}

}  // namespace sfd
