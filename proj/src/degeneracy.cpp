#include "sfd/degeneracy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iterator>
#include <set>

#include "sfd/gradients.hpp"
#include "sfd/measures.hpp"
#include "sfd/regular_triangulation.hpp"

namespace sfd {
namespace {

// Distance, in units of the mean radius, at which both sides of an event are
// sampled. Fractions of simplices born at a vertex event grow like eps^2 or
// eps^3 and must clear the round-off floor of the complex.
constexpr double kClassifyOffset = 1e-5;

struct Signature {
  std::array<int, 4> count{};  // simplices of dimension 0..3
  bool operator==(const Signature&) const = default;
};

Signature signature_of(const std::vector<Simplex>& simplices) {
  Signature s;
  for (const Simplex& x : simplices) ++s.count[x.dim];
  return s;
}

struct LabelSignature {
  CaseLabel label;
  Signature signature;
};

// Simplices gained or lost in each Condition II event: one interval of the
// face lattice from the lowest to the highest simplex.
constexpr std::array<LabelSignature, 9> kSignatures{{
    {CaseLabel::C1, {{0, 1, 0, 0}}},
    {CaseLabel::C2, {{0, 0, 1, 0}}},
    {CaseLabel::C3, {{0, 0, 0, 1}}},
    {CaseLabel::N01, {{1, 1, 0, 0}}},
    {CaseLabel::N02, {{1, 2, 1, 0}}},
    {CaseLabel::N03, {{1, 3, 3, 1}}},
    {CaseLabel::N12, {{0, 1, 1, 0}}},
    {CaseLabel::N13, {{0, 1, 2, 1}}},
    {CaseLabel::N23, {{0, 0, 1, 1}}},
}};

bool is_interval(const std::vector<Simplex>& simplices) {
  const auto [lo, hi] = std::minmax_element(
      simplices.begin(), simplices.end(),
      [](const Simplex& a, const Simplex& b) { return a.dim < b.dim; });
  for (const Simplex& s : simplices) {
    if (!(*lo == s || lo->is_face_of(s))) return false;
    if (!(*hi == s || s.is_face_of(*hi))) return false;
  }
  return true;
}

std::vector<Simplex> difference(const std::vector<Simplex>& a, const std::vector<Simplex>& b) {
  std::vector<Simplex> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<int> vertices_of(const std::vector<Simplex>& a, const std::vector<Simplex>& b) {
  std::set<int> ids;
  for (const auto* list : {&a, &b})
    for (const Simplex& s : *list)
      for (int k = 0; k < s.size(); ++k) ids.insert(s.v[k]);
  return {ids.begin(), ids.end()};
}

int count_dim(const std::vector<Simplex>& simplices, int dim) {
  return int(std::count_if(simplices.begin(), simplices.end(),
                           [dim](const Simplex& s) { return s.dim == dim; }));
}

DegeneracyReport flip_report(int before, int after) {
  DegeneracyReport r = make_report(CaseLabel::Flip);
  r.flip_before = before;
  r.flip_after = after;
  return r;
}

// Reclassifies a near-degenerate configuration by moving one ball a little
// to either side along dir and comparing the two complexes.
CaseLabel label_by_straddle(const BallSet& set, int mover, const Vector3& dir, double delta,
                            CaseLabel fallback) {
  Eigen::VectorXd state = set.state();
  Eigen::VectorXd minus = state, plus = state;
  minus.segment<3>(3 * mover) -= delta * dir;
  plus.segment<3>(3 * mover) += delta * dir;
  try {
    const DegeneracyReport r = classify_event(build_alpha_complex(set.with_state(minus)),
                                              build_alpha_complex(set.with_state(plus)));
    if (r.label != CaseLabel::Flip) return r.label;
  } catch (const Error&) {
  }
  return fallback;
}

Vector3 orthocenter(const BallSet& set, const Simplex& tet) {
  const BallD& a = set[tet.v[0]];
  Eigen::Matrix3d m;
  Vector3 rhs;
  for (int r = 0; r < 3; ++r) {
    const BallD& b = set[tet.v[r + 1]];
    m.row(r) = 2 * (b.center - a.center).transpose();
    rhs[r] = b.center.squaredNorm() - b.radius * b.radius - a.center.squaredNorm() +
             a.radius * a.radius;
  }
  return m.fullPivLu().solve(rhs);
}

void append_flips(const BallSet& set, double tol, double scale,
                  std::vector<DegeneracyReport>& out) {
  RegularTriangulation rt;
  try {
    rt = build_regular_triangulation(set);
  } catch (const Error&) {
    return;
  }
  const std::vector<Simplex> tets = rt.tetrahedra();
  const double rmax = set.max_radius();
  std::set<std::array<int, 5>> seen;
  for (const Simplex& t : tets) {
    const Vector3 z = orthocenter(set, t);
    const double pz = power_distance(set[t.v[0]], z);
    if (!std::isfinite(pz)) continue;
    const double reach2 = pz + rmax * rmax;
    if (reach2 < 0) continue;
    for (std::size_t m = 0; m < set.size(); ++m) {
      if (t.contains(int(m))) continue;
      if ((set[m].center - z).squaredNorm() > reach2 * (1 + tol) + tol * scale * scale) continue;
      const double prox = std::abs(power_distance(set[m], z) - pz) / (scale * scale);
      if (prox >= tol) continue;
      std::array<int, 5> key{t.v[0], t.v[1], t.v[2], t.v[3], int(m)};
      std::sort(key.begin(), key.end());
      if (!seen.insert(key).second) continue;
      const int before = int(std::count_if(tets.begin(), tets.end(), [&](const Simplex& s) {
        return std::all_of(s.v.begin(), s.v.end(), [&](int v) {
          return std::find(key.begin(), key.end(), v) != key.end();
        });
      }));
      DegeneracyReport r = flip_report(before, 5 - before);
      r.condition = 1;
      r.involved.assign(key.begin(), key.end());
      r.proximity = prox;
      out.push_back(std::move(r));
    }
  }
}

std::vector<int> common(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

const char* to_string(CaseLabel label) {
  switch (label) {
    case CaseLabel::C1: return "C1";
    case CaseLabel::C2: return "C2";
    case CaseLabel::C3: return "C3";
    case CaseLabel::N01: return "N01";
    case CaseLabel::N02: return "N02";
    case CaseLabel::N03: return "N03";
    case CaseLabel::N12: return "N12";
    case CaseLabel::N13: return "N13";
    case CaseLabel::N23: return "N23";
    case CaseLabel::Flip: return "FLIP";
  }
  return "?";
}

const char* to_string(MeanOrder order) {
  switch (order) {
    case MeanOrder::SqrtEps: return "sqrt(eps)";
    case MeanOrder::Eps: return "eps";
    case MeanOrder::Continuous: return "continuous";
  }
  return "?";
}

const char* to_string(GradientJump jump) {
  switch (jump) {
    case GradientJump::Unbounded: return "unbounded";
    case GradientJump::Bounded: return "bounded";
    case GradientJump::None: return "none";
  }
  return "?";
}

std::string DegeneracyReport::label_name() const {
  if (label != CaseLabel::Flip) return to_string(label);
  return "FLIP(" + std::to_string(flip_before) + "->" + std::to_string(flip_after) + ")";
}

DegeneracyReport make_report(CaseLabel label) {
  DegeneracyReport r;
  r.label = label;
  switch (label) {
    case CaseLabel::C1:
    case CaseLabel::C2:
    case CaseLabel::N02:
    case CaseLabel::N12:
      r.predicted_mean_order = MeanOrder::SqrtEps;
      r.predicted_gradient_jump = GradientJump::Unbounded;
      break;
    case CaseLabel::Flip:
      r.condition = 1;
      r.predicted_mean_order = MeanOrder::Continuous;
      r.predicted_gradient_jump = GradientJump::None;
      break;
    default:
      r.predicted_mean_order = MeanOrder::Eps;
      r.predicted_gradient_jump = GradientJump::Bounded;
  }
  return r;
}

DegeneracyReport classify_event(const AlphaComplex& before, const AlphaComplex& after) {
  const auto& mb = before.mosaic();
  const auto& ma = after.mosaic();
  if (mb && ma && *mb != *ma) {
    const auto gone = difference(*mb, *ma);
    const auto born = difference(*ma, *mb);
    if (gone.size() + born.size() != 5)
      throw UnrecognizedEvent("regular triangulation changed by more than one flip",
                              vertices_of(gone, born));
    DegeneracyReport r = flip_report(int(gone.size()), int(born.size()));
    r.involved = vertices_of(gone, born);
    r.removed = difference(before.simplices(), after.simplices());
    r.added = difference(after.simplices(), before.simplices());
    return r;
  }

  const auto sb = before.simplices();
  const auto sa = after.simplices();
  auto removed = difference(sb, sa);
  auto added = difference(sa, sb);
  const std::vector<int> involved = vertices_of(removed, added);
  if (removed.empty() && added.empty())
    throw UnrecognizedEvent("complexes are identical", {});

  if (!removed.empty() && !added.empty()) {
    const int gone = count_dim(removed, 3), born = count_dim(added, 3);
    if (gone + born != 5)
      throw UnrecognizedEvent("simplices both gained and lost", involved);
    DegeneracyReport r = flip_report(gone, born);
    r.involved = involved;
    r.removed = std::move(removed);
    r.added = std::move(added);
    return r;
  }

  const auto& changed = added.empty() ? removed : added;
  const Signature sig = signature_of(changed);
  for (const LabelSignature& ls : kSignatures) {
    if (!(ls.signature == sig)) continue;
    if (!is_interval(changed)) break;
    DegeneracyReport r = make_report(ls.label);
    r.involved = involved;
    r.removed = std::move(removed);
    r.added = std::move(added);
    return r;
  }
  throw UnrecognizedEvent("change does not match a single degeneracy", involved);
}

std::vector<DegeneracyReport> check_general_position(const BallSet& set, double tol) {
  std::vector<DegeneracyReport> out;
  if (set.empty()) return out;
  const double scale = set.mean_radius();
  const double floor = kClassifyOffset * scale;
  auto delta_for = [&](double prox) { return 2 * prox * scale + floor; };

  // pairs: external and internal tangency
  for (std::size_t i = 0; i < set.size(); ++i)
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const Vector3 diff = set[j].center - set[i].center;
      const double d = diff.norm();
      const double ri = set[i].radius, rj = set[j].radius;
      if (d > ri + rj + tol * scale) continue;
      const double outer = std::abs(ri + rj - d) / scale;
      const double inner = std::abs(d - std::abs(ri - rj)) / scale;
      const bool is_outer = outer < inner;
      const double prox = std::min(outer, inner);
      if (prox >= tol) continue;
      const Vector3 dir = d > 0 ? Vector3(diff / d) : Vector3::UnitX();
      DegeneracyReport r = make_report(label_by_straddle(
          set, int(j), dir, delta_for(prox), is_outer ? CaseLabel::C1 : CaseLabel::N01));
      r.involved = {int(i), int(j)};
      r.proximity = prox;
      out.push_back(std::move(r));
    }

  const AlphaComplex cx = build_alpha_complex(set);

  // circle tangent to a third sphere
  for (const EdgeRecord& e : cx.edges()) {
    const PairGeometry<double>& g = e.geometry;
    for (int k : common(cx.neighbors(e.i), cx.neighbors(e.j))) {
      if (k == e.i || k == e.j) continue;
      const Vector3 w = set[k].center - g.circle_center;
      const double b = w.dot(g.u);
      const Vector3 in_plane = w - b * g.u;
      const double a = in_plane.norm();
      const Vector3 radial = a > 0 ? Vector3(in_plane / a) : Vector3(e.e1);
      const double rk = set[k].radius, rho = g.circle_radius;
      const double near = std::hypot(a - rho, b), far = std::hypot(a + rho, b);
      const double near_gap = std::abs(near - rk), far_gap = std::abs(far - rk);
      const bool is_near = near_gap <= far_gap;
      const double prox = std::min(near_gap, far_gap) / scale;
      if (prox >= tol) continue;
      const Vector3 touch = g.circle_center + (is_near ? rho : -rho) * radial;
      const Vector3 dir = (set[k].center - touch).normalized();
      DegeneracyReport r = make_report(label_by_straddle(
          set, k, dir, delta_for(prox), is_near ? CaseLabel::C2 : CaseLabel::N12));
      r.involved = {e.i, e.j, k};
      std::sort(r.involved.begin(), r.involved.end());
      r.proximity = prox;
      out.push_back(std::move(r));
    }
  }

  // triple point on a fourth sphere
  for (const TriangleRecord& t : cx.triangles()) {
    const auto shared = common(common(cx.neighbors(t.i), cx.neighbors(t.j)), cx.neighbors(t.k));
    for (int l : shared) {
      if (l == t.i || l == t.j || l == t.k) continue;
      for (int side : {1, -1}) {
        const Vector3& p = t.point(side);
        const Vector3 w = set[l].center - p;
        const double prox = std::abs(w.norm() - set[l].radius) / scale;
        if (prox >= tol) continue;
        DegeneracyReport r = make_report(
            label_by_straddle(set, l, w.normalized(), delta_for(prox), CaseLabel::C3));
        r.involved = {t.i, t.j, t.k, l};
        std::sort(r.involved.begin(), r.involved.end());
        r.proximity = prox;
        out.push_back(std::move(r));
      }
    }
  }

  append_flips(set, tol, scale, out);
  return out;
}

LinearTrajectory::LinearTrajectory(BallSet base, Eigen::VectorXd from, Eigen::VectorXd to)
    : base_(std::move(base)), from_(std::move(from)), to_(std::move(to)) {
  if (from_.size() != to_.size() || from_.size() != Eigen::Index(3 * base_.size()))
    throw InvalidInput("trajectory endpoints do not match the ball set");
}

LinearTrajectory::LinearTrajectory(const BallSet& from, const BallSet& to)
    : LinearTrajectory(from, from.state(), to.state()) {}

EventLocation locate_event(const LinearTrajectory& path, bool with_mosaic) {
  const ComplexOptions options{kDefaultTolerance, with_mosaic};
  auto key = [&](double s) {
    AlphaComplex cx = build_alpha_complex(path.at(s), options);
    auto simplices = cx.simplices();
    if (with_mosaic && cx.mosaic())
      simplices.insert(simplices.end(), cx.mosaic()->begin(), cx.mosaic()->end());
    return simplices;
  };
  const auto start = key(0), end = key(1);
  if (start == end) throw UnrecognizedEvent("no change along the trajectory", {});

  const double length = path.length();
  const double resolution = 1e-12 * std::max(1.0, path.at(0).mean_radius());
  EventLocation loc;
  while ((loc.after - loc.before) * length > resolution) {
    const double mid = 0.5 * (loc.before + loc.after);
    if (mid <= loc.before || mid >= loc.after) break;
    (key(mid) == start ? loc.before : loc.after) = mid;
  }
  // Classify slightly away from the event, where the near-tangent records
  // are resolved without relying on the construction tolerance.
  const double nudge = kClassifyOffset * path.at(0).mean_radius() / length;
  loc.report = classify_event(
      build_alpha_complex(path.at(std::max(0.0, loc.before - nudge)), options),
      build_alpha_complex(path.at(std::min(1.0, loc.after + nudge)), options));
  return loc;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(x[k]);
    my += std::log(std::max(y[k], 1e-300));
  }
  mx /= double(n);
  my /= double(n);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(std::max(y[k], 1e-300)) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

ProbeResult probe_order(const LinearTrajectory& path) {
  ProbeResult out;
  out.event = locate_event(path);
  const DegeneracyReport& report = out.event.report;
  if (report.label == CaseLabel::Flip)
    throw UnrecognizedEvent("probe_order expects a change of the alpha complex",
                            report.involved);

  // Measure from the side that lacks the extra simplices.
  const int sign = report.added.empty() ? -1 : 1;
  const double absent = sign > 0 ? out.event.before : out.event.after;
  const double length = path.length();
  const Eigen::VectorXd t = sign * path.direction();

  // The absent side is smooth up to the event; sample it a little way back
  // to stay clear of near-tangent records and extrapolate linearly.
  const double scale = path.at(absent).mean_radius();
  const double back = 1e-9 * scale;
  const BallSet base = path.at(absent - sign * back / length);
  const AlphaComplex base_cx = build_alpha_complex(base);
  const Eigen::VectorXd g0 = mean_curvature_gradient(base_cx, base).g;
  const double slope0 = g0.dot(t);
  const double m0 = weighted_mean_curvature(base_cx, base) + back * slope0;
  const auto present_simplices =
      build_alpha_complex(path.at(absent + sign * kClassifyOffset * scale / length)).simplices();

  out.eps = {1e-2, 1e-3, 1e-4, 1e-5};
  for (double eps : out.eps) {
    const BallSet at = path.at(absent + sign * eps / length);
    const AlphaComplex cx = build_alpha_complex(at);
    if (cx.simplices() != present_simplices)
      throw UnrecognizedEvent("another event lies within the probe range", report.involved);
    const double m = weighted_mean_curvature(cx, at);
    out.mean_change.push_back(std::abs(m - m0 - eps * slope0));
    out.gradient_jump.push_back((mean_curvature_gradient(cx, at).g - g0).norm());
  }
  out.mean_exponent = loglog_slope(out.eps, out.mean_change);
  out.gradient_exponent = loglog_slope(out.eps, out.gradient_jump);
  out.gradient_bounded = out.gradient_exponent >= -0.25;
  return out;
}

}  // namespace sfd
