#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <random>
#include <sstream>

#include "sfd/degeneracy.hpp"
#include "sfd/gradients.hpp"
#include "sfd/io.hpp"
#include "sfd/measures.hpp"
#include "sfd/oracles.hpp"

namespace sfd::cli {
namespace {

using nlohmann::json;

constexpr const char* kToleranceEnv = "SFD_TOLERANCE";

// Failure that is reported as JSON with a chosen exit code.
struct Failure {
  int code;
  json error;
};

json error_json(const Error& e) {
  json j{{"kind", to_string(e.kind())}, {"message", e.what()}, {"involved", e.involved()}};
  if (const auto* p = dynamic_cast<const ParseError*>(&e)) j["line"] = p->line();
  return j;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError:
    case ErrorKind::InvalidInput: return kParse;
    case ErrorKind::UnrecognizedEvent: return kUnrecognized;
    default: return kDegenerate;
  }
}

json triples(const Eigen::VectorXd& g) {
  json out = json::array();
  for (Eigen::Index i = 0; i + 2 < g.size(); i += 3) out.push_back({g[i], g[i + 1], g[i + 2]});
  return out;
}

json simplices_json(const std::vector<Simplex>& simplices) {
  json out = json::array();
  for (const Simplex& s : simplices) out.push_back(std::vector<int>(s.begin(), s.end()));
  return out;
}

json report_json(const DegeneracyReport& r) {
  return json{{"condition", r.condition},
              {"label", r.label_name()},
              {"involved", r.involved},
              {"proximity", r.proximity},
              {"predicted", {{"mean_order", to_string(r.predicted_mean_order)},
                             {"gradient_jump", to_string(r.predicted_gradient_jump)}}},
              {"added", simplices_json(r.added)},
              {"removed", simplices_json(r.removed)}};
}

json reports_json(const std::vector<DegeneracyReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) out.push_back(report_json(r));
  return out;
}

json measures_json(const MeasureSet& m) {
  return json{{"volume", m.volume}, {"area", m.area}, {"mean", m.mean}, {"gauss", m.gauss}};
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

json input_json(const std::string& path, const BallFile& file) {
  return json{{"path", path}, {"balls", file.balls.size()}, {"digest", hex(file.digest)}};
}

struct Settings {
  double tolerance = kDefaultTolerance;
  ComplexOptions complex() const { return ComplexOptions{tolerance, false}; }
};

json cmd_measures(const Settings& settings, const std::string& path,
                  const std::vector<double>& mu) {
  const BallFile file = read_ball_file(path);
  const AlphaComplex cx = build_alpha_complex(file.balls, settings.complex());
  const MeasureSet m = weighted_measures(cx, file.balls, equal_corner_split());
  json doc{{"input", input_json(path, file)},
           {"measures", measures_json(m)},
           {"degeneracies", reports_json(check_general_position(file.balls, settings.tolerance))}};
  if (!mu.empty())
    doc["energy"] = morphometric_energy(m, MorphometricCoefficients{mu[0], mu[1], mu[2], mu[3]});
  return doc;
}

json cmd_gradient(const Settings& settings, const std::string& path, const std::string& which) {
  const BallFile file = read_ball_file(path);
  const auto reports = check_general_position(file.balls, settings.tolerance);
  for (const auto& r : reports)
    if (r.condition == 2) {
      json error = error_json(DegenerateState("state lies on a gradient discontinuity",
                                              r.involved));
      error["reports"] = reports_json(reports);
      throw Failure{kDegenerate, std::move(error)};
    }

  const AlphaComplex cx = build_alpha_complex(file.balls, settings.complex());
  json gradients;
  if (which == "volume" || which == "all")
    gradients["volume"] = triples(volume_gradient(cx, file.balls).g);
  if (which == "area" || which == "all")
    gradients["area"] = triples(area_gradient(cx, file.balls).g);
  if (which == "mean" || which == "all") {
    const GradientField m = mean_curvature_gradient(cx, file.balls);
    gradients["mean"] = {{"total", triples(m.g)},
                         {"p", triples(*m.p)},
                         {"q", triples(*m.q)},
                         {"s", triples(*m.s)}};
  }
  return json{{"input", input_json(path, file)},
              {"gradients", gradients},
              {"degeneracies", reports_json(reports)}};
}

// Relative error of an analytic directional derivative against FD, with a
// floor that keeps accidental near-zero derivatives from dominating.
double fd_relative_error(double analytic, double fd, double gradient_norm) {
  const double floor = std::max({std::abs(fd), 1e-3 * gradient_norm, 1e-300});
  return std::abs(analytic - fd) / floor;
}

json fd_check(const std::string& name, const BallSet& set, std::uint64_t seed, double step,
              const std::function<double(const AlphaComplex&, const BallSet&)>& measure,
              const std::function<Eigen::VectorXd(const AlphaComplex&, const BallSet&)>& grad) {
  constexpr double kRelTol = 1e-6;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const AlphaComplex cx = build_alpha_complex(set);
  const Eigen::VectorXd g = grad(cx, set);
  double worst = 0;
  try {
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd t(3 * set.size());
      for (Eigen::Index k = 0; k < t.size(); ++k) t[k] = normal(rng);
      t.normalize();
      const double fd = fd_directional(
          [&](const BallSet& s) { return measure(build_alpha_complex(s), s); }, set, t,
          FDConfig{step, true});
      worst = std::max(worst, fd_relative_error(g.dot(t), fd, g.norm()));
    }
  } catch (const CrossedDegeneracy& e) {
    return json{{"name", name}, {"skipped", true}, {"reason", error_json(e)}};
  }
  return json{{"name", name}, {"passed", worst <= kRelTol}, {"max_relative_error", worst},
              {"tolerance", kRelTol}};
}

json cmd_check(const Settings& settings, const std::string& path, std::uint64_t seed,
               std::int64_t samples, double step) {
  const BallFile file = read_ball_file(path);
  const BallSet& set = file.balls;
  const AlphaComplex cx = build_alpha_complex(set, settings.complex());
  json checks = json::array();

  checks.push_back(fd_check(
      "fd_volume", set, seed, step, [](auto& c, auto& s) { return weighted_volume(c, s); },
      [](auto& c, auto& s) { return volume_gradient(c, s).g; }));
  checks.push_back(fd_check(
      "fd_area", set, seed + 1, step, [](auto& c, auto& s) { return weighted_area(c, s); },
      [](auto& c, auto& s) { return area_gradient(c, s).g; }));
  checks.push_back(fd_check(
      "fd_mean", set, seed + 2, step,
      [](auto& c, auto& s) { return weighted_mean_curvature(c, s); },
      [](auto& c, auto& s) { return mean_curvature_gradient(c, s).g; }));

  {
    const auto mc = mc_fractions(set, MCConfig{samples, seed, 0});
    double worst = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
      const VertexRecord& v = cx.vertices()[i];
      for (auto [estimate, error, exact] : {std::tuple{mc[i].sigma, mc[i].sigma_error, v.sigma},
                                            std::tuple{mc[i].nu, mc[i].nu_error, v.nu}}) {
        const double miss = std::abs(estimate - exact);
        worst = std::max(worst, error > 0 ? miss / error : (miss > 1e-12 ? HUGE_VAL : 0.0));
      }
    }
    checks.push_back(json{{"name", "mc_fractions"},
                          {"passed", worst <= 3},
                          {"max_abs_z", worst},
                          {"samples", samples}});
  }

  try {
    const SteinerFit fit = steiner_fit(set);
    const MeasureSet unit = weighted_measures(set.with_unit_weights());
    const double area_err = std::abs(fit.area - unit.area) / std::abs(unit.area);
    const double mean_err = std::abs(fit.mean - unit.mean) / std::abs(unit.mean);
    checks.push_back(json{{"name", "steiner_area"},
                          {"passed", area_err <= 1e-6},
                          {"relative_error", area_err},
                          {"fit", fit.area},
                          {"analytic", unit.area}});
    checks.push_back(json{{"name", "steiner_mean"},
                          {"passed", mean_err <= 1e-3},
                          {"relative_error", mean_err},
                          {"fit", fit.mean},
                          {"analytic", unit.mean},
                          {"fit_residual", fit.residual}});
  } catch (const TopologyChange& e) {
    checks.push_back(json{{"name", "steiner"}, {"skipped", true}, {"reason", error_json(e)}});
  }

  {
    const double g = weighted_gaussian_curvature(cx, set.with_unit_weights(),
                                                 equal_corner_split());
    const double expected = gauss_bonnet(cx);
    const double err = std::abs(g - expected);
    checks.push_back(json{{"name", "gauss_bonnet"},
                          {"passed", err <= 1e-9 * std::max(1.0, std::abs(expected))},
                          {"gauss", g},
                          {"two_pi_chi", expected},
                          {"euler_characteristic", boundary_euler_characteristic(cx)}});
  }

  bool passed = true;
  for (const json& c : checks)
    if (c.contains("passed")) passed = passed && c["passed"].get<bool>();
  return json{{"input", input_json(path, file)},
              {"seed", seed},
              {"checks", checks},
              {"passed", passed}};
}

json cmd_classify(const std::string& path_a, const std::string& path_b) {
  const BallFile a = read_ball_file(path_a);
  const BallFile b = read_ball_file(path_b);
  if (a.balls.size() != b.balls.size())
    throw InvalidInput("the two states have different ball counts");
  for (std::size_t i = 0; i < a.balls.size(); ++i)
    if (a.balls[i].radius != b.balls[i].radius || a.balls[i].weight != b.balls[i].weight)
      throw InvalidInput("ball " + std::to_string(i) + " differs in radius or weight",
                         {int(i)});

  const LinearTrajectory path(a.balls, b.balls);
  const EventLocation loc = locate_event(path, true);
  json doc{{"inputs", {input_json(path_a, a), input_json(path_b, b)}},
           {"event", report_json(loc.report)},
           {"parameter", 0.5 * (loc.before + loc.after)}};

  if (loc.report.label == CaseLabel::Flip) {
    const double s = 0.5 * (loc.before + loc.after);
    const double h = 1e-6 / path.length();
    auto side = [&](double at) {
      const BallSet set = path.at(at);
      const AlphaComplex cx = build_alpha_complex(set);
      return std::pair{weighted_mean_curvature(cx, set), mean_curvature_gradient(cx, set).g};
    };
    const auto [m0, g0] = side(s - h);
    const auto [m1, g1] = side(s + h);
    doc["continuity"] = {{"straddle", 2e-6},
                         {"mean_jump", std::abs(m1 - m0)},
                         {"gradient_jump", (g1 - g0).norm()}};
    return doc;
  }

  const ProbeResult probe = probe_order(path);
  const double predicted =
      loc.report.predicted_mean_order == MeanOrder::SqrtEps ? 0.5 : 1.0;
  const bool predicted_bounded =
      loc.report.predicted_gradient_jump != GradientJump::Unbounded;
  doc["probe"] = {{"eps", probe.eps},
                  {"mean_change", probe.mean_change},
                  {"gradient_jump", probe.gradient_jump},
                  {"mean_exponent", probe.mean_exponent},
                  {"gradient_exponent", probe.gradient_exponent},
                  {"gradient_bounded", probe.gradient_bounded},
                  {"matches_prediction", std::abs(probe.mean_exponent - predicted) <= 0.1 &&
                                             probe.gradient_bounded == predicted_bounded}};
  return doc;
}

double default_tolerance() {
  const char* env = std::getenv(kToleranceEnv);
  if (!env || !*env) return kDefaultTolerance;
  char* end = nullptr;
  const double value = std::strtod(env, &end);
  if (*end != '\0' || !(value > 0) || !std::isfinite(value))
    throw CLI::ValidationError(std::string(kToleranceEnv) + " must be a positive number");
  return value;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"Weighted intrinsic volumes of ball unions and their gradients", "sfd"};
  app.require_subcommand(1);
  Settings settings;
  app.add_option("--tolerance", settings.tolerance,
                 std::string("relative degeneracy tolerance (default 1e-12, or $") +
                     kToleranceEnv + ")")
      ->check(CLI::PositiveNumber);

  std::string file, file_b, which = "all";
  std::vector<double> mu;
  std::uint64_t seed = 1;
  std::int64_t samples = 1'000'000;
  double step = 1e-5;

  auto* measures = app.add_subcommand("measures", "volume, area, mean and Gaussian curvature");
  measures->add_option("file", file, "ball file")->required();
  measures->add_option("--mu", mu, "morphometric coefficients mu0,mu1,mu2,mu3")
      ->delimiter(',')
      ->expected(4);

  auto* gradient = app.add_subcommand("gradient", "gradients with respect to the centers");
  gradient->add_option("file", file, "ball file")->required();
  gradient->add_option("--which", which, "volume|area|mean|all")
      ->check(CLI::IsMember({"volume", "area", "mean", "all"}));

  auto* check = app.add_subcommand("check", "compare analytic results with the oracles");
  check->add_option("file", file, "ball file")->required();
  check->add_option("--seed", seed, "random seed");
  check->add_option("--samples", samples, "Monte-Carlo samples per quantity")
      ->check(CLI::PositiveNumber);
  check->add_option("--fd-step", step, "finite-difference step")->check(CLI::PositiveNumber);

  auto* classify = app.add_subcommand("classify", "classify the event between two states");
  classify->add_option("before", file, "first state")->required();
  classify->add_option("after", file_b, "second state")->required();

  json doc;
  int code = kOk;
  try {
    settings.tolerance = default_tolerance();
    app.parse(argc, argv);
    doc["command"] = app.get_subcommands().front()->get_name();
    json body;
    if (*measures)
      body = cmd_measures(settings, file, mu);
    else if (*gradient)
      body = cmd_gradient(settings, file, which);
    else if (*check)
      body = cmd_check(settings, file, seed, samples, step);
    else
      body = cmd_classify(file, file_b);
    doc.update(body);
    doc["status"] = "ok";
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::Error& e) {
    doc["status"] = "error";
    doc["error"] = {{"kind", "Usage"}, {"message", e.what()}};
    code = kUsage;
  } catch (const Failure& f) {
    doc["status"] = "error";
    doc["error"] = f.error;
    code = f.code;
  } catch (const Error& e) {
    doc["status"] = "error";
    doc["error"] = error_json(e);
    code = exit_code_for(e.kind());
  }
  out << doc.dump(2) << '\n';
  return code;
}

}  // namespace sfd::cli
