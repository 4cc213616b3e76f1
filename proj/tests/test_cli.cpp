#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "events.hpp"
#include "sfd/io.hpp"
#include "sfd/measures.hpp"
#include "support.hpp"

using namespace sfd;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

class ScratchDir {
 public:
  ScratchDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("sfd_cli_" + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~ScratchDir() { fs::remove_all(path_); }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path p = path_ / name;
    std::ofstream(p) << text;
    return p.string();
  }

  std::string write(const std::string& name, const BallSet& set) const {
    std::ostringstream text;
    text.precision(17);
    for (const BallD& b : set)
      text << b.center.x() << ' ' << b.center.y() << ' ' << b.center.z() << ' ' << b.radius << ' '
           << b.weight << '\n';
    return write(name, text.str());
  }

 private:
  fs::path path_;
};

struct Outcome {
  int code;
  std::string text;
  json doc;
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sfd");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  const int code = cli::run(int(argv.size()), argv.data(), out);
  return {code, out.str(), json::parse(out.str())};
}

class EnvOverride {
 public:
  EnvOverride(const char* name, const char* value) : name_(name) { setenv(name, value, 1); }
  ~EnvOverride() { unsetenv(name_); }
  EnvOverride(const EnvOverride&) = delete;
  EnvOverride& operator=(const EnvOverride&) = delete;

 private:
  const char* name_;
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("ball file parsing") {
    std::istringstream good("# header\n\n1 2 3 1.5 -0.5  # trailing comment\n+4 5e-1 6 2 1\n");
    const BallFile file = parse_ball_file(good);
    REQUIRE(file.balls.size() == 2);
    CHECK(file.balls[0].weight == -0.5);
    CHECK(file.balls[1].center.y() == 0.5);

    auto line_of = [](const std::string& text) {
      std::istringstream in(text);
      try {
        parse_ball_file(in);
      } catch (const ParseError& e) {
        return e.line();
      }
      return -1;
    };
    CHECK(line_of("0 0 0 1 1\n0 0 0 1\n") == 2);
    CHECK(line_of("0 0 0 1 1\n\n0 0 0 -1 1\n") == 3);
    CHECK(line_of("0 0 x 1 1\n") == 1);
    CHECK(line_of("0 0 0 1 inf\n") == 1);
    CHECK(line_of("0 0 0 1 1 1\n") == 1);
    CHECK(line_of("# nothing\n") >= 0);
    CHECK_THROWS_AS(read_ball_file("/nonexistent/balls.txt"), ParseError);
  }

  TEST_CASE("digest depends on the bytes") {
    std::istringstream a("0 0 0 1 1\n"), b("0 0 0 1 1\n"), c("0 0 0 1.0 1\n");
    const auto da = parse_ball_file(a).digest;
    CHECK(da == parse_ball_file(b).digest);
    CHECK(da != parse_ball_file(c).digest);
  }

  TEST_CASE("measures command") {
    ScratchDir dir;
    const std::string path = dir.write("pair.txt", "0 0 0 1 1\n1 0 0 1 1\n");
    const Outcome r = run_cli({"measures", path, "--mu", "0,0,0,3"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["status"] == "ok");
    CHECK(r.doc["command"] == "measures");
    CHECK(r.doc["input"]["balls"] == 2);
    CHECK(std::abs(r.doc["measures"]["mean"].get<double>() - 16.0004) < 1e-4);
    CHECK(std::abs(r.doc["energy"].get<double>() - 4 * std::numbers::pi) < 1e-12);
    CHECK(r.doc["degeneracies"].empty());
  }

  TEST_CASE("numbers survive the round trip through JSON") {
    ScratchDir dir;
    std::mt19937_64 rng(4);
    const BallSet set = testing::random_balls(rng, {6, 0.8, 1.6, -1, 2, 3.0});
    const std::string path = dir.write("set.txt", set);
    const BallSet parsed = read_ball_file(path).balls;
    for (std::size_t i = 0; i < set.size(); ++i) CHECK(parsed[i].center == set[i].center);
    const MeasureSet m = weighted_measures(parsed);
    const Outcome r = run_cli({"measures", path});
    CHECK(r.doc["measures"]["volume"].get<double>() == m.volume);
    CHECK(r.doc["measures"]["area"].get<double>() == m.area);
    CHECK(r.doc["measures"]["mean"].get<double>() == m.mean);
    CHECK(r.doc["measures"]["gauss"].get<double>() == m.gauss);
  }

  TEST_CASE("errors are JSON with stable exit codes") {
    ScratchDir dir;
    const Outcome parse = run_cli({"measures", dir.write("bad.txt", "0 0 0 1 1\n0 0 0 1\n")});
    CHECK(parse.code == cli::kParse);
    CHECK(parse.doc["status"] == "error");
    CHECK(parse.doc["error"]["line"] == 2);

    const Outcome missing = run_cli({"measures", "/nonexistent/balls.txt"});
    CHECK(missing.code == cli::kParse);

    CHECK(run_cli({}).code == cli::kUsage);
    CHECK(run_cli({"gradient", "x", "--which", "torsion"}).code == cli::kUsage);
    const Outcome usage = run_cli({"measures"});
    CHECK(usage.code == cli::kUsage);
    CHECK(usage.doc["error"]["kind"] == "Usage");

    const Outcome tangent = run_cli({"gradient", dir.write("tangent.txt", "0 0 0 1 1\n2 0 0 1 1\n")});
    CHECK(tangent.code == cli::kDegenerate);
    REQUIRE(tangent.doc["error"]["reports"].size() == 1);
    CHECK(tangent.doc["error"]["reports"][0]["label"] == "C1");
  }

  TEST_CASE("gradient command") {
    ScratchDir dir;
    const std::string path = dir.write("pair.txt", "0 0 0 1 1\n1 0 0 1 1\n");
    const Outcome r = run_cli({"gradient", path, "--which", "mean"});
    CHECK(r.code == cli::kOk);
    CHECK_FALSE(r.doc["gradients"].contains("volume"));
    const json& mean = r.doc["gradients"]["mean"];
    REQUIRE(mean["total"].size() == 2);
    CHECK(mean["total"][0][0].get<double>() == doctest::Approx(-mean["total"][1][0].get<double>()));
    CHECK(mean.contains("p"));
  }

  TEST_CASE("tolerance from the environment") {
    ScratchDir dir;
    const std::string path = dir.write("near.txt", "0 0 0 1 1\n1.99999 0 0 1 1\n");
    CHECK(run_cli({"measures", path}).doc["degeneracies"].empty());
    {
      EnvOverride env("SFD_TOLERANCE", "1e-3");
      const Outcome loose = run_cli({"measures", path});
      REQUIRE(loose.doc["degeneracies"].size() == 1);
      CHECK(loose.doc["degeneracies"][0]["label"] == "C1");
      CHECK(run_cli({"--tolerance", "1e-12", "measures", path}).doc["degeneracies"].empty());
    }
    EnvOverride bad("SFD_TOLERANCE", "-1");
    CHECK(run_cli({"measures", path}).code == cli::kUsage);
  }

  TEST_CASE("check command is deterministic") {
    ScratchDir dir;
    std::mt19937_64 rng(6);
    const std::string path = dir.write("set.txt", testing::random_balls(rng, {6, 0.8, 1.6, 1, 1, 3.0}));
    const Outcome first = run_cli({"check", path, "--seed", "3", "--samples", "20000"});
    const Outcome second = run_cli({"check", path, "--seed", "3", "--samples", "20000"});
    CHECK(first.code == cli::kOk);
    CHECK(first.text == second.text);
    std::vector<std::string> names;
    for (const json& c : first.doc["checks"]) names.push_back(c["name"]);
    CHECK(names == std::vector<std::string>{"fd_volume", "fd_area", "fd_mean", "mc_fractions",
                                            "steiner_area", "steiner_mean", "gauss_bonnet"});
    for (const json& c : first.doc["checks"])
      if (c["name"] != "steiner_mean") CHECK(c["passed"] == true);
  }

  TEST_CASE("check command on a degeneracy skips finite differences") {
    ScratchDir dir;
    const std::string path = dir.write("tangent.txt", "0 0 0 1 1\n2 0 0 1 1\n");
    const Outcome r = run_cli({"check", path, "--samples", "1000"});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["checks"][0]["skipped"] == true);
    CHECK(r.doc["checks"][0]["reason"]["kind"] == "CrossedDegeneracy");
  }

  TEST_CASE("classify command") {
    ScratchDir dir;
    const testing::EventCase c1 = testing::single_violation_cases().front();
    const LinearTrajectory path = c1.path();
    const Outcome r = run_cli({"classify", dir.write("a.txt", path.at(0)), dir.write("b.txt", path.at(1))});
    CHECK(r.code == cli::kOk);
    CHECK(r.doc["event"]["label"] == "C1");
    CHECK(r.doc["probe"]["matches_prediction"] == true);

    const LinearTrajectory flip = testing::flip_path(testing::FlipKind::TwoThree, false);
    const Outcome f = run_cli({"classify", dir.write("f0.txt", flip.at(0)), dir.write("f1.txt", flip.at(1))});
    CHECK(f.code == cli::kOk);
    CHECK(f.doc["event"]["label"] == "FLIP(3->2)");
    CHECK(f.doc["continuity"]["mean_jump"].get<double>() < 1e-4);

    const std::string before = dir.write("m0.txt", "0 0 0 1 1\n2.1 0 0 1 1\n0 10 0 1 1\n2.1 10 0 1 1\n");
    const std::string after = dir.write("m1.txt", "0 0 0 1 1\n1.9 0 0 1 1\n0 10 0 1 1\n1.9 10 0 1 1\n");
    const Outcome multi = run_cli({"classify", before, after});
    CHECK(multi.code == cli::kUnrecognized);
    CHECK(multi.doc["error"]["kind"] == "UnrecognizedEvent");
  }
}
