#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "collinear/verify.hpp"

using namespace collinear;
using namespace collinear::cli;
using nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "collinear");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "collinear_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write_json(const std::string& name, const json& doc) {
  const auto path = scratch(name);
  std::ofstream(path) << doc.dump(2);
  return path.string();
}

std::vector<std::vector<double>> read_csv(const std::string& path, std::vector<std::string>& header) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::stringstream ls(line);
    std::vector<double> row;
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("config parsing is strict") {
  auto c = parse_config(json{{"scenario", "relative_equilibrium"}, {"masses", {1, 2, 3}}, {"periods", 2}});
  CHECK(c.kind == ScenarioKind::relative_equilibrium);
  CHECK(c.masses.size() == 3);
  CHECK_NOTHROW(validate(c));
  CHECK(c.potential.size() == 1);

  auto round_trip = parse_config(to_json(c));
  CHECK(to_json(round_trip) == to_json(c));

  try {
    parse_config(json{{"scenario", "homographic"}, {"integrator", {{"rel_tol", 1e-9}, {"bogus", 1}}}});
    FAIL("expected an unknown-key error");
  } catch (const ConfigError& e) {
    CHECK(e.field() == "integrator.bogus");
  }
  CHECK_THROWS_AS(parse_config(json{{"masses", "1,2"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"scenario", "nope"}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json{{"potential", {{{"alpha", -1}}}}}), ConfigError);
}

TEST_CASE("config validation") {
  auto base = [] {
    ScenarioConfig c;
    c.kind = ScenarioKind::relative_equilibrium;
    c.masses = {1, 2, 3};
    c.periods = 1.0;
    return c;
  };
  CHECK_NOTHROW(validate(base()));
  auto c = base();
  c.schema = 2;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.t_end = 3.0;  // both t_end and periods
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.periods = -1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.ordering = {0, 0, 1};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.potential = {{-1, -1}};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.masses = {1, -1, 2};
  CHECK_THROWS_AS(validate(c), ConfigError);
  c = base();
  c.kind = ScenarioKind::non_central_control;
  c.gaps = {1, 1.4};
  CHECK_THROWS_AS(validate(c), ConfigError);  // omega0 missing
  c.omega0 = 1.0;
  CHECK_NOTHROW(validate(c));
  c = base();
  c.kind = ScenarioKind::figure_eight;
  CHECK_THROWS_AS(validate(c), ConfigError);  // masses are fixed by the fixture
  c.masses.clear();
  CHECK_NOTHROW(validate(c));
  c = base();
  c.kind = ScenarioKind::custom;
  c.periods.reset();
  c.t_end = 1.0;
  CHECK_THROWS_AS(validate(c), ConfigError);  // needs a state
  c.state = {{0, 0, 0, 1}, {1, 0, 0, 0}, {2, 0, 0, -1}};
  CHECK_NOTHROW(validate(c));
  c.tolerances.theorem = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("exit 0: simulate writes CSVs with constant inertia on a relative equilibrium") {
  const auto traj = scratch("re_traj.csv").string(), diag = scratch("re_diag.csv").string();
  auto r = invoke({"simulate", "--scenario", "relative_equilibrium", "--masses", "1,2,3", "--periods", "2",
                   "--trajectory", traj, "--diagnostics", diag});
  REQUIRE_MESSAGE(r.code == kOk, r.err);
  std::vector<std::string> header;
  auto rows = read_csv(diag, header);
  REQUIRE(header.size() == 13);
  CHECK(header[4] == "I");
  CHECK(header[12] == "K2");
  REQUIRE(rows.size() > 10);
  std::vector<double> inertia, energy;
  for (const auto& row : rows) {
    inertia.push_back(row[4]);
    energy.push_back(row[3]);
  }
  CHECK(relative_variation(inertia) <= 1e-8);
  CHECK(relative_variation(energy) <= 1e-9);

  std::vector<std::string> traj_header;
  auto traj_rows = read_csv(traj, traj_header);
  CHECK(traj_header.size() == 13);
  CHECK(traj_rows.size() == rows.size());

  auto to_stdout = invoke({"simulate", "--scenario", "figure_eight", "--t-end", "0.1"});
  CHECK(to_stdout.code == kOk);
  CHECK(to_stdout.out.rfind("t,x0,y0,vx0,vy0", 0) == 0);
  CHECK(to_stdout.err.find("energy_drift=") != std::string::npos);
}

TEST_CASE("exit 0: verify on relative equilibria and homographic orbits") {
  auto re = invoke({"verify", "--scenario", "relative_equilibrium", "--masses", "1,2,3", "--periods", "2"});
  CHECK_MESSAGE(re.code == kOk, (re.out + re.err));
  CHECK(re.out.find("hypothesis met") != std::string::npos);
  CHECK(re.out.find("overall PASS") != std::string::npos);

  const auto report = scratch("ecc_report.json").string();
  auto ecc = invoke({"verify", "--scenario", "homographic", "--masses", "1,2,3", "--omega-factor", "0.9", "--periods",
                     "1", "--report", report});
  CHECK_MESSAGE(ecc.code == kOk, (ecc.out + ecc.err));
  CHECK(ecc.out.find("hypothesis not_met") != std::string::npos);
  json doc;
  std::ifstream(report) >> doc;
  CHECK(doc["pass"] == true);
  CHECK(doc["config"]["scenario"] == "homographic");
  CHECK(doc["reports"].size() == 3);
}

TEST_CASE("exit 0: control run reports its expected breakdown") {
  auto r = invoke({"verify", "--scenario", "non_central_control", "--masses", "1,2,3", "--gaps", "1,1.4090427207884335",
                   "--omega0", "1.322", "--periods", "2", "--precision", "double"});
  CHECK_MESSAGE(r.code == kOk, (r.out + r.err));
  CHECK(r.out.find("control collinearity EXPECTED-FAIL") != std::string::npos);
}

TEST_CASE("exit 1: invalid configurations") {
  CHECK(invoke({"verify", "--scenario", "relative_equilibrium", "--masses", "1,0,3", "--periods", "1"}).code ==
        kInvalidConfig);
  CHECK(invoke({"cc", "--masses", "1,2", "--alpha", "0"}).code == kInvalidConfig);
  CHECK(invoke({"verify", "--config", scratch("missing.json").string()}).code == kInvalidConfig);
  const auto bad = write_json("bad.json", json{{"scenario", "relative_equilibrium"}, {"speed", 3}});
  auto r = invoke({"verify", "--config", bad});
  CHECK(r.code == kInvalidConfig);
  CHECK(r.err.find("speed") != std::string::npos);
  CHECK(invoke({"geometry", "count", "--n", "1"}).code == kInvalidConfig);
  CHECK(invoke({"frobnicate"}).code == kInvalidConfig);
}

TEST_CASE("exit 2: close approach keeps the partial trajectory") {
  const auto traj = scratch("fall.csv").string();
  const auto cfg = write_json("fall.json", json{{"scenario", "custom"},
                                                {"masses", {1, 1}},
                                                {"state", {{-0.5, 0, 0, 0}, {0.5, 0, 0, 0}}},
                                                {"t_end", 5},
                                                {"integrator", {{"min_separation", 1e-3}}},
                                                {"output", {{"trajectory", traj}}}});
  auto r = invoke({"simulate", "--config", cfg});
  CHECK(r.code == kCloseApproach);
  CHECK(r.err.find("close approach: bodies 0 and 1") != std::string::npos);
  std::vector<std::string> header;
  auto rows = read_csv(traj, header);
  CHECK_FALSE(rows.empty());
}

TEST_CASE("exit 3: solver failure") {
  // A pure power law with a positive exponent and negative coefficient repels at every scale.
  auto r = invoke({"cc", "--masses", "1,2,3", "--term", "-1:1", "--term", "-2:-5", "--normalize", "inertia", "--value",
                   "1e-4"});
  CHECK_MESSAGE(r.code == kSolverFailure, (r.out + r.err));
}

TEST_CASE("exit 4: hypothesis violation") {
  auto r = invoke({"verify", "--scenario", "homographic", "--masses", "1,1,1", "--omega-factor", "0", "--t-end",
                   "0.3"});
  CHECK(r.code == kHypothesisViolation);
  CHECK(r.err.find("non-zero angular momentum") != std::string::npos);
  auto eight = invoke({"verify", "--scenario", "figure_eight", "--periods", "0.1", "--check", "collinear_homographic"});
  CHECK(eight.code == kHypothesisViolation);
}

TEST_CASE("exit 5: verification failure") {
  const auto cfg = write_json("strict.json", json{{"scenario", "figure_eight"},
                                                  {"periods", 0.5},
                                                  {"check", "generic"},
                                                  {"tolerances", {{"conservation", 1e-300}}}});
  auto r = invoke({"verify", "--config", cfg});
  CHECK(r.code == kVerificationFailure);
  CHECK(r.out.find("overall FAIL") != std::string::npos);
}

TEST_CASE("cc subcommand") {
  auto two = invoke({"cc", "--masses", "1,2"});
  REQUIRE(two.code == kOk);
  CHECK(two.out.find("lambda=1.5 ") != std::string::npos);

  auto all = invoke({"cc", "--masses", "1,2,3,4", "--all"});
  REQUIRE(all.code == kOk);
  CHECK(std::count(all.out.begin(), all.out.end(), '\n') == 12);

  auto as_json = invoke({"cc", "--masses", "1,1,1", "--json"});
  REQUIRE(as_json.code == kOk);
  auto rows = json::parse(as_json.out);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0]["lambda"].get<double>() == doctest::Approx(0.625));

  auto ambiguous = invoke({"cc", "--masses", "1,1,1", "--term", "-6:1", "--term", "-12:-0.005", "--normalize",
                           "inertia", "--value", "1"});
  REQUIRE(ambiguous.code == kOk);
  CHECK(ambiguous.out.find("ambiguous=") != std::string::npos);
}

TEST_CASE("geometry subcommands") {
  auto count = invoke({"geometry", "count", "--n", "5"});
  CHECK(count.out == "M=10 R=6\n");

  auto tangent = invoke({"geometry", "intersect", "--cU", "-2.5", "--cI", "2"});
  REQUIRE(tangent.code == kOk);
  CHECK(tangent.out.rfind("count=1 tangent=true", 0) == 0);

  const auto dump = scratch("curve.txt").string();
  auto two = invoke({"geometry", "intersect", "--cU", "-2.5", "--cI", "2.1", "--dump", dump, "--json"});
  REQUIRE(two.code == kOk);
  CHECK(json::parse(two.out)["count"] == 2);
  CHECK(std::filesystem::file_size(dump) > 0);

  auto all = invoke({"geometry", "tangency", "--masses", "1,2,3"});
  CHECK(all.code == kOk);
  CHECK(std::count(all.out.begin(), all.out.end(), '\n') >= 3);
}

TEST_CASE("batch runs configs concurrently and reports the worst exit code") {
  const auto good = write_json("batch_good.json", json{{"scenario", "relative_equilibrium"},
                                                       {"masses", {1, 1, 1}},
                                                       {"periods", 1},
                                                       {"precision", "double"}});
  const auto eight = write_json("batch_eight.json", json{{"scenario", "figure_eight"}, {"periods", 0.2}});
  const auto bad = write_json("batch_bad.json", json{{"scenario", "relative_equilibrium"}, {"masses", {1, -1}}});
  auto ok = invoke({"batch", good, eight, "--jobs", "2"});
  CHECK(ok.code == kOk);
  const auto first = ok.out.find("== " + good + " exit=0");
  const auto second = ok.out.find("== " + eight + " exit=0");
  REQUIRE(first != std::string::npos);
  REQUIRE(second != std::string::npos);
  CHECK(first < second);

  auto mixed = invoke({"batch", good, bad, "--jobs", "4"});
  CHECK(mixed.code == kInvalidConfig);
  CHECK(mixed.out.find("== " + bad + " exit=1") != std::string::npos);

  auto simulated = invoke({"batch", "--simulate", good});
  CHECK(simulated.code == kOk);
  CHECK(simulated.out.find("t,x0,y0") != std::string::npos);
}
