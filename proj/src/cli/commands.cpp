#include "cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "collinear/dynamics.hpp"
#include "collinear/scenarios.hpp"
#include "collinear/verify.hpp"

namespace collinear::cli {

using nlohmann::json;

namespace {

using AnyState = std::variant<PhaseState, BasicPhaseState<quad>>;

struct Prepared {
  MassSystem masses;
  PotentialSpec pot;
  AnyState state;
  double t_end;
  bool control = false;
};

std::vector<std::size_t> ordering_or_identity(const std::vector<std::size_t>& ordering, std::size_t n) {
  if (!ordering.empty()) return ordering;
  std::vector<std::size_t> id(n);
  for (std::size_t i = 0; i < n; ++i) id[i] = i;
  return id;
}

bool use_quad(const ScenarioConfig& c) {
  if (c.precision == Precision::automatic) {
    return c.kind == ScenarioKind::relative_equilibrium || c.kind == ScenarioKind::homographic;
  }
  return c.precision == Precision::quad_precision;
}

AnyState in_precision(const PhaseState& s, bool quad_precision) {
  if (quad_precision) return s.cast<quad>();
  return s;
}

double end_time(const ScenarioConfig& c, double natural_period) {
  if (c.t_end) return *c.t_end;
  if (!(natural_period > 0) || !std::isfinite(natural_period)) {
    throw ConfigError("periods", "this orbit has no natural period; give t_end instead");
  }
  return *c.periods * natural_period;
}

Prepared prepare(const ScenarioConfig& c) {
  validate(c);
  PotentialSpec pot(c.potential);
  const bool q = use_quad(c);
  switch (c.kind) {
    case ScenarioKind::relative_equilibrium:
    case ScenarioKind::homographic: {
      MassSystem masses(c.masses);
      const auto ordering = ordering_or_identity(c.ordering, masses.size());
      const auto cc = solve_collinear(masses, ordering, pot);
      const double rate = circular_rate(cc);
      double omega0 = rate, dilation = 0.0, period = 2 * std::numbers::pi / rate;
      if (c.kind == ScenarioKind::homographic) {
        omega0 = c.omega0 ? *c.omega0 : c.omega_factor * rate;
        dilation = c.dilation_rate;
        period = std::numeric_limits<double>::quiet_NaN();
        if (pot.is_homogeneous() && pot.homogeneous_degree() == -1.0) {
          try {
            period = homographic_radial_period(cc, pot, omega0, dilation);
          } catch (const std::invalid_argument&) {
            // Unbounded orbit: no natural period.
          }
        } else if (omega0 > 0 && dilation == 0.0) {
          period = 2 * std::numbers::pi / omega0;
        }
      }
      AnyState state = homographic_ics(cc, masses, omega0, dilation);
      if (q) {
        const auto fine = refine_collinear<quad>(cc, masses, pot);
        quad w = circular_rate(fine);
        if (c.kind == ScenarioKind::homographic) w = c.omega0 ? quad(*c.omega0) : quad(c.omega_factor) * w;
        state = homographic_ics<quad>(fine, masses, w, quad(dilation));
      }
      return {std::move(masses), std::move(pot), std::move(state), end_time(c, period)};
    }
    case ScenarioKind::non_central_control: {
      MassSystem masses(c.masses);
      const auto s = non_central_collinear_ics(masses, c.gaps, *c.omega0, pot);
      const double period = 2 * std::numbers::pi / *c.omega0;
      return {std::move(masses), std::move(pot), in_precision(s, q), end_time(c, period), true};
    }
    case ScenarioKind::figure_eight: {
      auto fixture = figure_eight();
      return {std::move(fixture.masses), std::move(pot), in_precision(fixture.state, q),
              end_time(c, kFigureEightPeriod)};
    }
    case ScenarioKind::custom: {
      if (!c.fixture.empty()) {
        auto fixture = read_fixture(c.fixture);
        return {std::move(fixture.masses), std::move(pot), in_precision(fixture.state, q), *c.t_end};
      }
      MassSystem masses(c.masses);
      std::vector<Vec2> r, v;
      for (const auto& row : c.state) {
        r.push_back({row[0], row[1]});
        v.push_back({row[2], row[3]});
      }
      PhaseState s(masses, std::move(r), std::move(v));
      return {std::move(masses), std::move(pot), in_precision(s, q), *c.t_end};
    }
  }
  throw ConfigError("scenario", "unhandled scenario");
}

Trajectory run_prepared(const Prepared& p, const IntegratorConfig& integrator) {
  return std::visit([&](const auto& s) { return integrate(s, p.masses, p.pot, p.t_end, integrator); }, p.state);
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("output", "cannot write " + path);
  f << std::setprecision(17);
  return f;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << std::setprecision(17) << 't';
  const std::size_t n = traj.samples.empty() ? 0 : traj.samples.front().size();
  for (std::size_t i = 0; i < n; ++i) os << ",x" << i << ",y" << i << ",vx" << i << ",vy" << i;
  os << '\n';
  for (const auto& s : traj.samples) {
    os << s.time();
    for (std::size_t i = 0; i < n; ++i) {
      os << ',' << s.positions()[i].x << ',' << s.positions()[i].y << ',' << s.velocities()[i].x << ','
         << s.velocities()[i].y;
    }
    os << '\n';
  }
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj, const MassSystem& masses,
                           const PotentialSpec& pot) {
  os << std::setprecision(17) << "t,U,T,H,I,K,J,sundman_gap,collinearity,omega";
  for (std::size_t i = 0; i < masses.size(); ++i) os << ",K" << i;
  os << '\n';
  for (const auto& s : traj.samples) {
    const Diagnostics d = diagnose(s, masses, pot);
    os << s.time() << ',' << d.potential << ',' << d.kinetic << ',' << d.energy << ',' << d.inertia << ','
       << d.angular_momentum << ',' << d.radial_product << ',' << d.sundman_gap << ',' << d.collinearity << ','
       << d.omega;
    for (double k : d.body_angular_momentum) os << ',' << k;
    os << '\n';
  }
}

void write_outputs(const ScenarioConfig& c, const Trajectory& traj, const Prepared& p, std::ostream& out) {
  if (c.trajectory_path.empty() && c.diagnostics_path.empty()) {
    write_trajectory_csv(out, traj);
    return;
  }
  if (!c.trajectory_path.empty()) {
    auto f = open_output(c.trajectory_path);
    write_trajectory_csv(f, traj);
  }
  if (!c.diagnostics_path.empty()) {
    auto f = open_output(c.diagnostics_path);
    write_diagnostics_csv(f, traj, p.masses, p.pot);
  }
}

void report_close_approach(const CloseApproachError& e, std::ostream& err) {
  err << std::setprecision(17) << "close approach: bodies " << e.first() << " and " << e.second()
      << " at distance " << e.distance() << " (t = " << e.time() << ")\n";
}

// Runs fn and maps library exceptions to exit codes.
template <class F>
int guarded(std::ostream& err, F&& fn) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const CloseApproachError& e) {
    report_close_approach(e, err);
    return kCloseApproach;
  } catch (const SingularityError& e) {
    err << "singularity: " << e.what() << '\n';
    return kCloseApproach;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const AmbiguousRootsError& e) {
    err << "solver failure: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const PreconditionError& e) {
    err << "hypothesis violation: " << e.hypothesis() << '\n';
    return kHypothesisViolation;
  } catch (const StepSizeUnderflowError& e) {
    err << "integration failure: " << e.what() << '\n';
    return kCloseApproach;
  } catch (const ResolutionError& e) {
    err << "resolution error: " << e.what() << '\n';
    return kSolverFailure;
  } catch (const std::invalid_argument& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }
}

std::string join(const std::vector<std::size_t>& xs) {
  std::ostringstream os;
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

}  // namespace

int cmd_simulate(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Prepared p = prepare(config);
    Trajectory traj;
    try {
      traj = run_prepared(p, config.integrator);
    } catch (const CloseApproachError& e) {
      // Keep what was integrated before the guard fired.
      write_outputs(config, e.partial(), p, out);
      throw;
    }
    write_outputs(config, traj, p, out);
    err << std::setprecision(17) << "samples=" << traj.samples.size() << " steps=" << traj.stats.steps
        << " rejected=" << traj.stats.rejected << " energy_drift=" << traj.stats.max_energy_drift << '\n';
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const ScenarioConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const Prepared p = prepare(config);
    const Trajectory traj = run_prepared(p, config.integrator);
    if (!config.trajectory_path.empty() || !config.diagnostics_path.empty()) write_outputs(config, traj, p, out);

    CheckKind check = config.check;
    std::vector<CheckKind> kinds;
    if (check == CheckKind::automatic) {
      switch (config.kind) {
        case ScenarioKind::relative_equilibrium:
        case ScenarioKind::homographic:
          kinds = {CheckKind::collinear_homographic, CheckKind::saari, CheckKind::generic};
          break;
        case ScenarioKind::non_central_control:
          kinds = {CheckKind::collinear_homographic, CheckKind::generic};
          break;
        default:
          kinds = {CheckKind::generic};
      }
    } else {
      kinds = {check};
    }

    const Tolerances& tol = config.tolerances;
    bool ok = true;
    json reports = json::array();
    out << std::setprecision(17);
    for (CheckKind k : kinds) {
      VerificationReport r;
      if (k == CheckKind::collinear_homographic) r = verify_collinear_homographic(traj, p.masses, p.pot, tol);
      if (k == CheckKind::saari) r = verify_saari(traj, p.masses, tol);
      if (k == CheckKind::generic) r = verify_generic(traj, p.masses, p.pot, tol);
      out << "# " << r.title << '\n' << r.to_text();
      json j = r.to_json();
      if (p.control && k == CheckKind::collinear_homographic) {
        // The control must leave the line: breakdown above tol.control.
        const CheckEntry* e = r.find("collinearity");
        const bool broke = e != nullptr && e->deviation > tol.control;
        out << "control collinearity " << (broke ? "EXPECTED-FAIL" : "UNEXPECTED-PASS") << '\n';
        j["control"] = true;
        j["control_pass"] = broke;
        ok = ok && broke;
      } else {
        ok = ok && r.pass();
      }
      reports.push_back(std::move(j));
    }
    out << "overall " << (ok ? "PASS" : "FAIL") << '\n';
    if (!config.report_path.empty()) {
      auto f = open_output(config.report_path);
      f << json{{"config", to_json(config)}, {"reports", reports}, {"pass", ok}}.dump(2) << '\n';
    }
    return ok ? kOk : kVerificationFailure;
  });
}

int cmd_cc(const CcOptions& options, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    MassSystem masses(options.masses);
    PotentialSpec pot(options.potential);
    std::vector<std::vector<std::size_t>> orderings;
    if (options.all) {
      orderings = orderings_modulo_reversal(masses.size());
    } else {
      orderings.push_back(ordering_or_identity(options.ordering, masses.size()));
    }
    json rows = json::array();
    out << std::setprecision(17);
    for (const auto& ordering : orderings) {
      CollinearSolution solution;
      try {
        solution = solve_collinear_roots(masses, ordering, pot, options.normalization);
      } catch (const SolverError& e) {
        err << "solver failure for ordering " << join(ordering) << ": " << e.what() << '\n';
        return kSolverFailure;
      }
      if (solution.roots.empty()) {
        err << "solver failure for ordering " << join(ordering) << ": no central configuration found\n";
        return kSolverFailure;
      }
      for (const auto& cc : solution.roots) {
        if (options.json) {
          rows.push_back({{"ordering", cc.ordering},
                          {"gaps", cc.gaps},
                          {"lambda", cc.lambda},
                          {"omega", circular_rate(cc)},
                          {"residual", cc.residual_norm},
                          {"ambiguous", solution.ambiguous()}});
        } else {
          out << "ordering=" << join(cc.ordering) << " gaps=" << join(cc.gaps) << " lambda=" << cc.lambda
              << " omega=" << circular_rate(cc) << " residual=" << cc.residual_norm;
          if (solution.ambiguous()) out << " ambiguous=" << solution.roots.size();
          out << '\n';
        }
      }
    }
    if (options.json) out << rows.dump(2) << '\n';
    return kOk;
  });
}

int cmd_geometry_count(std::int64_t n, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto m = count_distances(n);
    const auto r = count_relations(n);
    out << "M=" << m << " R=" << r << '\n';
    return kOk;
  });
}

namespace {

json result_json(const IntersectionResult& r) {
  json pts = json::array();
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    pts.push_back({{"a", r.points[i].a}, {"b", r.points[i].b}, {"gradient_angle", r.gradient_angles[i]}});
  }
  return {{"count", r.count}, {"tangent", r.tangency_flag}, {"points", pts}};
}

void print_result(std::ostream& out, const IntersectionResult& r) {
  out << "count=" << r.count << " tangent=" << (r.tangency_flag ? "true" : "false") << '\n';
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    out << "  a=" << r.points[i].a << " b=" << r.points[i].b << " gradient_angle=" << r.gradient_angles[i] << '\n';
  }
}

}  // namespace

int cmd_geometry_intersect(const IntersectOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    MassSystem masses(o.masses);
    PotentialSpec pot(o.potential);
    if (!(o.c_I > 0)) throw std::invalid_argument("cI must be positive");
    // Default box: [1e-3, 1e3] times the equal-gap size on the inertia level.
    const double unit = level_values(1.0, 1.0, masses, pot, o.ordering).inertia;
    const DomainBox box = o.box ? *o.box : default_box(std::sqrt(o.c_I / unit));
    const auto r = intersect_levels(o.c_U, o.c_I, masses, pot, o.ordering, box, o.resolution);
    out << std::setprecision(17);
    if (o.json) {
      out << result_json(r).dump(2) << '\n';
    } else {
      print_result(out, r);
    }
    if (!o.dump_path.empty()) {
      auto f = open_output(o.dump_path);
      f << "# a b U I\n";
      for (const auto& s : level_curve(o.c_I, masses, pot, o.ordering, box, o.resolution)) {
        f << s.a << ' ' << s.b << ' ' << s.potential << ' ' << s.inertia << '\n';
      }
    }
    return kOk;
  });
}

int cmd_geometry_tangency(const TangencyOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    MassSystem masses(o.masses);
    PotentialSpec pot(o.potential);
    if (masses.size() != 3) throw std::invalid_argument("tangency analysis needs exactly three masses");
    json rows = json::array();
    bool all_tangent = true;
    out << std::setprecision(17);
    for (const auto& ordering : orderings_modulo_reversal(3)) {
      const auto cc = solve_collinear(masses, ordering, pot);
      const auto r = tangency_at_cc(cc, masses, pot, o.resolution);
      all_tangent = all_tangent && r.count == 1 && r.tangency_flag;
      if (o.json) {
        json j = result_json(r);
        j["ordering"] = ordering;
        rows.push_back(std::move(j));
      } else {
        out << "ordering=" << join(ordering) << ' ';
        print_result(out, r);
      }
    }
    if (o.json) out << rows.dump(2) << '\n';
    return all_tangent ? kOk : kVerificationFailure;
  });
}

int cmd_batch(const std::vector<std::string>& configs, std::size_t jobs, bool simulate, std::ostream& out,
              std::ostream& err) {
  struct Job {
    std::ostringstream out, err;
    int code = 0;
  };
  std::vector<Job> results(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      Job& job = results[i];
      job.code = guarded(job.err, [&] {
        const auto config = load_config(configs[i]);
        return simulate ? cmd_simulate(config, job.out, job.err) : cmd_verify(config, job.out, job.err);
      });
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(jobs, configs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  int worst = kOk;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    out << "== " << configs[i] << " exit=" << results[i].code << '\n' << results[i].out.str();
    err << results[i].err.str();
    worst = std::max(worst, results[i].code);
  }
  return worst;
}

namespace {

// Potential flags shared by every subcommand.
struct PotentialFlags {
  bool newtonian = false;
  std::optional<double> alpha;
  double coefficient = 1.0;
  std::vector<std::string> terms;
  CLI::Option* coeff_opt = nullptr;

  void add(CLI::App& app) {
    app.add_flag("--newtonian", newtonian, "Newtonian potential, G = 1 (default)");
    app.add_option("--alpha", alpha, "exponent of a single power-law term");
    coeff_opt = app.add_option("--coeff", coefficient, "coefficient of the --alpha term");
    app.add_option("--term", terms, "additional term as alpha:coefficient (repeatable)");
  }

  bool given() const { return newtonian || alpha.has_value() || !terms.empty(); }

  std::vector<PotentialTerm> resolve() const {
    if (coeff_opt != nullptr && coeff_opt->count() > 0 && !alpha) throw ConfigError("coeff", "--coeff needs --alpha");
    std::vector<PotentialTerm> out;
    if (newtonian) out.push_back({-1.0, 1.0});
    if (alpha) out.push_back({*alpha, coefficient});
    for (const auto& t : terms) {
      const auto colon = t.find(':');
      if (colon == std::string::npos) throw ConfigError("term", "expected alpha:coefficient, got '" + t + "'");
      try {
        out.push_back({std::stod(t.substr(0, colon)), std::stod(t.substr(colon + 1))});
      } catch (const std::exception&) {
        throw ConfigError("term", "expected alpha:coefficient, got '" + t + "'");
      }
    }
    if (out.empty()) out.push_back({-1.0, 1.0});
    return out;
  }
};

struct ScenarioFlags {
  std::string config_path;
  PotentialFlags potential;
  std::vector<double> masses, gaps;
  std::vector<std::size_t> ordering;
  std::string scenario, precision, check, scheme;
  double omega0 = 0, omega_factor = 1, dilation = 0, t_end = 0, periods = 0;
  double rel_tol = 0, abs_tol = 0, max_step = 0, min_separation = 0, sample_interval = 0;
  std::string trajectory, diagnostics, report;
  std::map<std::string, CLI::Option*> opts;

  void add(CLI::App& app) {
    app.add_option("--config", config_path, "JSON scenario configuration");
    potential.add(app);
    opts["masses"] = app.add_option("--masses", masses, "comma-separated masses")->delimiter(',');
    opts["ordering"] = app.add_option("--ordering", ordering, "left-to-right body order")->delimiter(',');
    opts["gaps"] = app.add_option("--gaps", gaps, "gaps of a non-central control")->delimiter(',');
    opts["scenario"] = app.add_option("--scenario", scenario,
                                      "relative_equilibrium|homographic|non_central_control|figure_eight|custom");
    opts["omega0"] = app.add_option("--omega0", omega0, "initial angular rate");
    opts["omega_factor"] = app.add_option("--omega-factor", omega_factor, "omega0 as a multiple of the circular rate");
    opts["dilation"] = app.add_option("--dilation", dilation, "initial dilation rate");
    opts["t_end"] = app.add_option("--t-end", t_end, "final time");
    opts["periods"] = app.add_option("--periods", periods, "final time in natural periods of the scenario");
    opts["precision"] = app.add_option("--precision", precision, "auto|double|quad");
    opts["check"] = app.add_option("--check", check, "auto|collinear_homographic|saari|generic");
    opts["scheme"] = app.add_option("--scheme", scheme, "adaptive|symplectic");
    opts["rel_tol"] = app.add_option("--rel-tol", rel_tol);
    opts["abs_tol"] = app.add_option("--abs-tol", abs_tol);
    opts["max_step"] = app.add_option("--max-step", max_step);
    opts["min_separation"] = app.add_option("--min-separation", min_separation);
    opts["sample_interval"] = app.add_option("--sample-interval", sample_interval);
    opts["trajectory"] = app.add_option("--trajectory", trajectory, "trajectory CSV path");
    opts["diagnostics"] = app.add_option("--diagnostics", diagnostics, "diagnostics CSV path");
    opts["report"] = app.add_option("--report", report, "JSON report path");
  }

  bool set(const char* name) const { return opts.at(name)->count() > 0; }

  ScenarioConfig resolve() const {
    ScenarioConfig c = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    if (potential.given()) c.potential = potential.resolve();
    if (set("masses")) c.masses = masses;
    if (set("ordering")) c.ordering = ordering;
    if (set("gaps")) c.gaps = gaps;
    if (set("scenario")) c.kind = parse_scenario(scenario);
    if (set("omega0")) c.omega0 = omega0;
    if (set("omega_factor")) c.omega_factor = omega_factor;
    if (set("dilation")) c.dilation_rate = dilation;
    if (set("t_end")) {
      c.t_end = t_end;
      c.periods.reset();
    }
    if (set("periods")) {
      c.periods = periods;
      c.t_end.reset();
    }
    if (set("precision")) {
      json doc{{"precision", precision}};
      c.precision = parse_config(doc).precision;
    }
    if (set("check")) c.check = parse_check(check);
    if (set("scheme")) {
      json doc{{"integrator", {{"scheme", scheme}}}};
      c.integrator.scheme = parse_config(doc).integrator.scheme;
    }
    if (set("rel_tol")) c.integrator.rel_tol = rel_tol;
    if (set("abs_tol")) c.integrator.abs_tol = abs_tol;
    if (set("max_step")) c.integrator.max_step = max_step;
    if (set("min_separation")) c.integrator.min_separation = min_separation;
    if (set("sample_interval")) c.integrator.sample_interval = sample_interval;
    if (set("trajectory")) c.trajectory_path = trajectory;
    if (set("diagnostics")) c.diagnostics_path = diagnostics;
    if (set("report")) c.report_path = report;
    return c;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Collinear n-body laboratory: central configurations, theorem witnesses and level-set geometry",
               "collinear"};
  app.require_subcommand(1);

  ScenarioFlags sim_flags, verify_flags;
  auto* simulate = app.add_subcommand("simulate", "integrate a scenario and write CSV output");
  sim_flags.add(*simulate);
  auto* verify = app.add_subcommand("verify", "integrate a scenario and run its verification reports");
  verify_flags.add(*verify);

  CcOptions cc_opts;
  PotentialFlags cc_pot;
  std::string cc_norm = "first_gap";
  double cc_value = 1.0;
  auto* cc = app.add_subcommand("cc", "solve collinear central configurations");
  cc->add_option("--masses", cc_opts.masses, "comma-separated masses")->delimiter(',')->required();
  cc_pot.add(*cc);
  cc->add_option("--ordering", cc_opts.ordering, "left-to-right body order")->delimiter(',');
  cc->add_flag("--all", cc_opts.all, "every ordering modulo reversal");
  cc->add_option("--normalize", cc_norm, "first_gap|inertia");
  cc->add_option("--value", cc_value, "normalization value");
  cc->add_flag("--json", cc_opts.json, "JSON output");

  auto* geometry = app.add_subcommand("geometry", "ordering-plane geometry for three bodies");
  geometry->require_subcommand(1);
  std::int64_t count_n = 0;
  auto* count = geometry->add_subcommand("count", "number of distances M(n) and linear relations R(n)");
  count->add_option("--n", count_n, "number of bodies")->required();

  IntersectOptions ix;
  PotentialFlags ix_pot;
  std::vector<std::size_t> ix_ordering;
  std::vector<double> ix_box;
  auto* intersect = geometry->add_subcommand("intersect", "intersect U = cU with I = cI on an ordering plane");
  intersect->add_option("--cU", ix.c_U, "potential level")->required();
  intersect->add_option("--cI", ix.c_I, "moment-of-inertia level")->required();
  intersect->add_option("--masses", ix.masses, "three comma-separated masses")->delimiter(',');
  ix_pot.add(*intersect);
  intersect->add_option("--ordering", ix_ordering, "body order")->delimiter(',');
  intersect->add_option("--box", ix_box, "a_min,a_max,b_min,b_max")->delimiter(',');
  intersect->add_option("--resolution", ix.resolution, "curve samples (>= 64)");
  intersect->add_option("--dump", ix.dump_path, "write `a b U I` rows of the inertia level");
  intersect->add_flag("--json", ix.json, "JSON output");

  TangencyOptions tg;
  PotentialFlags tg_pot;
  auto* tangency = geometry->add_subcommand("tangency", "tangency of the level sets at each collinear CC");
  tangency->add_option("--masses", tg.masses, "three comma-separated masses")->delimiter(',');
  tg_pot.add(*tangency);
  tangency->add_option("--resolution", tg.resolution, "curve samples (>= 64)");
  tangency->add_flag("--json", tg.json, "JSON output");

  std::vector<std::string> batch_configs;
  std::size_t jobs = 1;
  bool batch_simulate = false;
  auto* batch = app.add_subcommand("batch", "run several scenario configs");
  batch->add_option("configs", batch_configs, "JSON scenario configurations")->required();
  batch->add_option("--jobs", jobs, "concurrent scenarios");
  batch->add_flag("--simulate", batch_simulate, "simulate instead of verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInvalidConfig;
  }

  if (*simulate) return guarded(err, [&] { return cmd_simulate(sim_flags.resolve(), out, err); });
  if (*verify) return guarded(err, [&] { return cmd_verify(verify_flags.resolve(), out, err); });
  if (*cc) {
    return guarded(err, [&] {
      cc_opts.potential = cc_pot.resolve();
      if (cc_norm == "first_gap") {
        cc_opts.normalization = Normalization::first_gap(cc_value);
      } else if (cc_norm == "inertia") {
        cc_opts.normalization = Normalization::inertia(cc_value);
      } else {
        throw ConfigError("normalize", "expected first_gap or inertia");
      }
      if (!(cc_value > 0)) throw ConfigError("value", "must be positive");
      return cmd_cc(cc_opts, out, err);
    });
  }
  if (*count) return cmd_geometry_count(count_n, out, err);
  if (*intersect) {
    return guarded(err, [&] {
      ix.potential = ix_pot.resolve();
      if (!ix_ordering.empty()) {
        if (ix_ordering.size() != 3) throw ConfigError("ordering", "expected three indices");
        ix.ordering = {ix_ordering[0], ix_ordering[1], ix_ordering[2]};
      }
      if (!ix_box.empty()) {
        if (ix_box.size() != 4) throw ConfigError("box", "expected a_min,a_max,b_min,b_max");
        ix.box = DomainBox{ix_box[0], ix_box[1], ix_box[2], ix_box[3]};
      }
      return cmd_geometry_intersect(ix, out, err);
    });
  }
  if (*tangency) {
    return guarded(err, [&] {
      tg.potential = tg_pot.resolve();
      return cmd_geometry_tangency(tg, out, err);
    });
  }
  if (*batch) return cmd_batch(batch_configs, jobs, batch_simulate, out, err);
  return kInvalidConfig;
}

}  // namespace collinear::cli
