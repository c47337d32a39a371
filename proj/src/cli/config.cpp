#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "collinear/scenarios.hpp"

namespace collinear::cli {

using nlohmann::json;

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::relative_equilibrium: return "relative_equilibrium";
    case ScenarioKind::homographic: return "homographic";
    case ScenarioKind::non_central_control: return "non_central_control";
    case ScenarioKind::figure_eight: return "figure_eight";
    case ScenarioKind::custom: return "custom";
  }
  return "unknown";
}

ScenarioKind parse_scenario(const std::string& name) {
  for (auto k : {ScenarioKind::relative_equilibrium, ScenarioKind::homographic, ScenarioKind::non_central_control,
                 ScenarioKind::figure_eight, ScenarioKind::custom}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("scenario", "unknown scenario '" + name + "'");
}

std::string to_string(CheckKind kind) {
  switch (kind) {
    case CheckKind::automatic: return "auto";
    case CheckKind::collinear_homographic: return "collinear_homographic";
    case CheckKind::saari: return "saari";
    case CheckKind::generic: return "generic";
  }
  return "unknown";
}

CheckKind parse_check(const std::string& name) {
  for (auto k : {CheckKind::automatic, CheckKind::collinear_homographic, CheckKind::saari, CheckKind::generic}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("check", "unknown check '" + name + "'");
}

namespace {

void reject_unknown_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      throw ConfigError(where.empty() ? item.key() : where + "." + item.key(), "unknown key");
    }
  }
}

double number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(field, "must be finite");
  return x;
}

std::vector<double> numbers(const json& v, const std::string& field) {
  if (!v.is_array()) throw ConfigError(field, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

std::string text(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

}  // namespace

ScenarioConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("(root)", "expected a JSON object");
  reject_unknown_keys(doc, "",
                      {"schema", "scenario", "masses", "potential", "ordering", "omega0", "omega_factor",
                       "dilation_rate", "gaps", "state", "fixture", "t_end", "periods", "precision", "integrator",
                       "tolerances", "check", "output"});
  ScenarioConfig c;
  if (doc.contains("schema")) {
    if (!doc["schema"].is_number_integer()) throw ConfigError("schema", "expected an integer");
    c.schema = doc["schema"].get<int>();
  }
  if (doc.contains("scenario")) c.kind = parse_scenario(text(doc["scenario"], "scenario"));
  if (doc.contains("masses")) c.masses = numbers(doc["masses"], "masses");
  if (doc.contains("potential")) {
    const json& p = doc["potential"];
    if (!p.is_array()) throw ConfigError("potential", "expected an array of {alpha, coefficient} terms");
    c.potential.clear();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const std::string field = "potential[" + std::to_string(i) + "]";
      if (!p[i].is_object() || !p[i].contains("alpha") || !p[i].contains("coefficient")) {
        throw ConfigError(field, "expected {\"alpha\": number, \"coefficient\": number}");
      }
      reject_unknown_keys(p[i], field, {"alpha", "coefficient"});
      c.potential.push_back({number(p[i]["alpha"], field + ".alpha"), number(p[i]["coefficient"], field + ".coefficient")});
    }
  }
  if (doc.contains("ordering")) {
    for (double x : numbers(doc["ordering"], "ordering")) {
      if (x < 0 || x != std::floor(x)) throw ConfigError("ordering", "expected non-negative integers");
      c.ordering.push_back(static_cast<std::size_t>(x));
    }
  }
  if (doc.contains("omega0")) c.omega0 = number(doc["omega0"], "omega0");
  if (doc.contains("omega_factor")) c.omega_factor = number(doc["omega_factor"], "omega_factor");
  if (doc.contains("dilation_rate")) c.dilation_rate = number(doc["dilation_rate"], "dilation_rate");
  if (doc.contains("gaps")) c.gaps = numbers(doc["gaps"], "gaps");
  if (doc.contains("state")) {
    const json& s = doc["state"];
    if (!s.is_array()) throw ConfigError("state", "expected an array of [x, y, vx, vy] rows");
    for (std::size_t i = 0; i < s.size(); ++i) {
      const std::string field = "state[" + std::to_string(i) + "]";
      const auto row = numbers(s[i], field);
      if (row.size() != 4) throw ConfigError(field, "expected [x, y, vx, vy]");
      c.state.push_back({row[0], row[1], row[2], row[3]});
    }
  }
  if (doc.contains("fixture")) c.fixture = text(doc["fixture"], "fixture");
  if (doc.contains("t_end")) c.t_end = number(doc["t_end"], "t_end");
  if (doc.contains("periods")) c.periods = number(doc["periods"], "periods");
  if (doc.contains("precision")) {
    const auto p = text(doc["precision"], "precision");
    if (p == "auto") {
      c.precision = Precision::automatic;
    } else if (p == "double") {
      c.precision = Precision::double_precision;
    } else if (p == "quad") {
      c.precision = Precision::quad_precision;
    } else {
      throw ConfigError("precision", "expected \"auto\", \"double\" or \"quad\"");
    }
  }
  if (doc.contains("integrator")) {
    const json& g = doc["integrator"];
    if (!g.is_object()) throw ConfigError("integrator", "expected an object");
    reject_unknown_keys(g, "integrator",
                        {"rel_tol", "abs_tol", "max_step", "min_separation", "sample_interval", "scheme"});
    if (g.contains("rel_tol")) c.integrator.rel_tol = number(g["rel_tol"], "integrator.rel_tol");
    if (g.contains("abs_tol")) c.integrator.abs_tol = number(g["abs_tol"], "integrator.abs_tol");
    if (g.contains("max_step")) c.integrator.max_step = number(g["max_step"], "integrator.max_step");
    if (g.contains("min_separation")) {
      c.integrator.min_separation = number(g["min_separation"], "integrator.min_separation");
    }
    if (g.contains("sample_interval")) {
      c.integrator.sample_interval = number(g["sample_interval"], "integrator.sample_interval");
    }
    if (g.contains("scheme")) {
      const auto s = text(g["scheme"], "integrator.scheme");
      if (s == "adaptive") {
        c.integrator.scheme = Scheme::adaptive;
      } else if (s == "symplectic") {
        c.integrator.scheme = Scheme::symplectic;
      } else {
        throw ConfigError("integrator.scheme", "expected \"adaptive\" or \"symplectic\"");
      }
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances", "expected an object");
    reject_unknown_keys(t, "tolerances",
                        {"theorem", "construction", "control", "derivative", "conservation", "numeric",
                         "inertia_constancy"});
    auto set = [&](const char* key, double& field) {
      if (t.contains(key)) field = number(t[key], std::string("tolerances.") + key);
    };
    set("theorem", c.tolerances.theorem);
    set("construction", c.tolerances.construction);
    set("control", c.tolerances.control);
    set("derivative", c.tolerances.derivative);
    set("conservation", c.tolerances.conservation);
    set("numeric", c.tolerances.numeric);
    set("inertia_constancy", c.tolerances.inertia_constancy);
  }
  if (doc.contains("check")) c.check = parse_check(text(doc["check"], "check"));
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) throw ConfigError("output", "expected an object");
    reject_unknown_keys(o, "output", {"trajectory", "diagnostics", "report"});
    if (o.contains("trajectory")) c.trajectory_path = text(o["trajectory"], "output.trajectory");
    if (o.contains("diagnostics")) c.diagnostics_path = text(o["diagnostics"], "output.diagnostics");
    if (o.contains("report")) c.report_path = text(o["report"], "output.report");
  }
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(doc);
}

json to_json(const ScenarioConfig& c) {
  json doc;
  doc["schema"] = c.schema;
  doc["scenario"] = to_string(c.kind);
  if (!c.masses.empty()) doc["masses"] = c.masses;
  doc["potential"] = json::array();
  for (const auto& t : c.potential) doc["potential"].push_back({{"alpha", t.alpha}, {"coefficient", t.coefficient}});
  if (!c.ordering.empty()) doc["ordering"] = c.ordering;
  if (c.omega0) doc["omega0"] = *c.omega0;
  doc["omega_factor"] = c.omega_factor;
  doc["dilation_rate"] = c.dilation_rate;
  if (!c.gaps.empty()) doc["gaps"] = c.gaps;
  if (!c.state.empty()) doc["state"] = c.state;
  if (!c.fixture.empty()) doc["fixture"] = c.fixture;
  if (c.t_end) doc["t_end"] = *c.t_end;
  if (c.periods) doc["periods"] = *c.periods;
  doc["precision"] = c.precision == Precision::quad_precision     ? "quad"
                     : c.precision == Precision::double_precision ? "double"
                                                                  : "auto";
  json g{{"rel_tol", c.integrator.rel_tol},
         {"abs_tol", c.integrator.abs_tol},
         {"sample_interval", c.integrator.sample_interval},
         {"scheme", c.integrator.scheme == Scheme::symplectic ? "symplectic" : "adaptive"}};
  if (std::isfinite(c.integrator.max_step)) g["max_step"] = c.integrator.max_step;
  if (c.integrator.min_separation) g["min_separation"] = *c.integrator.min_separation;
  doc["integrator"] = g;
  const auto& t = c.tolerances;
  doc["tolerances"] = {{"theorem", t.theorem},           {"construction", t.construction},
                       {"control", t.control},           {"derivative", t.derivative},
                       {"conservation", t.conservation}, {"numeric", t.numeric},
                       {"inertia_constancy", t.inertia_constancy}};
  doc["check"] = to_string(c.check);
  json o = json::object();
  if (!c.trajectory_path.empty()) o["trajectory"] = c.trajectory_path;
  if (!c.diagnostics_path.empty()) o["diagnostics"] = c.diagnostics_path;
  if (!c.report_path.empty()) o["report"] = c.report_path;
  doc["output"] = o;
  return doc;
}

namespace {

bool bundled_from_fixture(const ScenarioConfig& c) {
  return c.kind == ScenarioKind::figure_eight || (c.kind == ScenarioKind::custom && !c.fixture.empty());
}

}  // namespace

void validate(const ScenarioConfig& c) {
  if (c.schema != kSchemaVersion) {
    throw ConfigError("schema", "unsupported schema version " + std::to_string(c.schema));
  }
  std::optional<PotentialSpec> pot;
  try {
    pot.emplace(c.potential);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("potential", e.what());
  }

  std::optional<MassSystem> masses;
  if (!bundled_from_fixture(c) || !c.masses.empty()) {
    try {
      masses.emplace(c.masses);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("masses", e.what());
    }
  }
  const std::size_t n = masses ? masses->size() : 0;

  if (!c.ordering.empty()) {
    std::vector<std::size_t> sorted = c.ordering;
    std::sort(sorted.begin(), sorted.end());
    bool ok = sorted.size() == n;
    for (std::size_t i = 0; ok && i < sorted.size(); ++i) ok = sorted[i] == i;
    if (!ok) throw ConfigError("ordering", "must be a permutation of 0..n-1");
  }
  if (c.omega0 && !std::isfinite(*c.omega0)) throw ConfigError("omega0", "must be finite");

  switch (c.kind) {
    case ScenarioKind::relative_equilibrium:
    case ScenarioKind::homographic:
      if (!pot->has_attracting_term()) {
        throw ConfigError("potential", "central configurations need at least one attracting term");
      }
      break;
    case ScenarioKind::non_central_control: {
      if (!c.omega0 || !(*c.omega0 > 0)) throw ConfigError("omega0", "control runs need omega0 > 0");
      if (c.gaps.size() + 1 != n) throw ConfigError("gaps", "expected n-1 gaps");
      for (double g : c.gaps) {
        if (!(g > 0)) throw ConfigError("gaps", "gaps must be positive");
      }
      const double defect = central_defect(*masses, c.gaps, *pot);
      if (defect < 1e-3) throw ConfigError("gaps", "gaps form a central configuration; pick a non-central shape");
      break;
    }
    case ScenarioKind::figure_eight:
      if (c.potential.size() != 1 || c.potential[0].alpha != -1.0 || c.potential[0].coefficient != 1.0) {
        throw ConfigError("potential", "the figure-eight fixture assumes the Newtonian potential with G = 1");
      }
      if (!c.masses.empty()) throw ConfigError("masses", "the figure-eight fixture fixes the masses");
      break;
    case ScenarioKind::custom:
      if (!c.fixture.empty()) {
        if (!c.state.empty()) throw ConfigError("state", "give either state or fixture, not both");
        if (!std::filesystem::exists(c.fixture)) throw ConfigError("fixture", "no such file " + c.fixture);
      } else if (c.state.size() != n) {
        throw ConfigError("state", "expected one [x, y, vx, vy] row per mass");
      }
      if (!c.t_end) throw ConfigError("t_end", "custom scenarios need an explicit t_end");
      break;
  }

  if (c.t_end && c.periods) throw ConfigError("t_end", "give either t_end or periods, not both");
  if (!c.t_end && !c.periods) throw ConfigError("t_end", "missing: give t_end or periods");
  if (c.t_end && !(*c.t_end > 0)) throw ConfigError("t_end", "must be positive");
  if (c.periods && !(*c.periods > 0)) throw ConfigError("periods", "must be positive");
  if (c.kind == ScenarioKind::homographic && !c.omega0 && !(c.omega_factor >= 0)) {
    throw ConfigError("omega_factor", "must be non-negative");
  }
  try {
    c.integrator.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("integrator", e.what());
  }
  try {
    c.tolerances.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("tolerances", e.what());
  }
}

}  // namespace collinear::cli
