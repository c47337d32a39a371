#include "collinear/verify.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "collinear/errors.hpp"
#include "collinear/scenarios.hpp"

namespace collinear {

void Tolerances::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"theorem", theorem},         {"construction", construction}, {"control", control},
      {"derivative", derivative},   {"conservation", conservation}, {"numeric", numeric},
      {"inertia_constancy", inertia_constancy}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0) || !std::isfinite(value)) {
      throw std::invalid_argument(std::string("tolerance ") + name + " must be positive and finite");
    }
  }
}

bool VerificationReport::pass() const {
  return std::all_of(entries.begin(), entries.end(), [](const CheckEntry& e) { return e.pass; });
}

const CheckEntry* VerificationReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

const Metric* VerificationReport::metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return &m;
  }
  return nullptr;
}

std::string VerificationReport::to_text() const {
  std::ostringstream os;
  os << std::setprecision(17);
  for (const auto& e : entries) {
    os << e.name << ' ' << e.deviation << ' ' << e.tolerance << ' ' << (e.pass ? "PASS" : "FAIL") << '\n';
  }
  for (const auto& m : metrics) os << "metric " << m.name << ' ' << m.value << '\n';
  if (hypothesis_met) os << "hypothesis " << (*hypothesis_met ? "met" : "not_met") << '\n';
  return os.str();
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json j;
  j["title"] = title;
  j["pass"] = pass();
  j["checks"] = nlohmann::json::array();
  for (const auto& e : entries) {
    j["checks"].push_back({{"name", e.name},
                           {"deviation", e.deviation},
                           {"tolerance", e.tolerance},
                           {"pass", e.pass},
                           {"worst_time", e.worst_time}});
  }
  j["metrics"] = nlohmann::json::object();
  for (const auto& m : metrics) j["metrics"][m.name] = m.value;
  if (hypothesis_met) j["hypothesis_met"] = *hypothesis_met;
  return j;
}

double relative_variation(const std::vector<double>& xs) {
  if (xs.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return scale > 0 ? (*hi - *lo) / scale : 0.0;
}

namespace {

// Running maximum of a deviation and the time at which it occurred. NaN counts
// as an infinite deviation so that a broken run can never pass.
class Tracker {
 public:
  void observe(double deviation, double time) {
    if (!(deviation == deviation)) deviation = std::numeric_limits<double>::infinity();
    deviation = std::abs(deviation);
    if (deviation > worst_ || !seen_) {
      worst_ = deviation;
      time_ = time;
      seen_ = true;
    }
  }

  CheckEntry entry(std::string name, double tolerance) const {
    return {std::move(name), worst_, tolerance, worst_ <= tolerance, time_};
  }

 private:
  double worst_ = 0;
  double time_ = 0;
  bool seen_ = false;
};

double angular_momentum_scale(const PhaseState& s, const MassSystem& masses) {
  double k = 0;
  for (std::size_t i = 0; i < s.size(); ++i) k += masses[i] * norm(s.positions()[i]) * norm(s.velocities()[i]);
  return k;
}

// Shared hypotheses of the collinear theorems: collinear start, K != 0.
void require_collinear_rotating(const PhaseState& first, const MassSystem& masses, const Tolerances& tol) {
  if (collinearity_residual(first) > tol.construction) throw PreconditionError("collinear initial state");
  const double k = angular_momentum(first, masses).total;
  const double scale = angular_momentum_scale(first, masses);
  if (!(std::abs(k) > 1e-12 * scale)) throw PreconditionError("non-zero angular momentum");
}

}  // namespace

VerificationReport verify_collinear_homographic(const Trajectory& traj, const MassSystem& masses,
                                                const PotentialSpec& pot, const Tolerances& tol) {
  tol.validate();
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  require_collinear_rotating(traj.samples.front(), masses, tol);

  const auto series = diagnostics_series(traj, masses, pot);
  const std::size_t n = masses.size();
  const auto& first = series.values.front();
  const double k0 = first.angular_momentum;
  const std::vector<double>& c = first.body_angular_momentum;

  Tracker collinear, body_momentum, ratio, sundman, radial_velocity, kinetic, radial_product;
  std::vector<double> inertia, omega;
  for (std::size_t s = 0; s < series.times.size(); ++s) {
    const double t = series.times[s];
    const auto& d = series.values[s];
    const auto& r = series.radius[s];
    inertia.push_back(d.inertia);
    omega.push_back(d.omega);

    collinear.observe(d.collinearity, t);
    for (std::size_t i = 0; i < n; ++i) {
      const double denom = std::abs(c[i]) > 1e-12 * std::abs(k0) ? std::abs(c[i]) : std::abs(k0);
      body_momentum.observe((d.body_angular_momentum[i] - c[i]) / denom, t);
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j || !(std::abs(c[j]) > 1e-12 * std::abs(k0))) continue;
        const double law = std::sqrt(std::abs(masses[j] * c[i] / (masses[i] * c[j])));
        ratio.observe(r[i] / r[j] - law, t);
      }
    }
    sundman.observe(d.sundman_gap / (k0 * k0), t);

    const double w = d.omega;
    const double wdot = series.omega_rate[s];
    const double rmax = *std::max_element(r.begin(), r.end());
    for (std::size_t i = 0; i < n; ++i) {
      radial_velocity.observe((series.radial_speed[s][i] + 0.5 * r[i] * wdot / w) / (rmax * std::abs(w)), t);
    }
    kinetic.observe((d.kinetic - 0.5 * k0 * (wdot * wdot / (4 * w * w * w) + w)) / d.kinetic, t);
    radial_product.observe((d.radial_product + wdot / (2 * w * w) * k0) / std::sqrt(2 * d.kinetic * d.inertia), t);
  }
  const auto fit = fit_homographic(traj, masses);

  VerificationReport report;
  report.title = "collinear_homographic";
  report.entries.push_back(collinear.entry("collinearity", tol.theorem));
  report.entries.push_back(body_momentum.entry("per_body_angular_momentum_drift", tol.construction));
  report.entries.push_back(ratio.entry("ratio_law", tol.theorem));
  report.entries.push_back(sundman.entry("sundman_equality", tol.theorem));
  report.entries.push_back(radial_velocity.entry("radial_velocity_law", tol.derivative));
  report.entries.push_back(kinetic.entry("kinetic_energy_law", tol.derivative));
  report.entries.push_back(radial_product.entry("radial_product_law", tol.derivative));
  report.entries.push_back(
      {"shape_deviation", fit.max_shape_deviation, tol.theorem, fit.max_shape_deviation <= tol.theorem, fit.worst_time});
  report.metrics.push_back({"inertia_relative_variation", relative_variation(inertia)});
  report.metrics.push_back({"omega_relative_variation", relative_variation(omega)});
  report.metrics.push_back({"samples", static_cast<double>(series.times.size())});
  return report;
}

VerificationReport verify_saari(const Trajectory& traj, const MassSystem& masses, const Tolerances& tol) {
  tol.validate();
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  require_collinear_rotating(traj.samples.front(), masses, tol);

  const std::size_t n = masses.size();
  std::vector<double> inertia, omega;
  std::vector<std::vector<double>> distances(n * (n - 1) / 2);
  for (const auto& s : traj.samples) {
    inertia.push_back(moment_of_inertia(s, masses));
    omega.push_back(omega_estimate(s, masses));
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) distances[p++].push_back(norm(s.positions()[i] - s.positions()[j]));
    }
  }

  VerificationReport report;
  report.title = "saari";
  const double inertia_variation = relative_variation(inertia);
  report.metrics.push_back({"inertia_relative_variation", inertia_variation});
  report.hypothesis_met = inertia_variation <= tol.inertia_constancy;
  if (!*report.hypothesis_met) return report;

  // On a homographic orbit omega and the distances vary exactly as much as I
  // does, so the admissible deviation grows with the measured variation of I.
  const double allowed = tol.construction + inertia_variation;
  const double omega_variation = relative_variation(omega);
  report.entries.push_back({"omega_constancy", omega_variation, allowed, omega_variation <= allowed, 0.0});
  double worst = 0;
  for (const auto& d : distances) worst = std::max(worst, relative_variation(d));
  report.entries.push_back({"distance_constancy", worst, allowed, worst <= allowed, 0.0});
  report.metrics.push_back({"omega_relative_variation", omega_variation});
  return report;
}

VerificationReport verify_generic(const Trajectory& traj, const MassSystem& masses, const PotentialSpec& pot,
                                  const Tolerances& tol) {
  tol.validate();
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  const PhaseState& first = traj.samples.front();
  const Diagnostics d0 = diagnose(first, masses, pot);
  const double h_scale = d0.energy != 0 ? std::abs(d0.energy) : 1.0;
  const double k_ref = angular_momentum_scale(first, masses);
  const double k_scale = std::abs(d0.angular_momentum) > 1e-12 * k_ref ? std::abs(d0.angular_momentum)
                         : k_ref > 0                                    ? k_ref
                                                                        : 1.0;

  Tracker energy, momentum, sundman;
  std::vector<double> inertia;
  double min_gap = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples) {
    const Diagnostics d = diagnose(s, masses, pot);
    energy.observe((d.energy - d0.energy) / h_scale, s.time());
    momentum.observe((d.angular_momentum - d0.angular_momentum) / k_scale, s.time());
    sundman.observe(std::max(0.0, -d.sundman_gap) / std::max(1.0, d.angular_momentum * d.angular_momentum), s.time());
    inertia.push_back(d.inertia);
    min_gap = std::min(min_gap, d.sundman_gap);
  }

  VerificationReport report;
  report.title = "generic";
  report.entries.push_back(energy.entry("energy_drift", tol.conservation));
  report.entries.push_back(momentum.entry("angular_momentum_drift", tol.conservation));
  report.entries.push_back(sundman.entry("sundman_inequality", tol.numeric));
  const double bary = traj.stats.max_barycenter_drift;
  report.entries.push_back({"barycenter_drift", bary, tol.numeric, bary <= tol.numeric, 0.0});
  report.metrics.push_back({"inertia_relative_variation", relative_variation(inertia)});
  report.metrics.push_back({"min_sundman_gap", min_gap});
  report.metrics.push_back({"integrator_energy_drift", traj.stats.max_energy_drift});
  report.metrics.push_back({"steps", static_cast<double>(traj.stats.steps)});
  return report;
}

}  // namespace collinear
