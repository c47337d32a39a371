#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "collinear/dynamics.hpp"
#include "collinear/model.hpp"

namespace collinear {

struct Tolerances {
  double theorem = 1e-6;       // theorem-witness deviations
  double construction = 1e-8;  // identities that hold by construction
  double control = 1e-3;       // breakdown threshold for control runs
  double derivative = 1e-5;    // identities involving finite-difference rates
  double conservation = 1e-9;  // energy and angular momentum drift
  double numeric = 1e-10;      // roundoff-level checks (Sundman sign, barycentre)
  double inertia_constancy = 1e-8;  // hypothesis threshold for constant I

  // Throws std::invalid_argument unless every field is positive and finite.
  void validate() const;
};

struct CheckEntry {
  std::string name;
  double deviation = 0;
  double tolerance = 0;
  bool pass = true;
  double worst_time = 0;
};

struct Metric {
  std::string name;
  double value = 0;
};

struct VerificationReport {
  std::string title;
  std::vector<CheckEntry> entries;
  std::vector<Metric> metrics;
  // Set by hypothesis-gated reports.
  std::optional<bool> hypothesis_met;

  bool pass() const;
  const CheckEntry* find(const std::string& name) const;
  const Metric* metric(const std::string& name) const;

  // One `name deviation tolerance PASS|FAIL` line per check, then
  // `metric name value` lines and, when gated, `hypothesis met|not_met`.
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Theorem witnesses on a collinear run with non-zero angular momentum: stays on
// a line, per-body angular momenta constant, distance ratios follow the
// angular-momentum law, Sundman equality, the radial-velocity, kinetic-energy
// and radial-product laws in terms of omega, and homographic shape.
// Throws PreconditionError if the first sample is not collinear or K = 0.
VerificationReport verify_collinear_homographic(const Trajectory& traj, const MassSystem& masses,
                                                const PotentialSpec& pot, const Tolerances& tol = {});

// Constant moment of inertia implies a relative equilibrium. When I varies by
// more than tol.inertia_constancy the hypothesis is recorded as not met and no
// conclusion is checked.
VerificationReport verify_saari(const Trajectory& traj, const MassSystem& masses, const Tolerances& tol = {});

// Conservation of H and K, Sundman's inequality and barycentre drift.
VerificationReport verify_generic(const Trajectory& traj, const MassSystem& masses, const PotentialSpec& pot,
                                  const Tolerances& tol = {});

// (max - min) / max |x|; 0 for an all-zero series.
double relative_variation(const std::vector<double>& xs);

}  // namespace collinear
