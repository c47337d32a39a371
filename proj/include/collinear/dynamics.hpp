#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "collinear/errors.hpp"
#include "collinear/model.hpp"
#include "collinear/precision.hpp"

namespace collinear {

enum class Scheme {
  // Embedded Runge-Kutta-Fehlberg 7(8) with step-size control.
  adaptive,
  // Fourth-order symplectic Runge-Kutta-Nystrom at fixed step max_step.
  symplectic,
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double max_step = std::numeric_limits<double>::infinity();
  // Defaults to 1e-8 times the initial configuration scale.
  std::optional<double> min_separation;
  double sample_interval = 0.01;
  Scheme scheme = Scheme::adaptive;

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

struct IntegratorStats {
  std::size_t steps = 0;
  std::size_t rejected = 0;
  // max |H(t) - H(0)| / |H(0)| over accepted steps (absolute when H(0) = 0).
  double max_energy_drift = 0;
  // max |sum m_i r_i| / (M scale) of the raw integrator state at the samples.
  double max_barycenter_drift = 0;
};

struct Trajectory {
  std::vector<PhaseState> samples;
  IntegratorStats stats;

  std::vector<double> times() const;
};

class CloseApproachError : public Error {
 public:
  CloseApproachError(double time, std::size_t i, std::size_t j, double distance, Trajectory partial);
  double time() const { return time_; }
  std::size_t first() const { return first_; }
  std::size_t second() const { return second_; }
  double distance() const { return distance_; }
  // Samples recorded before the guard fired.
  const Trajectory& partial() const { return partial_; }

 private:
  double time_;
  std::size_t first_;
  std::size_t second_;
  double distance_;
  Trajectory partial_;
};

class StepSizeUnderflowError : public Error {
 public:
  StepSizeUnderflowError(double time, double step);
  double time() const { return time_; }

 private:
  double time_;
};

// r''_i = -(1/m_i) dU/dr_i.
std::vector<Vec2> accelerations(const PhaseState& state, const MassSystem& masses,
                                const PotentialSpec& pot);

// Integrates from state.time() to t_end, sampling every sample_interval and at
// t_end. Arithmetic is carried out in Real; samples are rounded to double.
template <class Real>
Trajectory integrate(const BasicPhaseState<Real>& state, const MassSystem& masses,
                     const PotentialSpec& pot, double t_end, const IntegratorConfig& config);

extern template Trajectory integrate<double>(const BasicPhaseState<double>&, const MassSystem&,
                                             const PotentialSpec&, double, const IntegratorConfig&);
extern template Trajectory integrate<quad>(const BasicPhaseState<quad>&, const MassSystem&,
                                           const PotentialSpec&, double, const IntegratorConfig&);

struct DiagnosticSeries {
  std::vector<double> times;
  std::vector<Diagnostics> values;
  // d(omega)/dt by fourth-order finite differences on the sample grid.
  std::vector<double> omega_rate;
  // |r_i| and d|r_i|/dt = r_i . v_i / |r_i| (0 for a body at the centre), [sample][body].
  std::vector<std::vector<double>> radius;
  std::vector<std::vector<double>> radial_speed;
};

DiagnosticSeries diagnostics_series(const Trajectory& traj, const MassSystem& masses,
                                    const PotentialSpec& pot);

// First derivative of samples f(times) at every sample, using five-point
// Fornberg stencils (fewer points when the series is shorter).
std::vector<double> finite_difference(std::span<const double> times, std::span<const double> values);

}  // namespace collinear
