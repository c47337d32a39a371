#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "collinear/vec2.hpp"

namespace collinear {

// Ordered list of strictly positive masses.
class MassSystem {
 public:
  explicit MassSystem(std::vector<double> masses);

  std::size_t size() const { return masses_.size(); }
  double operator[](std::size_t i) const { return masses_[i]; }
  std::span<const double> masses() const { return masses_; }
  double total_mass() const { return total_; }

 private:
  std::vector<double> masses_;
  double total_;
};

// One power-law term: contributes coefficient * beta * sum_{i>j} m_i m_j r_ij^alpha
// to the Lagrangian, with beta = +1 for alpha < 0 and beta = -1 for alpha > 0.
// A positive coefficient is attracting for either sign of alpha; a negative one
// is repelling (Lennard-Jones r^-12 wall).
struct PotentialTerm {
  double alpha;
  double coefficient;
};

class PotentialSpec {
 public:
  explicit PotentialSpec(std::vector<PotentialTerm> terms);

  static PotentialSpec newtonian(double g = 1.0) { return PotentialSpec({{-1.0, g}}); }
  static PotentialSpec homogeneous(double alpha, double coefficient = 1.0) {
    return PotentialSpec({{alpha, coefficient}});
  }

  std::span<const PotentialTerm> terms() const { return terms_; }

  // True when every term with a non-zero coefficient has the same exponent.
  bool is_homogeneous() const;
  // Exponent shared by the active terms; throws std::logic_error otherwise.
  double homogeneous_degree() const;
  bool has_attracting_term() const;

 private:
  std::vector<PotentialTerm> terms_;
};

inline double beta_sign(double alpha) { return alpha < 0 ? 1.0 : -1.0; }

// Positions and velocities of all bodies at one instant, always expressed in the
// barycentric frame: construction subtracts the centre of mass and its velocity.
template <class Real>
class BasicPhaseState {
 public:
  BasicPhaseState(const MassSystem& masses, std::vector<BasicVec2<Real>> positions,
                  std::vector<BasicVec2<Real>> velocities, Real time = Real(0))
      : positions_(std::move(positions)), velocities_(std::move(velocities)), time_(time) {
    if (positions_.size() != masses.size() || velocities_.size() != masses.size()) {
      throw std::invalid_argument("phase state size does not match the mass system");
    }
    BasicVec2<Real> com{}, mom{};
    for (std::size_t i = 0; i < masses.size(); ++i) {
      const Real m(masses[i]);
      com += m * positions_[i];
      mom += m * velocities_[i];
    }
    const Real total(masses.total_mass());
    com *= Real(1) / total;
    mom *= Real(1) / total;
    for (std::size_t i = 0; i < masses.size(); ++i) {
      positions_[i] -= com;
      velocities_[i] -= mom;
    }
  }

  std::size_t size() const { return positions_.size(); }
  const std::vector<BasicVec2<Real>>& positions() const { return positions_; }
  const std::vector<BasicVec2<Real>>& velocities() const { return velocities_; }
  Real time() const { return time_; }

  // Converts the scalar type without re-centering.
  template <class To>
  BasicPhaseState<To> cast() const {
    std::vector<BasicVec2<To>> p, v;
    p.reserve(size());
    v.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
      p.push_back({static_cast<To>(positions_[i].x), static_cast<To>(positions_[i].y)});
      v.push_back({static_cast<To>(velocities_[i].x), static_cast<To>(velocities_[i].y)});
    }
    return BasicPhaseState<To>(std::move(p), std::move(v), static_cast<To>(time_));
  }

 private:
  template <class>
  friend class BasicPhaseState;

  BasicPhaseState(std::vector<BasicVec2<Real>> p, std::vector<BasicVec2<Real>> v, Real t)
      : positions_(std::move(p)), velocities_(std::move(v)), time_(t) {}

  std::vector<BasicVec2<Real>> positions_;
  std::vector<BasicVec2<Real>> velocities_;
  Real time_;
};

using PhaseState = BasicPhaseState<double>;

struct AngularMomentum {
  double total;
  std::vector<double> per_body;
};

// Every instantaneous quantity of one state.
struct Diagnostics {
  double potential;       // U
  double kinetic;         // T
  double energy;          // H = T + U
  double inertia;         // I
  double angular_momentum;  // K
  std::vector<double> body_angular_momentum;  // K_i
  double radial_product;  // J
  double sundman_gap;     // 2TI - J^2 - K^2
  double collinearity;
  double omega;           // K / I
};

// U, with the Lagrangian equal to T - U.
double potential_energy(const PhaseState& state, const MassSystem& masses, const PotentialSpec& pot);
// dU/dr_i for every body.
std::vector<Vec2> grad_potential(const PhaseState& state, const MassSystem& masses,
                                 const PotentialSpec& pot);
double kinetic_energy(const PhaseState& state, const MassSystem& masses);
double moment_of_inertia(const PhaseState& state, const MassSystem& masses);
// (1/2M) sum_i sum_j m_i m_j r_ij^2; equals moment_of_inertia for barycentric states.
double moment_of_inertia_from_distances(const PhaseState& state, const MassSystem& masses);
AngularMomentum angular_momentum(const PhaseState& state, const MassSystem& masses);
// J = sum m_i r_i . v_i = dI/dt / 2.
double radial_product(const PhaseState& state, const MassSystem& masses);
// 2TI - J^2 - K^2, non-negative by Sundman's inequality.
double sundman_gap(const PhaseState& state, const MassSystem& masses);

// Direction angle of the principal axis of sum_i r_i r_i^T, in (-pi/2, pi/2].
double principal_axis_angle(std::span<const Vec2> positions);
// max_i |r_i x e| / max_j |r_j| for the principal axis e; 0 for a line through the origin.
double collinearity_residual(const PhaseState& state);
// K / I; throws DegenerateConfigurationError when I = 0.
double omega_estimate(const PhaseState& state, const MassSystem& masses);
// z-component of r_i x F_i with F_i = -dU/dr_i.
std::vector<double> torque_per_body(const PhaseState& state, const MassSystem& masses,
                                    const PotentialSpec& pot);

Diagnostics diagnose(const PhaseState& state, const MassSystem& masses, const PotentialSpec& pot);

// Largest |r_i|; the length scale used for unit-free tolerances.
double configuration_scale(const PhaseState& state);

}  // namespace collinear
