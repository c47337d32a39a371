#include "collinear/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "collinear/errors.hpp"
#include "kernels.hpp"

namespace collinear {

MassSystem::MassSystem(std::vector<double> masses) : masses_(std::move(masses)) {
  if (masses_.size() < 2) throw std::invalid_argument("at least two bodies are required");
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0) || !std::isfinite(masses_[i])) {
      throw std::invalid_argument("mass " + std::to_string(i) + " must be positive and finite");
    }
  }
  total_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

PotentialSpec::PotentialSpec(std::vector<PotentialTerm> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("potential needs at least one term");
  bool active = false;
  for (const auto& t : terms_) {
    if (t.alpha == 0) throw std::invalid_argument("potential term with alpha = 0 is dynamically void");
    if (!std::isfinite(t.alpha) || !std::isfinite(t.coefficient)) {
      throw std::invalid_argument("potential term must be finite");
    }
    active = active || t.coefficient != 0;
  }
  if (!active) throw std::invalid_argument("potential has no term with a non-zero coefficient");
}

bool PotentialSpec::is_homogeneous() const {
  const PotentialTerm* first = nullptr;
  for (const auto& t : terms_) {
    if (t.coefficient == 0) continue;
    if (first == nullptr) {
      first = &t;
    } else if (t.alpha != first->alpha) {
      return false;
    }
  }
  return true;
}

double PotentialSpec::homogeneous_degree() const {
  if (!is_homogeneous()) throw std::logic_error("potential is not homogeneous");
  for (const auto& t : terms_) {
    if (t.coefficient != 0) return t.alpha;
  }
  throw std::logic_error("potential has no active term");
}

bool PotentialSpec::has_attracting_term() const {
  return std::any_of(terms_.begin(), terms_.end(), [](const PotentialTerm& t) { return t.coefficient > 0; });
}

double potential_energy(const PhaseState& state, const MassSystem& masses, const PotentialSpec& pot) {
  return detail::planar_potential<double>(masses.masses(), pot, state.positions());
}

std::vector<Vec2> grad_potential(const PhaseState& state, const MassSystem& masses,
                                 const PotentialSpec& pot) {
  std::vector<Vec2> acc(state.size());
  detail::planar_accelerations<double>(masses.masses(), pot, state.positions(), acc);
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] *= -masses[i];
  return acc;
}

double kinetic_energy(const PhaseState& state, const MassSystem& masses) {
  double t = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    t += masses[i] * dot(state.velocities()[i], state.velocities()[i]);
  }
  return 0.5 * t;
}

double moment_of_inertia(const PhaseState& state, const MassSystem& masses) {
  double inertia = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    inertia += masses[i] * dot(state.positions()[i], state.positions()[i]);
  }
  return inertia;
}

double moment_of_inertia_from_distances(const PhaseState& state, const MassSystem& masses) {
  const auto& r = state.positions();
  double sum = 0;
  for (std::size_t i = 0; i < r.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Vec2 d = r[i] - r[j];
      sum += masses[i] * masses[j] * dot(d, d);
    }
  }
  // Each unordered pair appears twice in the double sum.
  return sum / masses.total_mass();
}

AngularMomentum angular_momentum(const PhaseState& state, const MassSystem& masses) {
  AngularMomentum out{0.0, std::vector<double>(state.size())};
  for (std::size_t i = 0; i < state.size(); ++i) {
    out.per_body[i] = masses[i] * cross(state.positions()[i], state.velocities()[i]);
    out.total += out.per_body[i];
  }
  return out;
}

double radial_product(const PhaseState& state, const MassSystem& masses) {
  double j = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    j += masses[i] * dot(state.positions()[i], state.velocities()[i]);
  }
  return j;
}

double sundman_gap(const PhaseState& state, const MassSystem& masses) {
  const double t = kinetic_energy(state, masses);
  const double inertia = moment_of_inertia(state, masses);
  const double j = radial_product(state, masses);
  const double k = angular_momentum(state, masses).total;
  return 2 * t * inertia - j * j - k * k;
}

double principal_axis_angle(std::span<const Vec2> positions) {
  double sxx = 0, syy = 0, sxy = 0;
  for (const auto& r : positions) {
    sxx += r.x * r.x;
    syy += r.y * r.y;
    sxy += r.x * r.y;
  }
  // Eigenvector of the larger eigenvalue of [[sxx, sxy], [sxy, syy]].
  return 0.5 * std::atan2(2 * sxy, sxx - syy);
}

double configuration_scale(const PhaseState& state) {
  double scale = 0;
  for (const auto& r : state.positions()) scale = std::max(scale, norm(r));
  return scale;
}

double collinearity_residual(const PhaseState& state) {
  const double scale = configuration_scale(state);
  if (scale == 0) return 0;
  const double theta = principal_axis_angle(state.positions());
  const Vec2 axis{std::cos(theta), std::sin(theta)};
  double worst = 0;
  for (const auto& r : state.positions()) worst = std::max(worst, std::abs(cross(r, axis)));
  return worst / scale;
}

double omega_estimate(const PhaseState& state, const MassSystem& masses) {
  const double inertia = moment_of_inertia(state, masses);
  if (!(inertia > 0)) throw DegenerateConfigurationError("moment of inertia vanishes");
  return angular_momentum(state, masses).total / inertia;
}

std::vector<double> torque_per_body(const PhaseState& state, const MassSystem& masses,
                                    const PotentialSpec& pot) {
  const auto grad = grad_potential(state, masses, pot);
  std::vector<double> torque(state.size());
  for (std::size_t i = 0; i < state.size(); ++i) torque[i] = -cross(state.positions()[i], grad[i]);
  return torque;
}

Diagnostics diagnose(const PhaseState& state, const MassSystem& masses, const PotentialSpec& pot) {
  Diagnostics d;
  d.potential = potential_energy(state, masses, pot);
  d.kinetic = kinetic_energy(state, masses);
  d.energy = d.kinetic + d.potential;
  d.inertia = moment_of_inertia(state, masses);
  auto am = angular_momentum(state, masses);
  d.angular_momentum = am.total;
  d.body_angular_momentum = std::move(am.per_body);
  d.radial_product = radial_product(state, masses);
  d.sundman_gap = 2 * d.kinetic * d.inertia - d.radial_product * d.radial_product -
                  d.angular_momentum * d.angular_momentum;
  d.collinearity = collinearity_residual(state);
  if (!(d.inertia > 0)) throw DegenerateConfigurationError("moment of inertia vanishes");
  d.omega = d.angular_momentum / d.inertia;
  return d;
}

}  // namespace collinear
