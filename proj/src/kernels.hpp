#pragma once

// Scalar-generic pair-interaction kernels shared by the model, the integrator
// and the central-configuration solver.

#include <cmath>
#include <cstddef>
#include <span>

#include "collinear/errors.hpp"
#include "collinear/model.hpp"
#include "collinear/vec2.hpp"

namespace collinear::detail {

template <class Real>
Real power(const Real& d, double alpha) {
  const double rounded = std::round(alpha);
  if (rounded == alpha && std::abs(alpha) <= 32) {
    int e = static_cast<int>(rounded);
    Real base = e < 0 ? Real(1) / d : d;
    e = e < 0 ? -e : e;
    Real result(1);
    while (e > 0) {
      if (e & 1) result *= base;
      base *= base;
      e >>= 1;
    }
    return result;
  }
  using std::pow;
  return pow(d, Real(alpha));
}

// Per unit mass product: U_ij(d) = m_i m_j * pair_energy(d).
template <class Real>
Real pair_energy(const PotentialSpec& pot, const Real& d) {
  Real u(0);
  for (const auto& t : pot.terms()) {
    if (t.coefficient == 0) continue;
    u -= Real(t.coefficient * beta_sign(t.alpha)) * power(d, t.alpha);
  }
  return u;
}

template <class Real>
Real pair_energy_d1(const PotentialSpec& pot, const Real& d) {
  Real u(0);
  for (const auto& t : pot.terms()) {
    if (t.coefficient == 0) continue;
    u -= Real(t.coefficient * beta_sign(t.alpha) * t.alpha) * power(d, t.alpha - 1);
  }
  return u;
}

template <class Real>
Real pair_energy_d2(const PotentialSpec& pot, const Real& d) {
  Real u(0);
  for (const auto& t : pot.terms()) {
    if (t.coefficient == 0) continue;
    u -= Real(t.coefficient * beta_sign(t.alpha) * t.alpha * (t.alpha - 1)) * power(d, t.alpha - 2);
  }
  return u;
}

template <class Real>
Real planar_potential(std::span<const double> masses, const PotentialSpec& pot,
                      std::span<const BasicVec2<Real>> pos) {
  Real u(0);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const Real d = norm(pos[i] - pos[j]);
      if (d == 0) throw SingularityError(j, i);
      u += Real(masses[i] * masses[j]) * pair_energy(pot, d);
    }
  }
  return u;
}

// acc_i = -(1/m_i) dU/dr_i.
template <class Real>
void planar_accelerations(std::span<const double> masses, const PotentialSpec& pot,
                          std::span<const BasicVec2<Real>> pos, std::span<BasicVec2<Real>> acc) {
  for (auto& a : acc) a = {};
  for (std::size_t i = 0; i < pos.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const BasicVec2<Real> r = pos[i] - pos[j];
      const Real d = norm(r);
      if (d == 0) throw SingularityError(j, i);
      // dU_ij/dr_i = m_i m_j e'(d) r / d
      const BasicVec2<Real> g = (pair_energy_d1(pot, d) / d) * r;
      acc[i] -= Real(masses[j]) * g;
      acc[j] += Real(masses[i]) * g;
    }
  }
}

}  // namespace collinear::detail
