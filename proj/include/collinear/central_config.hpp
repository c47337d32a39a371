#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "collinear/errors.hpp"
#include "collinear/model.hpp"
#include "collinear/precision.hpp"

namespace collinear {

// A collinear central configuration: bodies ordered along a line with the
// given consecutive gaps, satisfying dU/dx_i = 2 lambda m_i x_i in barycentric
// coordinates. The induced relative equilibrium rotates at omega = sqrt(2 lambda).
template <class Real>
struct BasicCollinearConfiguration {
  std::vector<std::size_t> ordering;  // body indices, left to right
  std::vector<Real> gaps;             // gaps[k] = x(ordering[k+1]) - x(ordering[k])
  Real lambda{0};
  double residual_norm = 0;

  // Barycentric abscissae indexed by body.
  std::vector<Real> positions(const MassSystem& masses) const {
    std::vector<Real> x(ordering.size());
    Real along(0), com(0);
    for (std::size_t s = 0; s < ordering.size(); ++s) {
      if (s > 0) along += gaps[s - 1];
      x[ordering[s]] = along;
      com += Real(masses[ordering[s]]) * along;
    }
    com /= Real(masses.total_mass());
    for (auto& v : x) v -= com;
    return x;
  }
};

using CollinearConfiguration = BasicCollinearConfiguration<double>;

struct Normalization {
  enum class Kind { first_gap, inertia };
  Kind kind = Kind::first_gap;
  double value = 1.0;

  static Normalization first_gap(double v = 1.0) { return {Kind::first_gap, v}; }
  static Normalization inertia(double v = 1.0) { return {Kind::inertia, v}; }
};

class SolverError : public Error {
 public:
  SolverError(std::vector<std::size_t> ordering, double last_residual, const std::string& what);
  const std::vector<std::size_t>& ordering() const { return ordering_; }
  double last_residual() const { return last_residual_; }

 private:
  std::vector<std::size_t> ordering_;
  double last_residual_;
};

// More than one central configuration exists for the ordering at this
// normalization (quasi-homogeneous potentials only).
class AmbiguousRootsError : public Error {
 public:
  explicit AmbiguousRootsError(std::vector<CollinearConfiguration> roots);
  const std::vector<CollinearConfiguration>& roots() const { return roots_; }

 private:
  std::vector<CollinearConfiguration> roots_;
};

struct CcResidual {
  // a_{k+1} - a_k + 2 lambda g_k in slot order, with a_s the line acceleration.
  std::vector<double> components;
  // |sum m_i x_i| / (M scale) of the implied positions.
  double barycentric_defect = 0;
  // max |component| relative to the largest acceleration.
  double norm = 0;
};

CcResidual cc_residual(const CollinearConfiguration& config, const MassSystem& masses, const PotentialSpec& pot);

// Central configuration for one ordering. Homogeneous potentials have a single
// root per ordering; quasi-homogeneous ones may have several, in which case
// AmbiguousRootsError carries all of them.
CollinearConfiguration solve_collinear(const MassSystem& masses, std::span<const std::size_t> ordering,
                                       const PotentialSpec& pot,
                                       Normalization normalization = Normalization::first_gap());

// Damped Newton from the given gaps with no fallback; throws SolverError if it stalls.
CollinearConfiguration solve_collinear_from(const MassSystem& masses, std::span<const std::size_t> ordering,
                                            const PotentialSpec& pot, Normalization normalization,
                                            std::span<const double> initial_gaps);

struct CollinearSolution {
  std::vector<CollinearConfiguration> roots;
  bool ambiguous() const { return roots.size() > 1; }
};

// Every root found. Quasi-homogeneous three-body orderings are scanned over 64
// logarithmically spaced gap ratios; larger systems use 64 seeded Newton starts.
CollinearSolution solve_collinear_roots(const MassSystem& masses, std::span<const std::size_t> ordering,
                                        const PotentialSpec& pot,
                                        Normalization normalization = Normalization::first_gap());

// Permutations of 0..n-1 with first < last: one representative per reversal pair.
std::vector<std::vector<std::size_t>> orderings_modulo_reversal(std::size_t n);

// One configuration per ordering modulo reversal (n!/2 of them).
std::vector<CollinearConfiguration> enumerate_collinear(const MassSystem& masses, const PotentialSpec& pot,
                                                        Normalization normalization = Normalization::first_gap());

struct ScaleProbe {
  std::vector<double> shape_unit;   // g_k / g_0 at I = 1
  std::vector<double> shape_large;  // g_k / g_0 at I = 4
  double max_ratio_difference = 0;
};

ScaleProbe scale_dependence_probe(const MassSystem& masses, std::span<const std::size_t> ordering,
                                  const PotentialSpec& pot);

// Re-solves in Real starting from a double solution, keeping the first gap fixed.
template <class Real>
BasicCollinearConfiguration<Real> refine_collinear(const CollinearConfiguration& config, const MassSystem& masses,
                                                   const PotentialSpec& pot);

extern template BasicCollinearConfiguration<double> refine_collinear<double>(const CollinearConfiguration&,
                                                                             const MassSystem&,
                                                                             const PotentialSpec&);
extern template BasicCollinearConfiguration<quad> refine_collinear<quad>(const CollinearConfiguration&,
                                                                         const MassSystem&, const PotentialSpec&);

}  // namespace collinear
