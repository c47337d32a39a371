#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <vector>

#include "collinear/central_config.hpp"
#include "collinear/dynamics.hpp"
#include "collinear/model.hpp"

namespace collinear {

// Angular rate of the circular relative equilibrium built on cc.
template <class Real>
Real circular_rate(const BasicCollinearConfiguration<Real>& cc) {
  using std::sqrt;
  return sqrt(2 * cc.lambda);
}

// Bodies on the x-axis at the CC positions with v_i = dilation_rate r_i + omega0 z x r_i.
template <class Real>
BasicPhaseState<Real> homographic_ics(const BasicCollinearConfiguration<Real>& cc, const MassSystem& masses,
                                      const Real& omega0, const Real& dilation_rate) {
  if (!(cc.residual_norm <= 1e-10)) throw std::invalid_argument("configuration is not a solved central configuration");
  const auto x = cc.positions(masses);
  std::vector<BasicVec2<Real>> r, v;
  for (const auto& xi : x) {
    const BasicVec2<Real> ri{xi, Real(0)};
    r.push_back(ri);
    v.push_back(dilation_rate * ri + omega0 * perp(ri));
  }
  return BasicPhaseState<Real>(masses, std::move(r), std::move(v));
}

// Rigid rotation of cc at omega = sqrt(2 lambda).
template <class Real>
BasicPhaseState<Real> relative_equilibrium_ics(const BasicCollinearConfiguration<Real>& cc, const MassSystem& masses) {
  return homographic_ics(cc, masses, circular_rate(cc), Real(0));
}

// Radial (nu) period of a homographic orbit started from homographic_ics at
// nu = 1. Newtonian potentials only, where nu follows a Kepler ellipse.
double homographic_radial_period(const CollinearConfiguration& cc, const PotentialSpec& pot, double omega0,
                                 double dilation_rate);

// Rigid rotation at omega0 of bodies 0..n-1 placed left to right with the given
// gaps. Rejects shapes whose central-configuration residual, at the best-fit
// multiplier, is below 1e-3.
PhaseState non_central_collinear_ics(const MassSystem& masses, std::span<const double> gaps, double omega0,
                                     const PotentialSpec& pot);

// Relative residual of the central-configuration equation for the shape given
// by gaps (identity ordering) at the least-squares multiplier.
double central_defect(const MassSystem& masses, std::span<const double> gaps, const PotentialSpec& pot);

struct Fixture {
  MassSystem masses;
  PhaseState state;
};

// Plain text, one body per line: `mass x y vx vy`; `#` starts a comment.
Fixture read_fixture(const std::filesystem::path& path);
void write_fixture(const std::filesystem::path& path, const Fixture& fixture, std::span<const std::string> comments = {});

// Directory holding the bundled fixtures; COLLINEAR_DATA_DIR in the environment overrides it.
std::filesystem::path data_directory();

// Equal-mass figure-eight choreography (G = 1) read from figure_eight.txt.
Fixture figure_eight();
PhaseState figure_eight_ics();
inline constexpr double kFigureEightPeriod = 6.32591398;

struct HomographicFit {
  std::vector<double> times;
  std::vector<double> scale;  // nu(t) = sqrt(I(t) / I(0))
  std::vector<double> angle;  // principal-axis angle, lifted continuously
  double max_shape_deviation = 0;
  double worst_time = 0;
};

// Throws DegenerateConfigurationError when I vanishes at some sample.
HomographicFit fit_homographic(const Trajectory& traj, const MassSystem& masses);

}  // namespace collinear
