#include "collinear/dynamics.hpp"

#include <boost/numeric/odeint/algebra/detail/extract_value_type.hpp>

// odeint cannot see through Boost.Multiprecision's number<> on its own.
namespace boost::numeric::odeint::detail {
template <>
struct extract_value_type<collinear::quad, void> {
  using type = collinear::quad;
};
}  // namespace boost::numeric::odeint::detail

#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <utility>

#include "kernels.hpp"

namespace collinear {

namespace ode = boost::numeric::odeint;

void IntegratorConfig::validate() const {
  if (!(rel_tol >= 1e-14) || !std::isfinite(rel_tol)) {
    throw std::invalid_argument("rel_tol must be finite and at least 1e-14");
  }
  if (!(abs_tol > 0) || !std::isfinite(abs_tol)) throw std::invalid_argument("abs_tol must be positive");
  if (!(max_step > 0)) throw std::invalid_argument("max_step must be positive");
  if (min_separation && !(*min_separation > 0)) throw std::invalid_argument("min_separation must be positive");
  if (!(sample_interval > 0) || !std::isfinite(sample_interval)) {
    throw std::invalid_argument("sample_interval must be positive");
  }
  if (scheme == Scheme::symplectic && !std::isfinite(max_step)) {
    throw std::invalid_argument("max_step must be finite for the symplectic scheme");
  }
}

std::vector<double> Trajectory::times() const {
  std::vector<double> t;
  t.reserve(samples.size());
  for (const auto& s : samples) t.push_back(s.time());
  return t;
}

CloseApproachError::CloseApproachError(double time, std::size_t i, std::size_t j, double distance,
                                       Trajectory partial)
    : Error("close approach of bodies " + std::to_string(i) + " and " + std::to_string(j) +
            " at t = " + std::to_string(time) + " (distance " + std::to_string(distance) + ")"),
      time_(time),
      first_(i),
      second_(j),
      distance_(distance),
      partial_(std::move(partial)) {}

StepSizeUnderflowError::StepSizeUnderflowError(double time, double step)
    : Error("step size underflow at t = " + std::to_string(time) + " (step " + std::to_string(step) + ")"),
      time_(time) {}

std::vector<Vec2> accelerations(const PhaseState& state, const MassSystem& masses,
                                const PotentialSpec& pot) {
  std::vector<Vec2> acc(state.size());
  detail::planar_accelerations<double>(masses.masses(), pot, state.positions(), acc);
  return acc;
}

namespace {

// Flat layout: [x0 y0 x1 y1 ...] for positions, same for velocities.
template <class Real>
using Flat = std::vector<Real>;

template <class Real>
std::span<const BasicVec2<Real>> as_vectors(const Flat<Real>& flat, std::size_t offset, std::size_t n) {
  return {reinterpret_cast<const BasicVec2<Real>*>(flat.data() + offset), n};
}

template <class Real>
std::span<BasicVec2<Real>> as_vectors(Flat<Real>& flat, std::size_t offset, std::size_t n) {
  return {reinterpret_cast<BasicVec2<Real>*>(flat.data() + offset), n};
}

static_assert(sizeof(BasicVec2<double>) == 2 * sizeof(double));
static_assert(sizeof(BasicVec2<quad>) == 2 * sizeof(quad));

template <class Real>
struct Problem {
  const MassSystem& masses;
  const PotentialSpec& pot;
  std::size_t n;

  void accel(std::span<const BasicVec2<Real>> pos, std::span<BasicVec2<Real>> acc) const {
    detail::planar_accelerations<Real>(masses.masses(), pot, pos, acc);
  }

  Real energy(const Flat<Real>& y) const {
    auto pos = as_vectors(y, 0, n);
    auto vel = as_vectors(y, 2 * n, n);
    Real t(0);
    for (std::size_t i = 0; i < n; ++i) t += Real(masses[i]) * dot(vel[i], vel[i]);
    return t / 2 + detail::planar_potential<Real>(masses.masses(), pot, pos);
  }

  // (distance, i, j) of the closest pair.
  std::tuple<Real, std::size_t, std::size_t> closest_pair(std::span<const BasicVec2<Real>> pos) const {
    Real best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const Real d = norm(pos[i] - pos[j]);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    return {best, bi, bj};
  }

  PhaseState sample(std::span<const BasicVec2<Real>> pos, std::span<const BasicVec2<Real>> vel,
                    const Real& t, double& barycenter_drift) const {
    std::vector<Vec2> p(n), v(n);
    BasicVec2<Real> com{};
    Real scale(0);
    for (std::size_t i = 0; i < n; ++i) {
      com += Real(masses[i]) * pos[i];
      scale = std::max(scale, norm(pos[i]));
      p[i] = {static_cast<double>(pos[i].x), static_cast<double>(pos[i].y)};
      v[i] = {static_cast<double>(vel[i].x), static_cast<double>(vel[i].y)};
    }
    if (scale > 0) {
      const double drift = static_cast<double>(norm(com) / (Real(masses.total_mass()) * scale));
      barycenter_drift = std::max(barycenter_drift, drift);
    }
    return PhaseState(masses, std::move(p), std::move(v), static_cast<double>(t));
  }
};

}  // namespace

template <class Real>
Trajectory integrate(const BasicPhaseState<Real>& state, const MassSystem& masses, const PotentialSpec& pot,
                     double t_end, const IntegratorConfig& config) {
  using std::abs;
  using std::sqrt;
  config.validate();
  const std::size_t n = state.size();
  if (n != masses.size()) throw std::invalid_argument("state and mass system disagree on body count");
  const Real t0 = state.time();
  if (!(Real(t_end) > t0)) throw std::invalid_argument("t_end must be later than the state time");

  Problem<Real> problem{masses, pot, n};
  Flat<Real> y(4 * n);
  for (std::size_t i = 0; i < n; ++i) {
    y[2 * i] = state.positions()[i].x;
    y[2 * i + 1] = state.positions()[i].y;
    y[2 * n + 2 * i] = state.velocities()[i].x;
    y[2 * n + 2 * i + 1] = state.velocities()[i].y;
  }

  Real scale(0), vscale(0);
  for (std::size_t i = 0; i < n; ++i) {
    scale = std::max(scale, norm(state.positions()[i]));
    vscale = std::max(vscale, norm(state.velocities()[i]));
  }
  const Real min_sep = config.min_separation ? Real(*config.min_separation) : Real(1e-8) * scale;

  Trajectory traj;
  const Real h0 = problem.energy(y);
  const auto note_step = [&](const Real& t) {
    const Real h = problem.energy(y);
    const Real drift = h0 != 0 ? abs(h - h0) / abs(h0) : abs(h - h0);
    traj.stats.max_energy_drift = std::max(traj.stats.max_energy_drift, static_cast<double>(drift));
    auto [d, i, j] = problem.closest_pair(as_vectors(std::as_const(y), 0, n));
    if (d < min_sep) {
      throw CloseApproachError(static_cast<double>(t), i, j, static_cast<double>(d), std::move(traj));
    }
  };
  const auto record = [&](const Real& t) {
    traj.samples.push_back(problem.sample(as_vectors(std::as_const(y), 0, n),
                                          as_vectors(std::as_const(y), 2 * n, n), t,
                                          traj.stats.max_barycenter_drift));
  };

  record(t0);
  note_step(t0);

  const auto rhs = [&problem, n](const Flat<Real>& x, Flat<Real>& dxdt, Real /*t*/) {
    std::copy(x.begin() + 2 * n, x.end(), dxdt.begin());
    problem.accel(as_vectors(x, 0, n), as_vectors(dxdt, 2 * n, n));
  };

  // Initial step from the free-fall and crossing time scales.
  Real dt;
  {
    Flat<Real> dydt(4 * n);
    rhs(y, dydt, t0);
    Real amax(0);
    for (const auto& a : as_vectors(std::as_const(dydt), 2 * n, n)) amax = std::max(amax, norm(a));
    Real tau = std::numeric_limits<double>::infinity();
    if (vscale > 0) tau = std::min(tau, scale / vscale);
    if (amax > 0) tau = std::min(tau, Real(sqrt(scale / amax)));
    if (!(tau < Real(std::numeric_limits<double>::infinity()))) tau = Real(1);
    dt = std::min(Real(1e-3) * tau, Real(config.sample_interval));
  }
  const Real max_step(config.max_step);
  const Real interval(config.sample_interval);
  const Real end(t_end);

  Real t = t0;
  std::size_t sample_index = 1;
  const auto next_target = [&]() {
    Real target = t0 + Real(sample_index) * interval;
    // Fold a uniform sample that lands on t_end into the endpoint.
    if (target > end || end - target <= Real(1e-12) * interval) target = end;
    return target;
  };

  if (config.scheme == Scheme::adaptive) {
    auto stepper = ode::make_controlled(Real(config.abs_tol), Real(config.rel_tol),
                                        ode::runge_kutta_fehlberg78<Flat<Real>, Real, Flat<Real>, Real>());
    while (t < end) {
      const Real target = next_target();
      Real h = std::min({dt, target - t, max_step});
      const bool clamped = h == target - t;
      if (stepper.try_step(rhs, y, t, h) == ode::fail) {
        ++traj.stats.rejected;
        dt = h;
        const Real floor = Real(64) * std::numeric_limits<Real>::epsilon() * std::max(Real(1), abs(t));
        if (dt < floor) throw StepSizeUnderflowError(static_cast<double>(t), static_cast<double>(dt));
        continue;
      }
      ++traj.stats.steps;
      // A step shortened to hit a sample says little about the natural step.
      dt = clamped ? std::max(h, dt) : h;
      if (clamped) t = target;
      note_step(t);
      if (t == target) {
        record(t);
        ++sample_index;
      }
    }
  } else {
    ode::symplectic_rkn_sb3a_mclachlan<Flat<Real>, Flat<Real>, Real, Flat<Real>, Flat<Real>, Real> stepper;
    Flat<Real> q(y.begin(), y.begin() + 2 * n), p(y.begin() + 2 * n, y.end());
    const auto dqdt = [](const Flat<Real>& mom, Flat<Real>& dq) { std::copy(mom.begin(), mom.end(), dq.begin()); };
    const auto dpdt = [&problem, n](const Flat<Real>& coor, Flat<Real>& dp) {
      problem.accel(as_vectors(coor, 0, n), as_vectors(dp, 0, n));
    };
    while (t < end) {
      const Real target = next_target();
      const Real h = std::min(max_step, target - t);
      stepper.do_step(std::make_pair(dqdt, dpdt), std::make_pair(std::ref(q), std::ref(p)), t, h);
      ++traj.stats.steps;
      t = h == target - t ? target : t + h;
      std::copy(q.begin(), q.end(), y.begin());
      std::copy(p.begin(), p.end(), y.begin() + 2 * n);
      note_step(t);
      if (t == target) {
        record(t);
        ++sample_index;
      }
    }
  }
  return traj;
}

template Trajectory integrate<double>(const BasicPhaseState<double>&, const MassSystem&, const PotentialSpec&,
                                      double, const IntegratorConfig&);
template Trajectory integrate<quad>(const BasicPhaseState<quad>&, const MassSystem&, const PotentialSpec&,
                                    double, const IntegratorConfig&);

std::vector<double> finite_difference(std::span<const double> times, std::span<const double> values) {
  const std::size_t count = times.size();
  if (values.size() != count) throw std::invalid_argument("finite_difference: size mismatch");
  std::vector<double> out(count, 0.0);
  if (count < 2) return out;
  const std::size_t width = std::min<std::size_t>(5, count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::size_t start =
        std::min(k >= width / 2 ? k - width / 2 : 0, count - width);
    // Fornberg's recursion for weights of orders 0 and 1 at z = times[k].
    const double z = times[k];
    std::array<std::array<double, 2>, 5> c{};
    double c1 = 1, c4 = times[start] - z;
    c[0][0] = 1;
    for (std::size_t i = 1; i < width; ++i) {
      const std::size_t mn = std::min<std::size_t>(i, 1);
      double c2 = 1;
      const double c5 = c4;
      c4 = times[start + i] - z;
      for (std::size_t j = 0; j < i; ++j) {
        const double c3 = times[start + i] - times[start + j];
        c2 *= c3;
        if (j == i - 1) {
          for (std::size_t d = mn; d >= 1; --d) {
            c[i][d] = c1 * (static_cast<double>(d) * c[i - 1][d - 1] - c5 * c[i - 1][d]) / c2;
          }
          c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
        }
        for (std::size_t d = mn; d >= 1; --d) {
          c[j][d] = (c4 * c[j][d] - static_cast<double>(d) * c[j][d - 1]) / c3;
        }
        c[j][0] = c4 * c[j][0] / c3;
      }
      c1 = c2;
    }
    double derivative = 0;
    for (std::size_t i = 0; i < width; ++i) derivative += c[i][1] * values[start + i];
    out[k] = derivative;
  }
  return out;
}

DiagnosticSeries diagnostics_series(const Trajectory& traj, const MassSystem& masses, const PotentialSpec& pot) {
  if (traj.samples.empty()) throw std::invalid_argument("diagnostics_series: empty trajectory");
  DiagnosticSeries series;
  const std::size_t n = masses.size();
  std::vector<double> omega;
  for (const auto& s : traj.samples) {
    series.times.push_back(s.time());
    series.values.push_back(diagnose(s, masses, pot));
    omega.push_back(series.values.back().omega);
    std::vector<double> radius(n), speed(n);
    for (std::size_t i = 0; i < n; ++i) {
      radius[i] = norm(s.positions()[i]);
      speed[i] = radius[i] > 0 ? dot(s.positions()[i], s.velocities()[i]) / radius[i] : 0.0;
    }
    series.radius.push_back(std::move(radius));
    series.radial_speed.push_back(std::move(speed));
  }
  series.omega_rate = finite_difference(series.times, omega);
  return series;
}

}  // namespace collinear
