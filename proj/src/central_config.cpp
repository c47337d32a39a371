#include "collinear/central_config.hpp"

#include <boost/multiprecision/eigen.hpp>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

#include "kernels.hpp"

namespace collinear {

SolverError::SolverError(std::vector<std::size_t> ordering, double last_residual, const std::string& what)
    : Error([&] {
        std::ostringstream os;
        os << "central configuration solver failed for ordering (";
        for (std::size_t i = 0; i < ordering.size(); ++i) os << (i ? "," : "") << ordering[i];
        os << "): " << what << " (last residual " << last_residual << ")";
        return os.str();
      }()),
      ordering_(std::move(ordering)),
      last_residual_(last_residual) {}

AmbiguousRootsError::AmbiguousRootsError(std::vector<CollinearConfiguration> roots)
    : Error(std::to_string(roots.size()) + " central configurations found for one ordering"),
      roots_(std::move(roots)) {}

namespace {

template <class Real>
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <class Real>
using Vector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

// Bodies on a line in a fixed ordering; everything is indexed by slot.
template <class Real>
struct LineSystem {
  std::vector<double> m;
  double total_mass;
  const PotentialSpec& pot;

  LineSystem(const MassSystem& masses, std::span<const std::size_t> ordering, const PotentialSpec& p)
      : total_mass(masses.total_mass()), pot(p) {
    for (auto b : ordering) m.push_back(masses[b]);
  }

  std::size_t size() const { return m.size(); }

  std::vector<Real> abscissae(const std::vector<Real>& gaps) const {
    std::vector<Real> x(size());
    for (std::size_t s = 1; s < size(); ++s) x[s] = x[s - 1] + gaps[s - 1];
    return x;
  }

  // a_s = -(1/m_s) dU/dx_s.
  std::vector<Real> accelerations(const std::vector<Real>& x) const {
    std::vector<Real> a(size());
    for (std::size_t s = 0; s < size(); ++s) {
      for (std::size_t t = 0; t < s; ++t) {
        const Real e1 = detail::pair_energy_d1(pot, Real(x[s] - x[t]));
        // x_s > x_t: dU/dx_s gains m_s m_t e', dU/dx_t loses it.
        a[s] -= Real(m[t]) * e1;
        a[t] += Real(m[s]) * e1;
      }
    }
    return a;
  }

  // d a_s / d x_r.
  Matrix<Real> acceleration_jacobian(const std::vector<Real>& x) const {
    const std::size_t n = size();
    Matrix<Real> jac = Matrix<Real>::Zero(n, n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t t = 0; t < s; ++t) {
        const Real e2 = detail::pair_energy_d2(pot, Real(x[s] - x[t]));
        // Hessian of U: H_st = -m_s m_t e'', H_ss += m_s m_t e''.
        jac(s, s) -= Real(m[t]) * e2;
        jac(t, t) -= Real(m[s]) * e2;
        jac(s, t) += Real(m[t]) * e2;
        jac(t, s) += Real(m[s]) * e2;
      }
    }
    return jac;
  }

  Real inertia(const std::vector<Real>& x) const {
    Real sum(0);
    for (std::size_t s = 0; s < size(); ++s) {
      for (std::size_t t = 0; t < s; ++t) sum += Real(m[s] * m[t]) * (x[s] - x[t]) * (x[s] - x[t]);
    }
    return sum / Real(total_mass);
  }

  std::vector<Real> inertia_gradient(const std::vector<Real>& x) const {
    std::vector<Real> g(size());
    for (std::size_t s = 0; s < size(); ++s) {
      for (std::size_t t = 0; t < size(); ++t) g[s] += Real(2 * m[s] * m[t] / total_mass) * (x[s] - x[t]);
    }
    return g;
  }

  // Multiplier minimising the residual: lambda = -sum m x a / (2 I), x barycentric.
  Real projected_lambda(const std::vector<Real>& gaps) const {
    auto x = abscissae(gaps);
    Real com(0);
    for (std::size_t s = 0; s < size(); ++s) com += Real(m[s]) * x[s];
    com /= Real(total_mass);
    const auto a = accelerations(x);
    Real num(0), den(0);
    for (std::size_t s = 0; s < size(); ++s) {
      num += Real(m[s]) * (x[s] - com) * a[s];
      den += Real(m[s]) * (x[s] - com) * (x[s] - com);
    }
    return -num / (2 * den);
  }
};

template <class Real>
struct Evaluation {
  Vector<Real> residual;  // n entries; the last is the normalization equation
  Real accel_scale;
};

// Unknowns z = (log g_0, ..., log g_{n-2}, lambda).
template <class Real>
Evaluation<Real> evaluate(const LineSystem<Real>& sys, const Normalization& norm, const Vector<Real>& z,
                          Matrix<Real>* jacobian) {
  using std::abs;
  using std::exp;
  using std::log;
  const std::size_t n = sys.size();
  std::vector<Real> gaps(n - 1);
  for (std::size_t k = 0; k + 1 < n; ++k) gaps[k] = exp(z(k));
  const Real lambda = z(n - 1);
  const auto x = sys.abscissae(gaps);
  const auto a = sys.accelerations(x);

  Evaluation<Real> out{Vector<Real>(n), Real(0)};
  for (std::size_t s = 0; s < n; ++s) out.accel_scale = std::max(out.accel_scale, abs(a[s]));
  for (std::size_t k = 0; k + 1 < n; ++k) {
    out.accel_scale = std::max(out.accel_scale, abs(2 * lambda * gaps[k]));
    out.residual(k) = a[k + 1] - a[k] + 2 * lambda * gaps[k];
  }
  const Real inertia = sys.inertia(x);
  if (norm.kind == Normalization::Kind::first_gap) {
    out.residual(n - 1) = z(0) - log(Real(norm.value));
  } else {
    out.residual(n - 1) = log(inertia) - log(Real(norm.value));
  }

  if (jacobian != nullptr) {
    Matrix<Real>& jac = *jacobian;
    jac = Matrix<Real>::Zero(n, n);
    const auto da = sys.acceleration_jacobian(x);
    // x_r depends on g_j for r > j; suffix sums give d a_s / d g_j.
    Matrix<Real> dadg = Matrix<Real>::Zero(n, n - 1);
    for (std::size_t s = 0; s < n; ++s) {
      Real suffix(0);
      for (std::size_t j = n - 1; j-- > 0;) {
        suffix += da(s, j + 1);
        dadg(s, j) = suffix;
      }
    }
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (std::size_t j = 0; j + 1 < n; ++j) {
        Real d = dadg(k + 1, j) - dadg(k, j);
        if (j == k) d += 2 * lambda;
        jac(k, j) = d * gaps[j];
      }
      jac(k, n - 1) = 2 * gaps[k];
    }
    if (norm.kind == Normalization::Kind::first_gap) {
      jac(n - 1, 0) = 1;
    } else {
      const auto gi = sys.inertia_gradient(x);
      Real suffix(0);
      for (std::size_t j = n - 1; j-- > 0;) {
        suffix += gi[j + 1];
        jac(n - 1, j) = suffix * gaps[j] / inertia;
      }
    }
  }
  return out;
}

template <class Real>
Real scaled_merit(const Evaluation<Real>& e, const Real& scale) {
  using std::abs;
  const auto n = e.residual.size();
  Real worst(0);
  for (Eigen::Index k = 0; k + 1 < n; ++k) worst = std::max(worst, abs(e.residual(k)) / scale);
  return std::max(worst, abs(e.residual(n - 1)));
}

template <class Real>
struct NewtonResult {
  Vector<Real> z;
  Real residual;
  bool converged;
};

// Damped Newton with step limiting in log-gap space and backtracking on the
// scaled max-norm of the residual.
template <class Real>
NewtonResult<Real> newton(const LineSystem<Real>& sys, const Normalization& norm, Vector<Real> z,
                          double accept, int max_iter = 200) {
  using std::abs;
  using std::isfinite;
  const std::size_t n = sys.size();
  const Real floor = Real(64) * std::numeric_limits<Real>::epsilon();
  Matrix<Real> jac;
  auto current = evaluate(sys, norm, z, &jac);
  Real scale = current.accel_scale;
  Real merit = scaled_merit(current, scale);
  int stagnant = 0;
  for (int iter = 0; iter < max_iter; ++iter) {
    if (merit <= floor) break;
    Vector<Real> rhs = -current.residual;
    Vector<Real> step = jac.partialPivLu().solve(rhs);
    Real largest(0);
    for (std::size_t k = 0; k + 1 < n; ++k) largest = std::max(largest, abs(step(k)));
    if (largest > 1) step /= largest;

    Real t(1);
    bool moved = false;
    for (int ls = 0; ls < 40; ++ls) {
      Vector<Real> trial = z + t * step;
      auto e = evaluate<Real>(sys, norm, trial, nullptr);
      const Real m = scaled_merit(e, scale);
      if (m == m && m < (1 - Real(1e-4) * t) * merit) {
        z = trial;
        moved = true;
        break;
      }
      t /= 2;
    }
    if (!moved) break;
    current = evaluate(sys, norm, z, &jac);
    scale = current.accel_scale;
    const Real next = scaled_merit(current, scale);
    // Once acceptable, stop when roundoff prevents further progress.
    stagnant = next > Real(0.5) * merit ? stagnant + 1 : 0;
    merit = next;
    if (merit <= Real(accept) && stagnant >= 2) break;
  }
  return {z, merit, merit <= Real(accept)};
}

template <class Real>
Vector<Real> initial_unknowns(const LineSystem<Real>& sys, const std::vector<Real>& gaps) {
  using std::abs;
  using std::log;
  const std::size_t n = sys.size();
  Vector<Real> z(n);
  for (std::size_t k = 0; k + 1 < n; ++k) z(k) = log(gaps[k]);
  Real lambda = sys.projected_lambda(gaps);
  z(n - 1) = lambda != 0 ? abs(lambda) : Real(1);
  return z;
}

std::vector<std::size_t> checked_ordering(const MassSystem& masses, std::span<const std::size_t> ordering) {
  std::vector<std::size_t> o(ordering.begin(), ordering.end());
  if (o.size() != masses.size()) throw std::invalid_argument("ordering length must equal the number of bodies");
  std::vector<std::size_t> sorted = o;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] != i) throw std::invalid_argument("ordering must be a permutation of the body indices");
  }
  return o;
}

void check_normalization(const Normalization& norm) {
  if (!(norm.value > 0) || !std::isfinite(norm.value)) {
    throw std::invalid_argument("normalization value must be positive");
  }
}

CollinearConfiguration make_config(std::vector<std::size_t> ordering, const Vector<double>& z,
                                   const MassSystem& masses, const PotentialSpec& pot) {
  CollinearConfiguration cc;
  cc.ordering = std::move(ordering);
  const auto n = z.size();
  for (Eigen::Index k = 0; k + 1 < n; ++k) cc.gaps.push_back(std::exp(z(k)));
  cc.lambda = z(n - 1);
  cc.residual_norm = cc_residual(cc, masses, pot).norm;
  return cc;
}

// Newton keeps iterating past this until roundoff stalls it, so accepted roots
// sit at the precision floor of the residual.
constexpr double kAccept = 1e-10;

// Two-body configuration: the gap is fixed by the normalization.
std::optional<CollinearConfiguration> two_body(const MassSystem& masses, std::vector<std::size_t> ordering,
                                               const PotentialSpec& pot, const Normalization& norm) {
  const double m0 = masses[ordering[0]], m1 = masses[ordering[1]];
  const double gap = norm.kind == Normalization::Kind::first_gap
                         ? norm.value
                         : std::sqrt(norm.value * masses.total_mass() / (m0 * m1));
  // a_1 - a_0 + 2 lambda g = 0 with a_0 = -m1 e'(g), a_1 = m0 e'(g).
  const double e1 = detail::pair_energy_d1(pot, gap);
  const double lambda = (m0 + m1) * e1 / (2 * gap);
  if (!(lambda > 0)) return std::nullopt;
  CollinearConfiguration cc{std::move(ordering), {gap}, lambda, 0.0};
  cc.residual_norm = cc_residual(cc, masses, pot).norm;
  return cc;
}

// Three-body shape as a function of rho = g_1 / g_0 at fixed normalization.
struct RatioProblem {
  const LineSystem<double>& sys;
  Normalization norm;

  std::vector<double> gaps(double rho) const {
    if (norm.kind == Normalization::Kind::first_gap) return {norm.value, rho * norm.value};
    const double unit = sys.inertia(sys.abscissae({1.0, rho}));
    const double g0 = std::sqrt(norm.value / unit);
    return {g0, rho * g0};
  }

  // Residual of the second difference equation after eliminating lambda with the first.
  double operator()(double rho) const {
    const auto g = gaps(rho);
    const auto a = sys.accelerations(sys.abscissae(g));
    const double lambda = (a[0] - a[1]) / (2 * g[0]);
    const double raw = a[2] - a[1] + 2 * lambda * g[1];
    const double scale = std::abs(a[2]) + std::abs(a[1]) + std::abs(2 * lambda * g[1]);
    return scale > 0 ? raw / scale : raw;
  }
};

constexpr int kScanPoints = 64;
constexpr double kScanLow = 1e-3;
constexpr double kScanHigh = 1e3;

// Sign changes of the ratio residual, each polished by bisection in log rho.
std::vector<double> scan_ratio_roots(const RatioProblem& problem) {
  std::vector<double> roots;
  const double lo = std::log(kScanLow), hi = std::log(kScanHigh);
  double prev_u = lo;
  double prev_f = problem(std::exp(lo));
  for (int k = 1; k < kScanPoints; ++k) {
    const double u = lo + (hi - lo) * k / (kScanPoints - 1);
    const double f = problem(std::exp(u));
    if (prev_f == 0) {
      roots.push_back(std::exp(prev_u));
    } else if ((prev_f < 0) != (f < 0) && f != 0) {
      double a = prev_u, b = u, fa = prev_f;
      for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = problem(std::exp(mid));
        if ((fm < 0) == (fa < 0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      roots.push_back(std::exp(0.5 * (a + b)));
    }
    prev_u = u;
    prev_f = f;
  }
  return roots;
}

bool same_shape(const CollinearConfiguration& a, const CollinearConfiguration& b, double tol) {
  for (std::size_t k = 0; k < a.gaps.size(); ++k) {
    if (std::abs(a.gaps[k] - b.gaps[k]) > tol * std::max(a.gaps[k], b.gaps[k])) return false;
  }
  return true;
}

void add_root(std::vector<CollinearConfiguration>& roots, CollinearConfiguration cc) {
  if (!(cc.lambda > 0) || !(cc.residual_norm <= kAccept)) return;
  for (const auto& r : roots) {
    if (same_shape(r, cc, 1e-8)) return;
  }
  roots.push_back(std::move(cc));
}

std::optional<CollinearConfiguration> polish(const MassSystem& masses, const std::vector<std::size_t>& ordering,
                                             const PotentialSpec& pot, const LineSystem<double>& sys,
                                             const Normalization& norm, const std::vector<double>& gaps) {
  auto result = newton(sys, norm, initial_unknowns(sys, gaps), kAccept);
  if (!result.converged) return std::nullopt;
  return make_config(ordering, result.z, masses, pot);
}

// Rescales a homogeneous solution of degree alpha to the requested normalization.
CollinearConfiguration rescale(CollinearConfiguration cc, const MassSystem& masses, const PotentialSpec& pot,
                               const Normalization& norm) {
  const double alpha = pot.homogeneous_degree();
  double factor;
  if (norm.kind == Normalization::Kind::first_gap) {
    factor = norm.value / cc.gaps[0];
  } else {
    const LineSystem<double> sys(masses, cc.ordering, pot);
    factor = std::sqrt(norm.value / sys.inertia(sys.abscissae(cc.gaps)));
  }
  for (auto& g : cc.gaps) g *= factor;
  cc.lambda *= std::pow(factor, alpha - 2);
  cc.residual_norm = cc_residual(cc, masses, pot).norm;
  return cc;
}

}  // namespace

CcResidual cc_residual(const CollinearConfiguration& config, const MassSystem& masses, const PotentialSpec& pot) {
  const auto ordering = checked_ordering(masses, config.ordering);
  if (config.gaps.size() + 1 != ordering.size()) throw std::invalid_argument("need n-1 gaps");
  for (double g : config.gaps) {
    if (!(g > 0)) throw std::invalid_argument("gaps must be positive");
  }
  const LineSystem<double> sys(masses, ordering, pot);
  const auto x = sys.abscissae(config.gaps);
  const auto a = sys.accelerations(x);
  CcResidual out;
  double scale = 0;
  for (double v : a) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    out.components.push_back(a[k + 1] - a[k] + 2 * config.lambda * config.gaps[k]);
    scale = std::max(scale, std::abs(2 * config.lambda * config.gaps[k]));
  }
  double worst = 0;
  for (double c : out.components) worst = std::max(worst, std::abs(c));
  out.norm = scale > 0 ? worst / scale : worst;

  const auto pos = config.positions(masses);
  double moment = 0, extent = 0;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    moment += masses[i] * pos[i];
    extent = std::max(extent, std::abs(pos[i]));
  }
  out.barycentric_defect = extent > 0 ? std::abs(moment) / (masses.total_mass() * extent) : 0.0;
  return out;
}

CollinearConfiguration solve_collinear_from(const MassSystem& masses, std::span<const std::size_t> ordering,
                                            const PotentialSpec& pot, Normalization normalization,
                                            std::span<const double> initial_gaps) {
  auto order = checked_ordering(masses, ordering);
  check_normalization(normalization);
  if (initial_gaps.size() + 1 != order.size()) throw std::invalid_argument("need n-1 initial gaps");
  const LineSystem<double> sys(masses, order, pot);
  std::vector<double> gaps(initial_gaps.begin(), initial_gaps.end());
  for (double g : gaps) {
    if (!(g > 0)) throw std::invalid_argument("initial gaps must be positive");
  }
  if (order.size() == 2) {
    auto cc = two_body(masses, order, pot, normalization);
    if (!cc) throw SolverError(order, 0.0, "no positive multiplier");
    return *cc;
  }
  auto result = newton(sys, normalization, initial_unknowns(sys, gaps), kAccept);
  if (!result.converged) throw SolverError(order, result.residual, "damped Newton did not converge");
  auto cc = make_config(order, result.z, masses, pot);
  if (!(cc.lambda > 0)) throw SolverError(order, cc.residual_norm, "multiplier is not positive");
  return cc;
}

CollinearSolution solve_collinear_roots(const MassSystem& masses, std::span<const std::size_t> ordering,
                                        const PotentialSpec& pot, Normalization normalization) {
  auto order = checked_ordering(masses, ordering);
  check_normalization(normalization);
  if (!pot.has_attracting_term()) throw std::invalid_argument("potential has no attracting term");
  const std::size_t n = order.size();
  CollinearSolution out;

  if (n == 2) {
    if (auto cc = two_body(masses, order, pot, normalization)) out.roots.push_back(*cc);
    return out;
  }

  const LineSystem<double> sys(masses, order, pot);
  if (pot.is_homogeneous()) {
    const auto unit = Normalization::first_gap();
    std::optional<CollinearConfiguration> cc =
        polish(masses, order, pot, sys, unit, std::vector<double>(n - 1, 1.0));
    if (!cc && n == 3) {
      // Single bracketed root of the ratio residual.
      const RatioProblem ratio{sys, unit};
      for (double rho : scan_ratio_roots(ratio)) {
        cc = polish(masses, order, pot, sys, unit, ratio.gaps(rho));
        if (cc) break;
      }
    }
    if (cc && cc->lambda > 0) out.roots.push_back(rescale(*cc, masses, pot, normalization));
    return out;
  }

  if (n == 3) {
    const RatioProblem ratio{sys, normalization};
    for (double rho : scan_ratio_roots(ratio)) {
      if (auto cc = polish(masses, order, pot, sys, normalization, ratio.gaps(rho))) add_root(out.roots, *cc);
    }
  } else {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> spread(-1.5, 1.5);
    for (int start = 0; start < kScanPoints; ++start) {
      std::vector<double> gaps(n - 1, 1.0);
      if (start > 0) {
        for (auto& g : gaps) g = std::exp(spread(rng));
      }
      // Place the start on the normalization surface.
      double factor = normalization.value / gaps[0];
      if (normalization.kind == Normalization::Kind::inertia) {
        factor = std::sqrt(normalization.value / sys.inertia(sys.abscissae(gaps)));
      }
      for (auto& g : gaps) g *= factor;
      if (auto cc = polish(masses, order, pot, sys, normalization, gaps)) add_root(out.roots, *cc);
    }
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const auto& a, const auto& b) { return a.gaps < b.gaps; });
  return out;
}

CollinearConfiguration solve_collinear(const MassSystem& masses, std::span<const std::size_t> ordering,
                                       const PotentialSpec& pot, Normalization normalization) {
  auto solution = solve_collinear_roots(masses, ordering, pot, normalization);
  if (solution.roots.empty()) {
    throw SolverError(checked_ordering(masses, ordering), std::numeric_limits<double>::quiet_NaN(),
                      "no central configuration with positive multiplier found");
  }
  if (solution.ambiguous()) throw AmbiguousRootsError(std::move(solution.roots));
  return std::move(solution.roots.front());
}

std::vector<std::vector<std::size_t>> orderings_modulo_reversal(std::size_t n) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do {
    if (n < 2 || perm.front() < perm.back()) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::vector<CollinearConfiguration> enumerate_collinear(const MassSystem& masses, const PotentialSpec& pot,
                                                        Normalization normalization) {
  if (!pot.is_homogeneous()) throw std::invalid_argument("enumeration requires a homogeneous potential");
  std::vector<CollinearConfiguration> out;
  for (const auto& ordering : orderings_modulo_reversal(masses.size())) {
    out.push_back(solve_collinear(masses, ordering, pot, normalization));
  }
  return out;
}

ScaleProbe scale_dependence_probe(const MassSystem& masses, std::span<const std::size_t> ordering,
                                  const PotentialSpec& pot) {
  const auto unit = solve_collinear(masses, ordering, pot, Normalization::inertia(1.0));
  const auto large = solve_collinear(masses, ordering, pot, Normalization::inertia(4.0));
  ScaleProbe probe;
  for (std::size_t k = 1; k < unit.gaps.size(); ++k) {
    probe.shape_unit.push_back(unit.gaps[k] / unit.gaps[0]);
    probe.shape_large.push_back(large.gaps[k] / large.gaps[0]);
    probe.max_ratio_difference =
        std::max(probe.max_ratio_difference, std::abs(probe.shape_unit.back() - probe.shape_large.back()));
  }
  return probe;
}

template <class Real>
BasicCollinearConfiguration<Real> refine_collinear(const CollinearConfiguration& config, const MassSystem& masses,
                                                   const PotentialSpec& pot) {
  const auto order = checked_ordering(masses, config.ordering);
  const LineSystem<Real> sys(masses, order, pot);
  const std::size_t n = order.size();
  BasicCollinearConfiguration<Real> out;
  out.ordering = order;
  const auto norm = Normalization::first_gap(config.gaps.at(0));
  Vector<Real> z(n);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    using std::log;
    z(k) = log(Real(config.gaps[k]));
  }
  z(n - 1) = Real(config.lambda);
  // The first gap stays at its double value, which is exact in Real.
  auto result = newton(sys, norm, z, static_cast<double>(Real(1e3) * std::numeric_limits<Real>::epsilon()), 50);
  if (!result.converged) {
    throw SolverError(order, static_cast<double>(result.residual), "refinement did not converge");
  }
  for (std::size_t k = 0; k + 1 < n; ++k) {
    using std::exp;
    out.gaps.push_back(k == 0 ? Real(config.gaps[0]) : Real(exp(result.z(k))));
  }
  out.lambda = result.z(n - 1);
  out.residual_norm = static_cast<double>(result.residual);
  return out;
}

template BasicCollinearConfiguration<double> refine_collinear<double>(const CollinearConfiguration&,
                                                                      const MassSystem&, const PotentialSpec&);
template BasicCollinearConfiguration<quad> refine_collinear<quad>(const CollinearConfiguration&, const MassSystem&,
                                                                  const PotentialSpec&);

}  // namespace collinear
