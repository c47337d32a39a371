#include "collinear/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace collinear {

double homographic_radial_period(const CollinearConfiguration& cc, const PotentialSpec& pot, double omega0,
                                 double dilation_rate) {
  if (!pot.is_homogeneous() || pot.homogeneous_degree() != -1.0) {
    throw std::invalid_argument("radial period is only available for Newtonian potentials");
  }
  // nu'' = -mu / nu^2 + omega0^2 / nu^3 with mu = 2 lambda at nu = 1.
  const double mu = 2 * cc.lambda;
  const double energy = 0.5 * (dilation_rate * dilation_rate + omega0 * omega0) - mu;
  if (!(energy < 0)) throw std::invalid_argument("homographic orbit is not bounded");
  const double a = mu / (-2 * energy);
  return 2 * std::numbers::pi * std::sqrt(a * a * a / mu);
}

namespace {

PhaseState line_state(const MassSystem& masses, std::span<const double> gaps, double omega0) {
  if (gaps.size() + 1 != masses.size()) throw std::invalid_argument("need n-1 gaps");
  std::vector<Vec2> r, v;
  double x = 0;
  for (std::size_t i = 0; i < masses.size(); ++i) {
    if (i > 0) {
      if (!(gaps[i - 1] > 0) || !std::isfinite(gaps[i - 1])) throw std::invalid_argument("gaps must be positive");
      x += gaps[i - 1];
    }
    r.push_back({x, 0.0});
  }
  PhaseState centred(masses, r, std::vector<Vec2>(masses.size()));
  for (const auto& ri : centred.positions()) v.push_back(omega0 * perp(ri));
  return PhaseState(masses, centred.positions(), std::move(v));
}

}  // namespace

double central_defect(const MassSystem& masses, std::span<const double> gaps, const PotentialSpec& pot) {
  const PhaseState state = line_state(masses, gaps, 0.0);
  const auto acc = accelerations(state, masses, pot);
  double num = 0;
  for (std::size_t i = 0; i < masses.size(); ++i) num += masses[i] * dot(state.positions()[i], acc[i]);
  CollinearConfiguration cc;
  for (std::size_t i = 0; i < masses.size(); ++i) cc.ordering.push_back(i);
  cc.gaps.assign(gaps.begin(), gaps.end());
  cc.lambda = -num / (2 * moment_of_inertia(state, masses));
  return cc_residual(cc, masses, pot).norm;
}

PhaseState non_central_collinear_ics(const MassSystem& masses, std::span<const double> gaps, double omega0,
                                     const PotentialSpec& pot) {
  if (!std::isfinite(omega0)) throw std::invalid_argument("omega0 must be finite");
  const double defect = central_defect(masses, gaps, pot);
  if (defect < 1e-3) {
    std::ostringstream os;
    os << "gaps form a central configuration (residual " << defect << " < 1e-3)";
    throw std::invalid_argument(os.str());
  }
  return line_state(masses, gaps, omega0);
}

Fixture read_fixture(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture " + path.string());
  std::vector<double> m;
  std::vector<Vec2> r, v;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    double mass, x, y, vx, vy;
    if (!(fields >> mass)) continue;
    std::string extra;
    if (!(fields >> x >> y >> vx >> vy) || (fields >> extra)) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected `mass x y vx vy`");
    }
    m.push_back(mass);
    r.push_back({x, y});
    v.push_back({vx, vy});
  }
  MassSystem masses(std::move(m));
  PhaseState state(masses, std::move(r), std::move(v));
  return {std::move(masses), std::move(state)};
}

void write_fixture(const std::filesystem::path& path, const Fixture& fixture, std::span<const std::string> comments) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write fixture " + path.string());
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# mass x y vx vy\n" << std::setprecision(17);
  for (std::size_t i = 0; i < fixture.masses.size(); ++i) {
    const auto& r = fixture.state.positions()[i];
    const auto& v = fixture.state.velocities()[i];
    out << fixture.masses[i] << ' ' << r.x << ' ' << r.y << ' ' << v.x << ' ' << v.y << '\n';
  }
}

std::filesystem::path data_directory() {
  if (const char* env = std::getenv("COLLINEAR_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return COLLINEAR_DATA_DIR;
}

Fixture figure_eight() { return read_fixture(data_directory() / "figure_eight.txt"); }

PhaseState figure_eight_ics() { return figure_eight().state; }

HomographicFit fit_homographic(const Trajectory& traj, const MassSystem& masses) {
  if (traj.samples.empty()) throw std::invalid_argument("empty trajectory");
  const std::size_t n = masses.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  auto distances = [&](const PhaseState& s) {
    std::vector<double> d;
    for (auto [i, j] : pairs) d.push_back(norm(s.positions()[i] - s.positions()[j]));
    return d;
  };

  const PhaseState& first = traj.samples.front();
  const double inertia0 = moment_of_inertia(first, masses);
  if (!(inertia0 > 0)) throw DegenerateConfigurationError("moment of inertia vanishes at the first sample");
  const auto d0 = distances(first);
  const double scale0 = configuration_scale(first);
  std::vector<std::size_t> references;
  for (std::size_t q = 0; q < pairs.size(); ++q) {
    if (d0[q] > 1e-9 * scale0) references.push_back(q);
  }

  HomographicFit fit;
  double previous = 0;
  for (const auto& s : traj.samples) {
    const double inertia = moment_of_inertia(s, masses);
    if (!(inertia > 0)) throw DegenerateConfigurationError("moment of inertia vanishes along the trajectory");
    fit.times.push_back(s.time());
    fit.scale.push_back(std::sqrt(inertia / inertia0));

    const double raw = principal_axis_angle(s.positions());
    if (fit.angle.empty()) {
      fit.angle.push_back(raw);
    } else {
      // The axis is defined modulo pi: take the increment closest to zero.
      double step = std::remainder(raw - previous, std::numbers::pi);
      fit.angle.push_back(fit.angle.back() + step);
    }
    previous = raw;

    const auto d = distances(s);
    for (std::size_t q : references) {
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const double dev = std::abs(d[p] / d[q] - d0[p] / d0[q]);
        if (dev > fit.max_shape_deviation || !(dev == dev)) {
          fit.max_shape_deviation = dev == dev ? dev : std::numeric_limits<double>::infinity();
          fit.worst_time = s.time();
        }
      }
    }
  }
  return fit;
}

}  // namespace collinear
