#include <doctest.h>

#include <cmath>
#include <random>

#include "collinear/errors.hpp"
#include "collinear/model.hpp"
#include "oracles.hpp"

using namespace collinear;

namespace {

PhaseState still(const MassSystem& m, std::vector<Vec2> r) {
  return PhaseState(m, std::move(r), std::vector<Vec2>(m.size()));
}

// Masses (1,1) at +-0.5 rotating at sqrt(2).
PhaseState two_body_circular() {
  const double w = std::sqrt(2.0);
  MassSystem m({1, 1});
  return PhaseState(m, {{-0.5, 0}, {0.5, 0}}, {{0, -0.5 * w}, {0, 0.5 * w}});
}

struct Random {
  std::mt19937_64 rng{12345};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  std::vector<Vec2> points(std::size_t n, double spread = 1.0) {
    std::vector<Vec2> r;
    for (std::size_t i = 0; i < n; ++i) r.push_back({uniform(-spread, spread), uniform(-spread, spread)});
    return r;
  }
};

std::vector<oracle::Body> bodies(const PhaseState& s, const MassSystem& m) {
  std::vector<oracle::Body> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    out.push_back({m[i], s.positions()[i].x, s.positions()[i].y, s.velocities()[i].x, s.velocities()[i].y});
  }
  return out;
}

}  // namespace

TEST_CASE("mass system validates its masses") {
  MassSystem m({1, 2, 3});
  CHECK(m.total_mass() == 6);
  CHECK_THROWS_AS(MassSystem({1}), std::invalid_argument);
  CHECK_THROWS_AS(MassSystem({1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(MassSystem({1, -2}), std::invalid_argument);
  CHECK_THROWS_AS(MassSystem({1, NAN}), std::invalid_argument);
}

TEST_CASE("potential spec rejects void terms") {
  CHECK_THROWS_AS(PotentialSpec({}), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec({{0.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(PotentialSpec({{-1.0, 0.0}}), std::invalid_argument);
  CHECK(PotentialSpec::newtonian().is_homogeneous());
  CHECK_FALSE(PotentialSpec({{-6, 1}, {-12, -0.005}}).is_homogeneous());
  // A zero coefficient leaves a homogeneous law.
  PotentialSpec degenerate({{-1, 1}, {-12, 0}});
  CHECK(degenerate.is_homogeneous());
  CHECK(degenerate.homogeneous_degree() == -1);
}

TEST_CASE("phase states are re-centred") {
  MassSystem m({1, 2, 3});
  PhaseState s(m, {{1, 2}, {3, -1}, {0.5, 4}}, {{1, 0}, {0, 1}, {-2, 3}});
  Vec2 com{}, mom{};
  double scale = 0, vscale = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    com += m[i] * s.positions()[i];
    mom += m[i] * s.velocities()[i];
    scale = std::max(scale, norm(s.positions()[i]));
    vscale = std::max(vscale, norm(s.velocities()[i]));
  }
  CHECK(norm(com) / (6 * scale) <= 1e-12);
  CHECK(norm(mom) / (6 * vscale) <= 1e-12);
  CHECK_THROWS_AS(PhaseState(m, {{0, 0}}, {{0, 0}}), std::invalid_argument);
}

TEST_CASE("potential energy") {
  auto newton = PotentialSpec::newtonian();
  MassSystem three({1, 1, 1});
  CHECK(potential_energy(still(three, {{-1, 0}, {0, 0}, {1, 0}}), three, newton) == doctest::Approx(-2.5).epsilon(1e-15));
  MassSystem two({1, 1});
  CHECK(potential_energy(still(two, {{-0.5, 0}, {0.5, 0}}), two, newton) == doctest::Approx(-1).epsilon(1e-15));

  SUBCASE("matches the pairwise oracle on random configurations") {
    Random rnd;
    MassSystem m({1, 2, 3});
    const std::vector<std::pair<double, double>> terms{{-1, 1}};
    for (int k = 0; k < 20; ++k) {
      auto s = still(m, rnd.points(3));
      const double expected = oracle::potential(bodies(s, m), terms);
      CHECK(std::abs(potential_energy(s, m, newton) - expected) <= 1e-14 * std::abs(expected));
    }
  }
  SUBCASE("positive exponents and mixed terms") {
    Random rnd;
    MassSystem m({1, 2, 3});
    const std::vector<std::pair<double, double>> terms{{2, 0.5}, {-6, 1}, {-12, -0.005}, {-1.5, 2}};
    std::vector<PotentialTerm> spec;
    for (auto [a, c] : terms) spec.push_back({a, c});
    for (int k = 0; k < 20; ++k) {
      auto s = still(m, rnd.points(3));
      const double expected = oracle::potential(bodies(s, m), terms);
      CHECK(potential_energy(s, m, PotentialSpec(spec)) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
  SUBCASE("coincident bodies name the pair") {
    MassSystem m({1, 2, 3});
    try {
      potential_energy(still(m, {{0, 0}, {1, 0}, {1, 0}}), m, newton);
      FAIL("expected a singularity");
    } catch (const SingularityError& e) {
      CHECK(e.first() == 1);
      CHECK(e.second() == 2);
    }
  }
}

TEST_CASE("gradient of the potential") {
  auto newton = PotentialSpec::newtonian();
  MassSystem two({1, 1});
  auto g = grad_potential(still(two, {{-0.5, 0}, {0.5, 0}}), two, newton);
  // U = -1/r grows toward the partner, so the force -dU/dr pulls the bodies together.
  CHECK(g[0].x == doctest::Approx(-1.0));
  CHECK(g[1].x == doctest::Approx(1.0));
  CHECK(std::abs(g[0].y) == 0.0);

  SUBCASE("alpha = -2 against finite differences") {
    MassSystem m({1, 2});
    PotentialSpec pot({{-2, 1}});
    auto s = still(m, {{-2.0 / 3, 0}, {1.0 / 3, 0}});
    auto grad = grad_potential(s, m, pot);
    auto fd = oracle::gradient_fd(bodies(s, m), {{-2, 1}}, 1e-6);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(grad[i].x == doctest::Approx(fd[i].first).epsilon(1e-6));
      CHECK(std::abs(grad[i].y - fd[i].second) <= 1e-6);
    }
  }

  SUBCASE("property: finite differences, translation and rotation invariance on 100 configurations") {
    Random rnd;
    const std::vector<std::pair<double, double>> terms{{-1, 1}, {-6, 0.5}, {2, 0.1}};
    std::vector<PotentialTerm> spec;
    for (auto [a, c] : terms) spec.push_back({a, c});
    PotentialSpec pot(spec);
    for (int k = 0; k < 100; ++k) {
      const std::size_t n = 2 + k % 4;
      std::vector<double> masses;
      for (std::size_t i = 0; i < n; ++i) masses.push_back(rnd.uniform(0.5, 3));
      MassSystem m(masses);
      auto s = still(m, rnd.points(n));
      const double h = 1e-6 * configuration_scale(s);
      auto grad = grad_potential(s, m, pot);
      auto fd = oracle::gradient_fd(bodies(s, m), terms, h);
      double gscale = 0, worst = 0;
      Vec2 total{};
      double torque = 0, tscale = 0;
      for (std::size_t i = 0; i < n; ++i) {
        gscale = std::max(gscale, norm(grad[i]));
        worst = std::max(worst, std::hypot(grad[i].x - fd[i].first, grad[i].y - fd[i].second));
        total += grad[i];
        torque += cross(s.positions()[i], grad[i]);
        tscale += norm(s.positions()[i]) * norm(grad[i]);
      }
      CHECK(worst <= 1e-6 * gscale);
      CHECK(norm(total) <= 1e-12 * gscale * n);
      CHECK(std::abs(torque) <= 1e-12 * tscale);
    }
  }
}

TEST_CASE("kinetic energy and moment of inertia") {
  MassSystem two({1, 1});
  CHECK(kinetic_energy(still(two, {{-1, 0}, {1, 0}}), two) == 0.0);
  PhaseState moving(two, {{-1, 0}, {1, 0}}, {{0, -1}, {0, 1}});
  CHECK(kinetic_energy(moving, two) == doctest::Approx(1.0));

  MassSystem three({1, 1, 1});
  auto line = still(three, {{-1, 0}, {0, 0}, {1, 0}});
  CHECK(moment_of_inertia(line, three) == doctest::Approx(2.0));
  CHECK(moment_of_inertia_from_distances(line, three) == doctest::Approx(2.0));
  CHECK(moment_of_inertia(still(two, {{-0.5, 0}, {0.5, 0}}), two) == doctest::Approx(0.5));

  SUBCASE("rigid rotation: T = I w^2 / 2") {
    MassSystem m({1, 2, 3});
    const double w = 0.7;
    std::vector<Vec2> r{{1, 0.3}, {-0.2, 0.8}, {0.1, -0.6}};
    PhaseState centred(m, r, std::vector<Vec2>(3));
    std::vector<Vec2> v;
    for (const auto& ri : centred.positions()) v.push_back(w * perp(ri));
    PhaseState s(m, centred.positions(), v);
    CHECK(kinetic_energy(s, m) == doctest::Approx(0.5 * moment_of_inertia(s, m) * w * w).epsilon(1e-14));
  }
  SUBCASE("property: both inertia formulas agree") {
    Random rnd;
    for (int k = 0; k < 100; ++k) {
      MassSystem m({rnd.uniform(0.1, 5), rnd.uniform(0.1, 5), rnd.uniform(0.1, 5), rnd.uniform(0.1, 5)});
      auto s = still(m, rnd.points(4, 3.0));
      const double i1 = moment_of_inertia(s, m), i2 = moment_of_inertia_from_distances(s, m);
      CHECK(std::abs(i1 - i2) <= 1e-12 * i1);
    }
  }
}

TEST_CASE("angular momentum, radial product and the Sundman gap") {
  MassSystem two({1, 1});
  CHECK(angular_momentum(still(two, {{-1, 0}, {1, 0}}), two).total == 0.0);
  auto circ = two_body_circular();
  auto am = angular_momentum(circ, two);
  CHECK(am.per_body[0] == doctest::Approx(0.25 * std::sqrt(2.0)));
  CHECK(am.per_body[1] == doctest::Approx(0.25 * std::sqrt(2.0)));
  CHECK(am.total == doctest::Approx(0.5 * std::sqrt(2.0)));
  CHECK(am.total == doctest::Approx(am.per_body[0] + am.per_body[1]));
  CHECK(radial_product(circ, two) == 0.0);
  CHECK(std::abs(sundman_gap(circ, two)) <= 1e-15);
  CHECK(omega_estimate(circ, two) == doctest::Approx(std::sqrt(2.0)));
  CHECK(sundman_gap(still(two, {{-1, 0}, {1, 0}}), two) == 0.0);

  SUBCASE("homothetic expansion: J = lambda I, K = 0") {
    MassSystem m({1, 2, 3});
    std::vector<Vec2> r{{1, 0.3}, {-0.2, 0.8}, {0.1, -0.6}};
    PhaseState centred(m, r, std::vector<Vec2>(3));
    std::vector<Vec2> v;
    for (const auto& ri : centred.positions()) v.push_back(0.4 * ri);
    PhaseState s(m, centred.positions(), v);
    CHECK(radial_product(s, m) == doctest::Approx(0.4 * moment_of_inertia(s, m)));
    CHECK(std::abs(omega_estimate(s, m)) <= 1e-15);
  }

  SUBCASE("radial product matches a direct sum") {
    Random rnd;
    MassSystem m({1, 2, 3});
    PhaseState s(m, rnd.points(3), rnd.points(3));
    double j = 0;
    for (const auto& b : bodies(s, m)) j += b.m * (b.x * b.vx + b.y * b.vy);
    CHECK(radial_product(s, m) == doctest::Approx(j).epsilon(1e-14));
  }

  SUBCASE("property: Sundman inequality on random states, strict off the equality cases") {
    Random rnd;
    for (int k = 0; k < 200; ++k) {
      MassSystem m({rnd.uniform(0.1, 5), rnd.uniform(0.1, 5), rnd.uniform(0.1, 5)});
      PhaseState s(m, rnd.points(3), rnd.points(3));
      const double kk = angular_momentum(s, m).total;
      const double gap = sundman_gap(s, m);
      CHECK(gap >= -1e-10 * std::max(1.0, kk * kk));
      CHECK(gap > 0);
    }
  }

  SUBCASE("omega needs a non-zero moment of inertia") {
    MassSystem m({1, 1});
    PhaseState collapsed(m, {{0, 0}, {0, 0}}, {{0, 0}, {0, 0}});
    CHECK_THROWS_AS(omega_estimate(collapsed, m), DegenerateConfigurationError);
  }
}

TEST_CASE("collinearity residual") {
  MassSystem three({1, 1, 1});
  CHECK(collinearity_residual(still(three, {{-1, 0}, {0.2, 0}, {0.8, 0}})) == 0.0);
  const double h = std::sqrt(3.0) / 2;
  auto triangle = still(three, {{0, 0}, {1, 0}, {0.5, h}});
  CHECK(collinearity_residual(triangle) >= 0.25);

  SUBCASE("rotation and scale invariance") {
    for (double angle : {0.3, 1.0, 2.5, -0.7}) {
      const Vec2 e{std::cos(angle), std::sin(angle)};
      auto rotated = still(three, {-1.3 * e, 0.1 * e, 2.0 * e});
      CHECK(collinearity_residual(rotated) <= 1e-15);
    }
    std::vector<Vec2> r{{0, 0}, {1, 0.2}, {2, -0.1}}, big;
    for (auto p : r) big.push_back(1e6 * p);
    CHECK(collinearity_residual(still(three, r)) == doctest::Approx(collinearity_residual(still(three, big))));
  }
}

TEST_CASE("omega on collinear rotating states matches every body") {
  MassSystem m({1, 2, 3});
  const double w = 1.3;
  PhaseState centred(m, {{-1, 0}, {0.3, 0}, {1.5, 0}}, std::vector<Vec2>(3));
  std::vector<Vec2> v;
  for (const auto& ri : centred.positions()) v.push_back(w * perp(ri));
  PhaseState s(m, centred.positions(), v);
  const auto am = angular_momentum(s, m);
  const double omega = omega_estimate(s, m);
  CHECK(omega == doctest::Approx(w).epsilon(1e-14));
  for (std::size_t i = 0; i < 3; ++i) {
    const double r2 = dot(s.positions()[i], s.positions()[i]);
    CHECK(std::abs(am.per_body[i] / (m[i] * r2) - omega) <= 1e-12 * omega);
  }
}

TEST_CASE("torque per body") {
  auto newton = PotentialSpec::newtonian();
  MassSystem three({1, 1, 1});
  for (double t : torque_per_body(still(three, {{-1, 0.5}, {0, 0.5}, {2, 0.5}}), three, newton)) CHECK(t == 0.0);
  const double h = std::sqrt(3.0) / 2;
  for (double t : torque_per_body(still(three, {{0, 0}, {1, 0}, {0.5, h}}), three, newton)) {
    CHECK(std::abs(t) <= 1e-14);
  }
  MassSystem scalene({1, 2, 3});
  auto torques = torque_per_body(still(scalene, {{0, 0}, {2, 0}, {0.4, 1.1}}), scalene, newton);
  double total = 0, largest = 0;
  for (double t : torques) {
    total += t;
    largest = std::max(largest, std::abs(t));
  }
  CHECK(largest > 1e-2);
  CHECK(std::abs(total) <= 1e-12 * largest);
}

TEST_CASE("diagnostics bundle") {
  MassSystem m({1, 2, 3});
  Random rnd;
  PhaseState s(m, rnd.points(3), rnd.points(3));
  const auto d = diagnose(s, m, PotentialSpec::newtonian());
  CHECK(d.energy == d.kinetic + d.potential);
  double k = 0;
  for (double ki : d.body_angular_momentum) k += ki;
  CHECK(d.angular_momentum == doctest::Approx(k));
  CHECK(d.sundman_gap == doctest::Approx(sundman_gap(s, m)));
  CHECK(d.omega == doctest::Approx(omega_estimate(s, m)));
}
