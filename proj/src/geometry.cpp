#include "collinear/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kernels.hpp"

namespace collinear {

namespace {

constexpr std::int64_t kLargestCount = 3037000499;  // keeps n(n-1)/2 within 64 bits

void check_count_argument(std::int64_t n) {
  if (n < 2) throw std::domain_error("need at least two bodies, got n = " + std::to_string(n));
  if (n > kLargestCount) throw std::domain_error("n too large for 64-bit counts");
}

}  // namespace

std::uint64_t count_distances(std::int64_t n) {
  check_count_argument(n);
  const auto u = static_cast<std::uint64_t>(n);
  return u * (u - 1) / 2;
}

std::uint64_t count_relations(std::int64_t n) {
  check_count_argument(n);
  return count_distances(n) - static_cast<std::uint64_t>(n - 1);
}

void DomainBox::validate() const {
  const bool ok = a_min > 0 && b_min > 0 && a_min < a_max && b_min < b_max && std::isfinite(a_max) &&
                  std::isfinite(b_max);
  if (!ok) throw std::invalid_argument("domain box must be a non-empty box in the open positive quadrant");
}

DomainBox default_box(double length) {
  if (!(length > 0) || !std::isfinite(length)) throw std::invalid_argument("box length must be positive");
  return {1e-3 * length, 1e3 * length, 1e-3 * length, 1e3 * length};
}

ResolutionError::ResolutionError(std::size_t coarse, std::size_t fine)
    : Error("intersection count changed from " + std::to_string(coarse) + " to " + std::to_string(fine) +
            " when the scan resolution was doubled") {}

namespace {

// The ordering plane of three bodies with slot masses m0, m1, m2.
class Plane {
 public:
  Plane(const MassSystem& masses, const PotentialSpec& pot, const Ordering3& ordering) : pot_(pot) {
    if (masses.size() != 3) throw std::invalid_argument("ordering planes need exactly three bodies");
    std::array<bool, 3> seen{};
    for (auto b : ordering) {
      if (b >= 3 || seen[b]) throw std::invalid_argument("ordering must be a permutation of 0, 1, 2");
      seen[b] = true;
    }
    const double m0 = masses[ordering[0]], m1 = masses[ordering[1]], m2 = masses[ordering[2]];
    p_ = m0 * m1;
    q_ = m1 * m2;
    r_ = m0 * m2;
    total_ = masses.total_mass();
  }

  double potential(double a, double b) const {
    return p_ * detail::pair_energy(pot_, a) + q_ * detail::pair_energy(pot_, b) +
           r_ * detail::pair_energy(pot_, a + b);
  }

  std::array<double, 2> potential_gradient(double a, double b) const {
    const double outer = r_ * detail::pair_energy_d1(pot_, a + b);
    return {p_ * detail::pair_energy_d1(pot_, a) + outer, q_ * detail::pair_energy_d1(pot_, b) + outer};
  }

  // I in terms of the mutual distances.
  double inertia(double a, double b) const { return (p_ * a * a + q_ * b * b + r_ * (a + b) * (a + b)) / total_; }

  std::array<double, 2> inertia_gradient(double a, double b) const {
    return {2 * (p_ * a + r_ * (a + b)) / total_, 2 * (q_ * b + r_ * (a + b)) / total_};
  }

 private:
  const PotentialSpec& pot_;
  double p_, q_, r_, total_;
};

// The arc I(a, b) = c with b / a = e^t.
class Arc {
 public:
  Arc(const Plane& plane, double c_U, double c_I, const DomainBox& box)
      : plane_(plane), c_U_(c_U), c_I_(c_I), box_(box) {}

  PlanePoint point(double t) const {
    const double a = std::sqrt(c_I_ / plane_.inertia(1.0, std::exp(t)));
    return {a, a * std::exp(t)};
  }

  bool inside(const PlanePoint& p) const {
    const double slack = 1e-12;
    return p.a >= box_.a_min * (1 - slack) && p.a <= box_.a_max * (1 + slack) && p.b >= box_.b_min * (1 - slack) &&
           p.b <= box_.b_max * (1 + slack);
  }

  double value(double t) const {
    const auto p = point(t);
    return plane_.potential(p.a, p.b) - c_U_;
  }

  // d/dt of value, through the chain rule along the arc.
  double slope(double t) const {
    const auto p = point(t);
    const double e = std::exp(t);
    const auto gi = plane_.inertia_gradient(1.0, e);
    const double q_t = gi[1] * e;  // d/dt I(1, e^t)
    const double da = -0.5 * p.a * q_t / plane_.inertia(1.0, e);
    const double db = da * e + p.b;
    const auto gu = plane_.potential_gradient(p.a, p.b);
    return gu[0] * da + gu[1] * db;
  }

  double t_min() const { return std::log(box_.b_min / box_.a_max); }
  double t_max() const { return std::log(box_.b_max / box_.a_min); }

 private:
  const Plane& plane_;
  double c_U_, c_I_;
  DomainBox box_;
};

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double gradient_angle(const Plane& plane, const PlanePoint& p) {
  const auto gu = plane.potential_gradient(p.a, p.b);
  const auto gi = plane.inertia_gradient(p.a, p.b);
  const double cross = gu[0] * gi[1] - gu[1] * gi[0];
  const double dot = gu[0] * gi[0] + gu[1] * gi[1];
  const double angle = std::atan2(std::abs(cross), dot);
  return std::min(angle, std::numbers::pi - angle);
}

constexpr double kTouchTolerance = 1e-10;  // |U - c_U| / max(1, |c_U|) at a touching point
constexpr double kDedup = 1e-8;
constexpr double kParallel = 1e-6;

std::vector<double> scan(const Arc& arc, double c_U, std::size_t resolution) {
  const double lo = arc.t_min(), hi = arc.t_max();
  std::vector<double> ts(resolution), fs(resolution), gs(resolution);
  std::vector<bool> valid(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    ts[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(resolution - 1);
    valid[k] = arc.inside(arc.point(ts[k]));
    if (valid[k]) {
      fs[k] = arc.value(ts[k]);
      gs[k] = arc.slope(ts[k]);
    }
  }
  const double tol_f = kTouchTolerance * std::max(1.0, std::abs(c_U));
  auto value = [&](double t) { return arc.value(t); };
  auto slope = [&](double t) { return arc.slope(t); };

  std::vector<double> crossings, touches;
  for (std::size_t k = 0; k + 1 < resolution; ++k) {
    if (!valid[k] || !valid[k + 1]) continue;
    if (fs[k] == 0) {
      crossings.push_back(ts[k]);
    } else if (fs[k + 1] != 0 && (fs[k] < 0) != (fs[k + 1] < 0)) {
      crossings.push_back(bisect(value, ts[k], ts[k + 1]));
    }
    if (gs[k] != 0 && gs[k + 1] != 0 && (gs[k] < 0) != (gs[k + 1] < 0)) {
      const double t = bisect(slope, ts[k], ts[k + 1]);
      if (std::abs(arc.value(t)) <= tol_f) touches.push_back(t);
    }
  }
  if (valid.back() && fs.back() == 0) crossings.push_back(ts.back());

  // Crossings that lie within the touching window of an extremum are the same
  // point seen through roundoff.
  std::vector<double> roots = touches;
  for (double t : crossings) {
    bool merged = false;
    for (double t0 : touches) {
      const double h = 1e-5 * std::max(1.0, std::abs(t0));
      const double curvature = std::abs(arc.slope(t0 + h) - arc.slope(t0 - h)) / (2 * h);
      const double window = curvature > 0 ? 2 * std::sqrt(2 * tol_f / curvature) : 0.0;
      if (std::abs(t - t0) <= window + kDedup) merged = true;
    }
    if (!merged) roots.push_back(t);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

IntersectionResult collect(const Arc& arc, const Plane& plane, const std::vector<double>& roots) {
  IntersectionResult out;
  for (double t : roots) {
    const PlanePoint p = arc.point(t);
    if (!arc.inside(p)) continue;
    const bool duplicate = std::any_of(out.points.begin(), out.points.end(), [&](const PlanePoint& q) {
      return std::hypot(p.a - q.a, p.b - q.b) <= kDedup * std::max(1.0, p.a + p.b);
    });
    if (duplicate) continue;
    out.points.push_back(p);
    out.gradient_angles.push_back(gradient_angle(plane, p));
  }
  out.count = out.points.size();
  out.tangency_flag = out.count == 1 && out.gradient_angles.front() <= kParallel;
  return out;
}

}  // namespace

LevelValues level_values(double a, double b, const MassSystem& masses, const PotentialSpec& pot,
                         const Ordering3& ordering) {
  if (!(a > 0) || !(b > 0)) throw std::invalid_argument("ordering-plane coordinates must be positive");
  const Plane plane(masses, pot, ordering);
  return {plane.potential(a, b), plane.inertia(a, b)};
}

IntersectionResult intersect_levels(double c_U, double c_I, const MassSystem& masses, const PotentialSpec& pot,
                                    const Ordering3& ordering, const DomainBox& box, std::size_t resolution) {
  box.validate();
  if (resolution < 64) throw std::invalid_argument("resolution must be at least 64");
  if (!std::isfinite(c_U) || !std::isfinite(c_I)) throw std::invalid_argument("level values must be finite");
  const Plane plane(masses, pot, ordering);
  if (!(c_I > 0)) return {};
  const Arc arc(plane, c_U, c_I, box);
  const auto coarse = collect(arc, plane, scan(arc, c_U, resolution));
  const auto fine = collect(arc, plane, scan(arc, c_U, 2 * resolution));
  if (coarse.count != fine.count) throw ResolutionError(coarse.count, fine.count);
  return coarse;
}

IntersectionResult tangency_at_cc(const CollinearConfiguration& cc, const MassSystem& masses,
                                  const PotentialSpec& pot, std::size_t resolution) {
  if (masses.size() != 3 || cc.ordering.size() != 3 || cc.gaps.size() != 2) {
    throw std::invalid_argument("tangency analysis needs a three-body configuration");
  }
  const Ordering3 ordering{cc.ordering[0], cc.ordering[1], cc.ordering[2]};
  const auto levels = level_values(cc.gaps[0], cc.gaps[1], masses, pot, ordering);
  const double length = std::sqrt(cc.gaps[0] * cc.gaps[1]);
  return intersect_levels(levels.potential, levels.inertia, masses, pot, ordering, default_box(length), resolution);
}

std::vector<CurveSample> level_curve(double c_I, const MassSystem& masses, const PotentialSpec& pot,
                                     const Ordering3& ordering, const DomainBox& box, std::size_t resolution) {
  box.validate();
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  if (!(c_I > 0)) throw std::invalid_argument("inertia level must be positive");
  const Plane plane(masses, pot, ordering);
  const Arc arc(plane, 0.0, c_I, box);
  std::vector<CurveSample> out;
  for (std::size_t k = 0; k < resolution; ++k) {
    const double t = arc.t_min() + (arc.t_max() - arc.t_min()) * static_cast<double>(k) /
                                       static_cast<double>(resolution - 1);
    const auto p = arc.point(t);
    if (!arc.inside(p)) continue;
    out.push_back({p.a, p.b, plane.potential(p.a, p.b), plane.inertia(p.a, p.b)});
  }
  return out;
}

}  // namespace collinear
