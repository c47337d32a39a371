#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "collinear/central_config.hpp"
#include "collinear/errors.hpp"
#include "collinear/model.hpp"

namespace collinear {

// Number of mutual distances n(n-1)/2. Throws std::domain_error for n < 2.
std::uint64_t count_distances(std::int64_t n);
// Number of linear relations among the distances of a collinear configuration,
// n(n-1)/2 - (n-1). Throws std::domain_error for n < 2.
std::uint64_t count_relations(std::int64_t n);

// Three bodies in the given order along a line: a is the gap between the first
// two, b between the last two, and the outer distance is a + b.
using Ordering3 = std::array<std::size_t, 3>;

struct LevelValues {
  double potential;
  double inertia;
};

LevelValues level_values(double a, double b, const MassSystem& masses, const PotentialSpec& pot,
                         const Ordering3& ordering = {0, 1, 2});

struct DomainBox {
  double a_min, a_max, b_min, b_max;
  void validate() const;
};

// [1e-3, 1e3]^2 times the given length.
DomainBox default_box(double length);

struct PlanePoint {
  double a, b;
};

struct IntersectionResult {
  std::vector<PlanePoint> points;
  std::size_t count = 0;
  bool tangency_flag = false;
  // Angle between grad U and grad I at each point, folded into [0, pi/2].
  std::vector<double> gradient_angles;
};

// Scanning the curve at resolution N and 2N gave different counts.
class ResolutionError : public Error {
 public:
  ResolutionError(std::size_t coarse, std::size_t fine);
};

// Points of {U = c_U} on the arc {I = c_I} of the ordering plane inside box.
// The arc is parameterized by log(b/a) and scanned at `resolution` samples;
// sign changes of U - c_U and near-zero extrema (touching points) are polished
// by bisection and deduplicated within 1e-8.
IntersectionResult intersect_levels(double c_U, double c_I, const MassSystem& masses, const PotentialSpec& pot,
                                    const Ordering3& ordering, const DomainBox& box, std::size_t resolution = 256);

// Level values of cc followed by intersect_levels on its ordering plane.
IntersectionResult tangency_at_cc(const CollinearConfiguration& cc, const MassSystem& masses,
                                  const PotentialSpec& pot, std::size_t resolution = 256);

struct CurveSample {
  double a, b, potential, inertia;
};

// The arc {I = c_I} inside box at `resolution` samples, for plotting.
std::vector<CurveSample> level_curve(double c_I, const MassSystem& masses, const PotentialSpec& pot,
                                     const Ordering3& ordering, const DomainBox& box, std::size_t resolution);

}  // namespace collinear
