#pragma once

#include <cmath>

namespace collinear {

// Planar vector. Templated so the integrator can run in extended precision.
template <class Real>
struct BasicVec2 {
  Real x{0};
  Real y{0};

  constexpr BasicVec2& operator+=(const BasicVec2& o) {
    x += o.x;
    y += o.y;
    return *this;
  }
  constexpr BasicVec2& operator-=(const BasicVec2& o) {
    x -= o.x;
    y -= o.y;
    return *this;
  }
  constexpr BasicVec2& operator*=(const Real& s) {
    x *= s;
    y *= s;
    return *this;
  }

  friend constexpr BasicVec2 operator+(BasicVec2 a, const BasicVec2& b) { return a += b; }
  friend constexpr BasicVec2 operator-(BasicVec2 a, const BasicVec2& b) { return a -= b; }
  friend constexpr BasicVec2 operator-(const BasicVec2& a) { return {-a.x, -a.y}; }
  friend constexpr BasicVec2 operator*(BasicVec2 a, const Real& s) { return a *= s; }
  friend constexpr BasicVec2 operator*(const Real& s, BasicVec2 a) { return a *= s; }
  friend constexpr bool operator==(const BasicVec2&, const BasicVec2&) = default;
};

template <class Real>
constexpr Real dot(const BasicVec2<Real>& a, const BasicVec2<Real>& b) {
  return a.x * b.x + a.y * b.y;
}

// z-component of the planar cross product.
template <class Real>
constexpr Real cross(const BasicVec2<Real>& a, const BasicVec2<Real>& b) {
  return a.x * b.y - a.y * b.x;
}

template <class Real>
Real norm(const BasicVec2<Real>& a) {
  using std::sqrt;
  return sqrt(dot(a, a));
}

// z-hat cross a: rotation by +90 degrees.
template <class Real>
constexpr BasicVec2<Real> perp(const BasicVec2<Real>& a) {
  return {-a.y, a.x};
}

using Vec2 = BasicVec2<double>;

}  // namespace collinear
