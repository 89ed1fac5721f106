#pragma once

// Linear algebra of Minkowski 3-space R^3_1 with the flat metric of
// signature (2,1):  <a,b> = a1*b1 + a2*b2 - a3*b3.
// Vectors with <x,x> > 0 are space-like, < 0 time-like, = 0 light-like.

#include <cmath>

namespace wsurf {

struct MinkowskiVec {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0;

  MinkowskiVec() = default;
  MinkowskiVec(double a, double b, double c) : x1(a), x2(b), x3(c) {}

  MinkowskiVec operator+(const MinkowskiVec& o) const {
    return {x1 + o.x1, x2 + o.x2, x3 + o.x3};
  }
  MinkowskiVec operator-(const MinkowskiVec& o) const {
    return {x1 - o.x1, x2 - o.x2, x3 - o.x3};
  }
  MinkowskiVec operator*(double s) const { return {x1 * s, x2 * s, x3 * s}; }
  friend MinkowskiVec operator*(double s, const MinkowskiVec& v) { return v * s; }
  MinkowskiVec operator/(double s) const { return {x1 / s, x2 / s, x3 / s}; }
  MinkowskiVec& operator+=(const MinkowskiVec& o) {
    x1 += o.x1;
    x2 += o.x2;
    x3 += o.x3;
    return *this;
  }
  MinkowskiVec operator-() const { return {-x1, -x2, -x3}; }
};

inline double minkowski_dot(const MinkowskiVec& a, const MinkowskiVec& b) {
  return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3;
}

// Lorentzian cross product: the unique vector with
// <cross_l(a,b), c> = -det[a; b; c] for all c (the sign is forced by the
// metric: raising the index of the determinant 1-form flips the time-like
// component).  For an orthonormal pair of space-like vectors X, Y it yields
// the time-like unit normal l that completes a positively oriented frame:
// cross_l(e1,e2) = e3 and det[X; Y; cross_l(X,Y)] = -<l,l> = +1.
inline MinkowskiVec cross_l(const MinkowskiVec& a, const MinkowskiVec& b) {
  return {a.x3 * b.x2 - a.x2 * b.x3,
          a.x1 * b.x3 - a.x3 * b.x1,
          a.x1 * b.x2 - a.x2 * b.x1};
}

inline double det3(const MinkowskiVec& a, const MinkowskiVec& b, const MinkowskiVec& c) {
  return a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - a.x2 * (b.x1 * c.x3 - b.x3 * c.x1) +
         a.x3 * (b.x1 * c.x2 - b.x2 * c.x1);
}

// Euclidean magnitude (used only for error reporting; the Minkowski norm is
// degenerate on light-like differences and unsuitable as an error metric).
inline double euclid_norm(const MinkowskiVec& v) {
  return std::sqrt(v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3);
}

}  // namespace wsurf
