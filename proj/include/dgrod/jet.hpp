#pragma once

#include <Eigen/Core>

namespace dgrod {

/// Second-order forward-mode scalar in two variables: value, gradient and the
/// Hessian entries (xx, xy, yy). Polynomial recurrences evaluated on Jet2
/// produce exact derivatives alongside the value.
template <class Scalar>
struct Jet2 {
  Scalar v{0};
  Eigen::Matrix<Scalar, 2, 1> g = Eigen::Matrix<Scalar, 2, 1>::Zero();
  Eigen::Matrix<Scalar, 3, 1> h = Eigen::Matrix<Scalar, 3, 1>::Zero();

  Jet2() = default;
  Jet2(Scalar value) : v(value) {}  // NOLINT(google-explicit-constructor)

  static Jet2 variable(Scalar value, int index) {
    Jet2 j(value);
    j.g[index] = Scalar(1);
    return j;
  }

  Jet2& operator+=(const Jet2& o) {
    v += o.v;
    g += o.g;
    h += o.h;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    v -= o.v;
    g -= o.g;
    h -= o.h;
    return *this;
  }
  Jet2& operator*=(Scalar s) {
    v *= s;
    g *= s;
    h *= s;
    return *this;
  }
};

template <class S>
Jet2<S> operator+(Jet2<S> a, const Jet2<S>& b) { return a += b; }
template <class S>
Jet2<S> operator-(Jet2<S> a, const Jet2<S>& b) { return a -= b; }
template <class S>
Jet2<S> operator*(Jet2<S> a, S s) { return a *= s; }
template <class S>
Jet2<S> operator*(S s, Jet2<S> a) { return a *= s; }
template <class S>
Jet2<S> operator+(Jet2<S> a, S s) {
  a.v += s;
  return a;
}
template <class S>
Jet2<S> operator-(Jet2<S> a) { return a *= S(-1); }

template <class S>
Jet2<S> operator*(const Jet2<S>& a, const Jet2<S>& b) {
  Jet2<S> r;
  r.v = a.v * b.v;
  r.g = a.v * b.g + b.v * a.g;
  r.h[0] = a.v * b.h[0] + b.v * a.h[0] + S(2) * a.g[0] * b.g[0];
  r.h[1] = a.v * b.h[1] + b.v * a.h[1] + a.g[0] * b.g[1] + a.g[1] * b.g[0];
  r.h[2] = a.v * b.h[2] + b.v * a.h[2] + S(2) * a.g[1] * b.g[1];
  return r;
}

}  // namespace dgrod
