#pragma once

#include <Eigen/Core>

#include <vector>

namespace dgrod {

/// Jacobi polynomials P_0..P_n^{(alpha, 0)} at x, for any ring-like scalar T.
template <class T>
std::vector<T> jacobi_sequence(int n, double alpha, const T& x) {
  std::vector<T> p;
  p.reserve(static_cast<std::size_t>(n + 1));
  p.push_back(T(1.0));
  if (n == 0) return p;
  p.push_back(x * (0.5 * (alpha + 2.0)) + T(0.5 * alpha));
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 * i + alpha;
    const double a1 = 2.0 * (i + 1) * (i + alpha + 1) * s;
    const double a2 = (s + 1) * alpha * alpha;
    const double a3 = s * (s + 1) * (s + 2);
    const double a4 = 2.0 * (i + alpha) * i * (s + 2);
    p.push_back(((x * a3 + T(a2)) * p[i] - p[i - 1] * a4) * (1.0 / a1));
  }
  return p;
}

/// Dubiner orthogonal basis on the unit triangle {xi, eta >= 0, xi + eta <= 1},
/// ordered (i, j) with i + j <= N, i outer. Written without the collapsed
/// coordinate division, so it is a polynomial evaluation valid everywhere in
/// the plane (needed for extrapolation outside the element).
template <class T>
std::vector<T> dubiner_basis(int N, const T& xi, const T& eta) {
  // Biunit coordinates r = 2 xi - 1, s = 2 eta - 1; x = t a with
  // a the collapsed coordinate and t = (1 - s) / 2.
  const T x = xi * 2.0 + eta + T(-1.0);
  const T t = T(1.0) - eta;
  const T s = eta * 2.0 + T(-1.0);
  const T t2 = t * t;

  // Scaled Legendre q_i = t^i P_i(x / t).
  std::vector<T> q;
  q.reserve(static_cast<std::size_t>(N + 1));
  q.push_back(T(1.0));
  if (N >= 1) q.push_back(x);
  for (int n = 1; n < N; ++n)
    q.push_back((x * q[n] * (2.0 * n + 1.0) - t2 * q[n - 1] * static_cast<double>(n)) *
                (1.0 / (n + 1.0)));

  std::vector<T> out;
  out.reserve(static_cast<std::size_t>((N + 1) * (N + 2) / 2));
  for (int i = 0; i <= N; ++i) {
    const auto pj = jacobi_sequence(N - i, 2.0 * i + 1.0, s);
    for (int j = 0; j <= N - i; ++j) out.push_back(q[i] * pj[j]);
  }
  return out;
}

}  // namespace dgrod
