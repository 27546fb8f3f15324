#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "anholo/numerics.hpp"

namespace anholo::testing {

inline CMatrix random_hermitian(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  CMatrix h(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    h(i, i) = g(rng);
    for (std::size_t j = i + 1; j < n; ++j) {
      h(i, j) = Complex(g(rng), g(rng));
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

inline CVector random_state(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CVector v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex(g(rng), g(rng));
  return v.normalized();
}

/// exp(-i H t) by scaled Taylor series with repeated squaring; independent of
/// the eigensolver.
inline CMatrix taylor_exp(const CMatrix& h, double t) {
  const std::size_t n = h.rows();
  int squarings = 0;
  double norm = h.max_abs() * static_cast<double>(n) * std::abs(t);
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const Complex step(0.0, -t / std::pow(2.0, squarings));
  CMatrix a = step * h;
  CMatrix result = CMatrix::identity(n);
  CMatrix term = CMatrix::identity(n);
  for (int k = 1; k < 30; ++k) {
    term = (1.0 / k) * (term * a);
    result += term;
  }
  for (int s = 0; s < squarings; ++s) result = result * result;
  return result;
}

/// Real roots of the characteristic polynomial of a Hermitian matrix with
/// dim <= 3, ascending.
inline std::vector<double> char_poly_roots(const CMatrix& h) {
  const std::size_t n = h.rows();
  if (n == 1) return {h(0, 0).real()};
  if (n == 2) {
    const double a = h(0, 0).real(), d = h(1, 1).real();
    const double r = std::sqrt(0.25 * (a - d) * (a - d) + std::norm(h(0, 1)));
    return {0.5 * (a + d) - r, 0.5 * (a + d) + r};
  }
  // Trigonometric solution of the depressed cubic.
  const double q = h.trace().real() / 3.0;
  CMatrix shifted = h;
  for (std::size_t i = 0; i < 3; ++i) shifted(i, i) -= q;
  double p2 = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) p2 += std::norm(shifted(i, j));
  const double p = std::sqrt(p2 / 6.0);
  const CMatrix b = (1.0 / p) * shifted;
  const Complex det = b(0, 0) * (b(1, 1) * b(2, 2) - b(1, 2) * b(2, 1)) -
                      b(0, 1) * (b(1, 0) * b(2, 2) - b(1, 2) * b(2, 0)) +
                      b(0, 2) * (b(1, 0) * b(2, 1) - b(1, 1) * b(2, 0));
  const double r = std::clamp(det.real() / 2.0, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  std::vector<double> out{q + 2.0 * p * std::cos(phi), q + 2.0 * p * std::cos(phi + 2.0 * kPi / 3.0),
                          q + 2.0 * p * std::cos(phi + 4.0 * kPi / 3.0)};
  std::sort(out.begin(), out.end());
  return out;
}

/// Eigenangles of a 2x2 unitary from trace and determinant, sorted in [0, 2pi).
inline std::vector<double> unitary2_angles(const CMatrix& u) {
  const Complex tr = u(0, 0) + u(1, 1);
  const Complex det = u(0, 0) * u(1, 1) - u(0, 1) * u(1, 0);
  const Complex disc = std::sqrt(tr * tr - 4.0 * det);
  std::vector<double> out;
  for (Complex lam : {(tr + disc) / 2.0, (tr - disc) / 2.0}) out.push_back(wrap_angle(-std::arg(lam)));
  std::sort(out.begin(), out.end());
  return out;
}

/// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(y.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxy / sxx;
}

}  // namespace anholo::testing
