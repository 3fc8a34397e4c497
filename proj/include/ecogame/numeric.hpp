#ifndef ECOGAME_NUMERIC_HPP
#define ECOGAME_NUMERIC_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ecogame/errors.hpp"

namespace ecogame {

using Matrix3 = std::array<std::array<double, 3>, 3>;
using Eigenvalues3 = std::array<std::complex<double>, 3>;

namespace detail {

inline double cubic_eval(double c2, double c1, double c0, double x) {
  return ((x + c2) * x + c1) * x + c0;
}

// Newton polish of a real root of x^3 + c2 x^2 + c1 x + c0.
inline double polish_cubic_root(double c2, double c1, double c0, double x) {
  for (int i = 0; i < 4; ++i) {
    const double f = cubic_eval(c2, c1, c0, x);
    const double df = (3.0 * x + 2.0 * c2) * x + c1;
    if (df == 0.0 || !std::isfinite(f)) break;
    const double next = x - f / df;
    if (!std::isfinite(next) || std::abs(cubic_eval(c2, c1, c0, next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

// Largest-magnitude real root of the monic cubic.
inline double dominant_real_root(double c2, double c1, double c0) {
  const double shift = c2 / 3.0;
  const double p = c1 - c2 * c2 / 3.0;
  const double q = 2.0 * c2 * c2 * c2 / 27.0 - c2 * c1 / 3.0 + c0;
  const double disc = q * q / 4.0 + p * p * p / 27.0;
  double best;
  if (disc > 0.0) {
    const double s = std::sqrt(disc);
    const double u = std::cbrt(-q / 2.0 + s);
    const double v = std::cbrt(-q / 2.0 - s);
    best = u + v - shift;
  } else if (p == 0.0) {
    best = std::cbrt(-q) - shift;
  } else {
    const double r = 2.0 * std::sqrt(-p / 3.0);
    const double arg = std::clamp(3.0 * q / (p * r), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    best = r * std::cos(phi) - shift;
    for (int k = 1; k < 3; ++k) {
      const double cand = r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0) - shift;
      if (std::abs(cand) > std::abs(best)) best = cand;
    }
  }
  return polish_cubic_root(c2, c1, c0, best);
}

inline void quadratic_roots(double q1, double q0, std::complex<double>& lo, std::complex<double>& hi) {
  const double disc = q1 * q1 - 4.0 * q0;
  if (disc >= 0.0) {
    const double t = -0.5 * (q1 + std::copysign(std::sqrt(disc), q1));
    lo = t;
    hi = t != 0.0 ? q0 / t : 0.0;
  } else {
    const double im = 0.5 * std::sqrt(-disc);
    lo = {-0.5 * q1, -im};
    hi = {-0.5 * q1, im};
  }
}

}  // namespace detail

/// Roots of x^3 + c2 x^2 + c1 x + c0: one real root by Cardano (or the
/// trigonometric form), Newton-polished, then the deflated quadratic.
inline Eigenvalues3 cubic_roots(double c2, double c1, double c0) {
  const double r = detail::dominant_real_root(c2, c1, c0);
  // Synthetic division by (x - r): x^2 + q1 x + q0.
  const double q1 = c2 + r;
  const double q0 = c1 + r * q1;
  Eigenvalues3 out;
  out[0] = r;
  detail::quadratic_roots(q1, q0, out[1], out[2]);
  return out;
}

/// Sort by real part, then imaginary part. Negative zeros become +0.
inline void sort_eigenvalues(Eigenvalues3& ev) {
  for (auto& e : ev) e = {e.real() + 0.0, e.imag() + 0.0};
  std::sort(ev.begin(), ev.end(), [](const auto& l, const auto& r) {
    return l.real() != r.real() ? l.real() < r.real() : l.imag() < r.imag();
  });
}

namespace detail {

// Index whose row or column is zero off the diagonal, or -1.
inline int decoupled_index(const Matrix3& j) {
  for (int i = 0; i < 3; ++i) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    if ((j[i][a] == 0.0 && j[i][b] == 0.0) || (j[a][i] == 0.0 && j[b][i] == 0.0)) return i;
  }
  return -1;
}

}  // namespace detail

/// Eigenvalues sorted by real part. A row or column that is zero off the
/// diagonal splits off an exact eigenvalue and a 2x2 block; otherwise the
/// characteristic cubic is solved.
inline Eigenvalues3 eigenvalues(const Matrix3& j) {
  if (const int i = detail::decoupled_index(j); i >= 0) {
    const int a = (i + 1) % 3, b = (i + 2) % 3;
    Eigenvalues3 ev;
    ev[0] = j[i][i];
    detail::quadratic_roots(-(j[a][a] + j[b][b]), j[a][a] * j[b][b] - j[a][b] * j[b][a], ev[1], ev[2]);
    sort_eigenvalues(ev);
    return ev;
  }
  const double tr = j[0][0] + j[1][1] + j[2][2];
  const double minors = (j[0][0] * j[1][1] - j[0][1] * j[1][0]) +
                        (j[0][0] * j[2][2] - j[0][2] * j[2][0]) +
                        (j[1][1] * j[2][2] - j[1][2] * j[2][1]);
  const double det = j[0][0] * (j[1][1] * j[2][2] - j[1][2] * j[2][1]) -
                     j[0][1] * (j[1][0] * j[2][2] - j[1][2] * j[2][0]) +
                     j[0][2] * (j[1][0] * j[2][1] - j[1][1] * j[2][0]);
  auto ev = cubic_roots(-tr, minors, -det);
  sort_eigenvalues(ev);
  return ev;
}

/// `count` evenly spaced points on [lo, hi]; count == 1 yields {lo}.
inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  out.reserve(count);
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(i + 1 == count ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  return out;
}

struct ScalarOptimum {
  double x = 0.0;
  double value = 0.0;
};

/// Golden-section maximization of a unimodal `f` on [lo, hi].
template <typename F>
ScalarOptimum golden_section_maximize(F&& f, double lo, double hi, double x_tol = 1e-12,
                                      int max_iter = 200) {
  if (!(lo <= hi)) throw InvalidParameter("golden section: empty bracket");
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iter && (b - a) > x_tol; ++i) {
    if (fc < fd) {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    } else {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace ecogame

#endif  // ECOGAME_NUMERIC_HPP
