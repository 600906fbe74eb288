#pragma once

#include <array>
#include <cmath>
#include <limits>

namespace semicouple::numerics {

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <typename F>
void kronrod15(const F& f, double a, double b, double& kronrod, double& error) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  kronrod = resk * half;
  error = std::abs((resk - resg) * half);
}

template <typename F>
double adapt(const F& f, double a, double b, double whole, double err, double tol, int depth) {
  if (err <= tol || depth <= 0 || b - a <= 4 * std::numeric_limits<double>::epsilon() * std::abs(a + b)) {
    return whole;
  }
  const double mid = 0.5 * (a + b);
  double left, left_err, right, right_err;
  kronrod15(f, a, mid, left, left_err);
  kronrod15(f, mid, b, right, right_err);
  return adapt(f, a, mid, left, left_err, 0.5 * tol, depth - 1) +
         adapt(f, mid, b, right, right_err, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Gauss-Kronrod quadrature of f over [a, b]. The local error target is
// max(abs_tol, rel_tol * |estimate|), split in half at every bisection.
template <typename F>
double integrate(const F& f, double a, double b, double rel_tol = 1e-12, double abs_tol = 0.0,
                 int max_depth = 40) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, rel_tol, abs_tol, max_depth);
  double whole, err;
  detail::kronrod15(f, a, b, whole, err);
  const double tol = std::max(abs_tol, rel_tol * std::abs(whole));
  return detail::adapt(f, a, b, whole, err, tol, max_depth);
}

}  // namespace semicouple::numerics
