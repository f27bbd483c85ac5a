#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <queue>
#include <string>
#include <vector>

#include "incomedist/errors.hpp"

namespace incomedist {

namespace detail {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double lo, hi, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk15(F& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  return {lo, hi, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
};

/// Globally adaptive Gauss-Kronrod (G7/K15) on [lo, hi]: the panel with the
/// largest error estimate is bisected until the summed estimate is below
/// max(abs_tol, rel_tol * |value|). Throws NumericError with the tolerance
/// reached when `max_panels` is exhausted.
template <class F>
QuadResult integrate_gk(F&& f, double lo, double hi, double rel_tol, double abs_tol = 0.0,
                        std::size_t max_panels = 2000) {
  if (!(hi > lo)) return {};
  std::priority_queue<detail::Panel> panels;
  panels.push(detail::gk15(f, lo, hi));
  double value = panels.top().value;
  double error = panels.top().error;
  while (error > abs_tol && error > rel_tol * std::abs(value)) {
    if (!std::isfinite(value)) break;
    if (panels.size() >= max_panels) {
      throw NumericError("quadrature did not converge on [" + detail::sci(lo) + ", " +
                         detail::sci(hi) + "]: achieved relative error " +
                         detail::sci(error / std::abs(value)) + ", requested " +
                         detail::sci(rel_tol));
    }
    const auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = detail::gk15(f, worst.lo, mid);
    const auto right = detail::gk15(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    if (mid <= worst.lo || mid >= worst.hi) break;  // interval exhausted in floating point
  }
  if (!std::isfinite(value)) {
    throw NumericError("quadrature produced a non-finite value on [" + detail::sci(lo) + ", " +
                       detail::sci(hi) + "]");
  }
  return {value, error};
}

/// Strictly increasing nodes lo = x_0 < ... < x_{n-1} = hi, log-spaced in the
/// offset (x - lo) starting from `first_offset`. Extra breakpoints inside
/// (lo, hi) are merged in.
std::vector<double> offset_log_partition(double lo, double hi, double first_offset, std::size_t n,
                                         const std::vector<double>& breakpoints = {});

}  // namespace incomedist
