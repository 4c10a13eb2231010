// Copyright 2026 The gzonoid Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// One-dimensional numerical integration and scalar minimization.

#ifndef GZONOID_QUADRATURE_HPP
#define GZONOID_QUADRATURE_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>

#include "gzonoid/errors.hpp"

namespace gzonoid {

namespace detail {

template <class F>
double simpson_recurse(F& f, double a, double b, double fa, double fm,
                       double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b].
///
/// The interval is first cut into `panels` equal pieces so that narrow
/// features are sampled before refinement starts; `abs_tol` is shared
/// between the panels.
template <class F>
[[nodiscard]] double adaptive_simpson(F&& f, double a, double b,
                                      double abs_tol, int panels = 16,
                                      int max_depth = 40) {
  if (a == b) return 0.0;
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double total = 0.0;
  double fa = f(a);
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == panels) ? b : a + (i + 1) * h;
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    const double fb = f(hi);
    const double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    total += detail::simpson_recurse(f, lo, hi, fa, fm, fb, whole,
                                     abs_tol / panels, max_depth);
    fa = fb;
  }
  return total;
}

/// Two-pass adaptive Simpson with a relative tolerance: a coarse pass sizes
/// the absolute tolerance for the final pass.
template <class F>
[[nodiscard]] double adaptive_simpson_rel(F&& f, double a, double b,
                                          double rel_tol, int panels = 16) {
  const double rough = adaptive_simpson(f, a, b, 1e-3 * std::fabs(b - a),
                                        panels, 12);
  const double scale = std::fabs(rough) > 0.0 ? std::fabs(rough) : 1.0;
  return adaptive_simpson(f, a, b, rel_tol * scale, panels);
}

struct ScalarMinimum {
  double argmin = 0.0;
  double value = 0.0;
};

/// Golden-section search for a minimum of a unimodal f on [a, b]; stops when
/// the bracket is shorter than `tol`.
template <class F>
[[nodiscard]] ScalarMinimum golden_section_minimize(F&& f, double a, double b,
                                                    double tol) {
  if (!(tol > 0.0)) throw DomainError("golden_section_minimize: tol <= 0");
  constexpr double kInvPhi = 0.6180339887498948482;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendreRule {
  std::span<const double> nodes;
  std::span<const double> weights;
};

[[nodiscard]] inline GaussLegendreRule gauss_legendre(int order) {
  static constexpr std::array<double, 1> n1{0.0};
  static constexpr std::array<double, 1> w1{2.0};
  static constexpr std::array<double, 2> n2{-0.57735026918962576451,
                                            0.57735026918962576451};
  static constexpr std::array<double, 2> w2{1.0, 1.0};
  static constexpr std::array<double, 3> n3{-0.77459666924148337704, 0.0,
                                            0.77459666924148337704};
  static constexpr std::array<double, 3> w3{0.55555555555555555556,
                                            0.88888888888888888889,
                                            0.55555555555555555556};
  static constexpr std::array<double, 4> n4{
      -0.86113631159405257522, -0.33998104358485626480,
      0.33998104358485626480, 0.86113631159405257522};
  static constexpr std::array<double, 4> w4{
      0.34785484513745385737, 0.65214515486254614263, 0.65214515486254614263,
      0.34785484513745385737};
  static constexpr std::array<double, 5> n5{
      -0.90617984593866399280, -0.53846931010568309104, 0.0,
      0.53846931010568309104, 0.90617984593866399280};
  static constexpr std::array<double, 5> w5{
      0.23692688505618908751, 0.47862867049936646804, 0.56888888888888888889,
      0.47862867049936646804, 0.23692688505618908751};
  switch (order) {
    case 1: return {n1, w1};
    case 2: return {n2, w2};
    case 3: return {n3, w3};
    case 4: return {n4, w4};
    case 5: return {n5, w5};
    default:
      throw DomainError("gauss_legendre: order must be in [1, 5]");
  }
}

}  // namespace gzonoid

#endif  // GZONOID_QUADRATURE_HPP
