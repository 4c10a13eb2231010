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

// Scalar special functions and the one-dimensional kernels used by the
// Gaussian-zonoid geometry: error function and its inverse, the folded
// normal first moment, lambda, phi_inf, rho and unit-ball volumes.
//
// Everything here is pure and reentrant.

#ifndef GZONOID_SCALAR_KERNELS_HPP
#define GZONOID_SCALAR_KERNELS_HPP

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gzonoid/errors.hpp"

namespace gzonoid {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrtPi = 1.7724538509055160273;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
inline constexpr double kSqrt2Pi = 2.5066282746310005024;      // sqrt(2 pi)
inline constexpr double kSqrtPiOver2 = 1.2533141373155002512;  // sqrt(pi/2)
inline constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

namespace detail {

inline void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

}  // namespace detail

/// Error function, 2/sqrt(pi) * int_0^t exp(-s^2) ds.
[[nodiscard]] inline double erf(double t) {
  detail::require_finite(t, "erf");
  return std::erf(t);
}

/// Inverse of erf on (-1, 1).
///
/// A rational initial guess (Giles' single precision approximation) is
/// polished with safeguarded Newton steps. For |p| > 1/2 the iteration is
/// carried out on erfc so that the tail keeps full relative accuracy.
[[nodiscard]] inline double erf_inv(double p) {
  detail::require_finite(p, "erf_inv");
  if (!(std::fabs(p) < 1.0)) {
    throw DomainError("erf_inv: |p| must be < 1");
  }
  if (p == 0.0) return 0.0;
  const double sign = p < 0.0 ? -1.0 : 1.0;
  const double a = std::fabs(p);

  double x;
  {
    double w = -std::log((1.0 - a) * (1.0 + a));
    if (w < 5.0) {
      w -= 2.5;
      double q = 2.81022636e-08;
      q = 3.43273939e-07 + q * w;
      q = -3.5233877e-06 + q * w;
      q = -4.39150654e-06 + q * w;
      q = 0.00021858087 + q * w;
      q = -0.00125372503 + q * w;
      q = -0.00417768164 + q * w;
      q = 0.246640727 + q * w;
      q = 1.50140941 + q * w;
      x = q * a;
    } else {
      w = std::sqrt(w) - 3.0;
      double q = -0.000200214257;
      q = 0.000100950558 + q * w;
      q = 0.00134934322 + q * w;
      q = -0.00367342844 + q * w;
      q = 0.00573950773 + q * w;
      q = -0.0076224613 + q * w;
      q = 0.00943887047 + q * w;
      q = 1.00167406 + q * w;
      q = 2.83297682 + q * w;
      x = q * a;
    }
  }

  // Root of r(x) = erf(x) - a (or erfc(x) - (1 - a) in the tail), bracketed
  // in [0, 6.5]; 1 - a is exact for a in [1/2, 1).
  const bool tail = a > 0.5;
  const double target = tail ? 1.0 - a : a;
  auto residual = [&](double v) {
    return tail ? target - std::erfc(v) : std::erf(v) - target;
  };
  double lo = 0.0;
  double hi = 6.5;
  for (int it = 0; it < 100; ++it) {
    const double r = residual(x);
    if (r == 0.0) break;
    if (r < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    const double slope = 2.0 / kSqrtPi * std::exp(-x * x);
    double next = x - r / slope;
    if (!(next > lo && next < hi) || slope == 0.0) {
      next = 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) <= 1e-16 * std::max(1.0, std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return sign * x;
}

/// Parameters of a one-dimensional Gaussian N(mu, sigma^2).
struct FoldedMomentParams {
  double mu = 0.0;
  double sigma = 1.0;
};

/// E|gamma| for gamma ~ N(mu, sigma^2):
/// sigma sqrt(2/pi) exp(-mu^2 / 2 sigma^2) + mu erf(mu / sqrt(2 sigma^2)).
[[nodiscard]] inline double folded_abs_moment(FoldedMomentParams params) {
  detail::require_finite(params.mu, "folded_abs_moment");
  detail::require_finite(params.sigma, "folded_abs_moment");
  if (!(params.sigma > 0.0)) {
    throw DomainError("folded_abs_moment: sigma must be > 0");
  }
  const double z = params.mu / params.sigma;
  return params.sigma * kSqrt2OverPi * std::exp(-0.5 * z * z) +
         params.mu * std::erf(z / kSqrt2);
}

/// Value and partial derivatives of F(mu, sigma) = E|N(mu, sigma^2)|.
///
/// sigma = 0 is allowed and gives F = |mu| (the degenerate law). The
/// second derivatives are only meaningful for sigma > 0.
struct FoldedMomentJet {
  double value = 0.0;
  double d_mu = 0.0;
  double d_sigma = 0.0;
  double d_mu_mu = 0.0;
  double d_mu_sigma = 0.0;
  double d_sigma_sigma = 0.0;
};

[[nodiscard]] inline FoldedMomentJet folded_abs_moment_jet(double mu,
                                                           double sigma) {
  FoldedMomentJet j;
  if (sigma <= 0.0) {
    j.value = std::fabs(mu);
    j.d_mu = mu > 0.0 ? 1.0 : (mu < 0.0 ? -1.0 : 0.0);
    j.d_sigma = mu == 0.0 ? kSqrt2OverPi : 0.0;
    return j;
  }
  const double z = mu / sigma;
  const double g = kSqrt2OverPi * std::exp(-0.5 * z * z);
  j.value = sigma * g + mu * std::erf(z / kSqrt2);
  j.d_mu = std::erf(z / kSqrt2);
  j.d_sigma = g;
  j.d_mu_mu = g / sigma;
  j.d_mu_sigma = -z * g / sigma;
  j.d_sigma_sigma = z * z * g / sigma;
  return j;
}

/// lambda(s) = exp(-s^2/2) + sqrt(pi/2) s erf(s/sqrt 2): the axial stretch of
/// the outer ellipsoid of G(c) with |c| = s.
[[nodiscard]] inline double lambda(double s) {
  detail::require_finite(s, "lambda");
  return std::exp(-0.5 * s * s) + kSqrtPiOver2 * s * std::erf(s / kSqrt2);
}

[[nodiscard]] inline double lambda_prime(double s) {
  detail::require_finite(s, "lambda_prime");
  return kSqrtPiOver2 * std::erf(s / kSqrt2);
}

/// phi_inf(x, z) = |z| exp(-x^2 / (pi z^2)) + x erf(x / (sqrt(pi) |z|)),
/// extended by continuity with phi_inf(x, 0) = |x|.
[[nodiscard]] inline double phi_inf(double x, double z) {
  detail::require_finite(x, "phi_inf");
  detail::require_finite(z, "phi_inf");
  const double az = std::fabs(z);
  if (az < 1e-300 * std::fabs(x) || (az == 0.0 && x == 0.0)) {
    return std::fabs(x);
  }
  const double w = x / (kSqrtPi * az);
  return az * std::exp(-w * w) + x * std::erf(w);
}

/// rho(t) = t erf'(t) / erf(t), strictly decreasing on t > 0 with rho(0+) = 1.
[[nodiscard]] inline double rho(double t) {
  detail::require_finite(t, "rho");
  if (!(t > 0.0)) {
    throw DomainError("rho: t must be > 0");
  }
  if (t < 1e-4) {
    // erf(t) = 2/sqrt(pi) (t - t^3/3 + t^5/10 - ...)
    const double t2 = t * t;
    return std::exp(-t2) / (1.0 - t2 / 3.0 + t2 * t2 / 10.0);
  }
  return 2.0 / kSqrtPi * t * std::exp(-t * t) / std::erf(t);
}

/// Volume of the m-dimensional unit ball, pi^{m/2} / Gamma(m/2 + 1).
[[nodiscard]] inline double kappa(int m) {
  if (m < 0) throw DomainError("kappa: dimension must be >= 0");
  // Recurrence kappa_m = kappa_{m-2} 2 pi / m is exact enough and avoids
  // tgamma for the small dimensions used here.
  double k = (m % 2 == 0) ? 1.0 : 2.0;
  for (int j = (m % 2 == 0) ? 2 : 3; j <= m; j += 2) {
    k *= 2.0 * kPi / j;
  }
  return k;
}

[[nodiscard]] inline double factorial(int n) {
  if (n < 0) throw DomainError("factorial: n must be >= 0");
  double f = 1.0;
  for (int j = 2; j <= n; ++j) f *= j;
  return f;
}

}  // namespace gzonoid

#endif  // GZONOID_SCALAR_KERNELS_HPP
