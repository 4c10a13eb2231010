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

// Test-only reference computations. Nothing here calls into the library
// code path it is used to check.

#ifndef GZONOID_TESTS_ORACLES_HPP
#define GZONOID_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Composite 10-point Gauss-Legendre rule with `panels` equal panels.
inline double gauss_legendre_10(const std::function<double(double)>& f,
                                double a, double b, int panels) {
  static constexpr double x[5] = {0.1488743389816312, 0.4333953941292472,
                                  0.6794095682990244, 0.8650633666889845,
                                  0.9739065285171717};
  static constexpr double w[5] = {0.2955242247147529, 0.2692667193099963,
                                  0.2190863625159820, 0.1494513491505806,
                                  0.0666713443086881};
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    const double r = 0.5 * h;
    for (int i = 0; i < 5; ++i) {
      total += w[i] * r * (f(c - r * x[i]) + f(c + r * x[i]));
    }
  }
  return total;
}

/// erf by quadrature of its defining integral.
inline double erf_by_quadrature(double t) {
  return 2.0 / std::sqrt(kPi) *
         gauss_legendre_10([](double s) { return std::exp(-s * s); }, 0.0, t,
                           64);
}

/// E|mu + sigma xi| by quadrature against the Gaussian density.
inline double folded_moment_by_quadrature(double mu, double sigma) {
  auto f = [&](double z) {
    return std::fabs(mu + sigma * z) * std::exp(-0.5 * z * z) /
           std::sqrt(2.0 * kPi);
  };
  // Split at the kink z = -mu / sigma.
  const double k = -mu / sigma;
  const double lo = std::min(-12.0, k - 1.0);
  const double hi = std::max(12.0, k + 1.0);
  return gauss_legendre_10(f, lo, k, 400) + gauss_legendre_10(f, k, hi, 400);
}

inline double central_difference(const std::function<double(double)>& f,
                                  double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Sample mean and standard error of g(mt19937_64) over n draws.
struct McResult {
  double mean;
  double se;
};

template <class G>
McResult std_monte_carlo(std::uint64_t seed, long n, G&& g) {
  std::mt19937_64 eng(seed);
  double mean = 0.0;
  double m2 = 0.0;
  for (long i = 1; i <= n; ++i) {
    const double v = g(eng);
    const double d = v - mean;
    mean += d / static_cast<double>(i);
    m2 += d * (v - mean);
  }
  return {mean, std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n))};
}

}  // namespace oracle

#endif  // GZONOID_TESTS_ORACLES_HPP
