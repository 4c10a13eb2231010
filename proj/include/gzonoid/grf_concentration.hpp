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

#ifndef GZONOID_GRF_CONCENTRATION_HPP
#define GZONOID_GRF_CONCENTRATION_HPP

// Zonoid sections of the shifted field X_tau = phi + tau g on the flat torus
// T^m = [0, 2 pi)^m, where g is a standard Gaussian random field whose
// differential induces the flat metric. The expected number of common zeros
// of m iid copies of X_tau inside the tube U_r = {|phi| < r} is
//
//   n_{r,tau} = m! int_{U_r} vol_m(zeta_tau(p)) dp,
//   zeta_tau(p) = exp(-phi(p)^2 / (2 tau^2)) / sqrt(2 pi) * G(grad phi(p) / tau).
//
// This header evaluates that integral on a tensor grid, by the coarea formula
// for fields that depend on one coordinate, by its tau -> 0 limit, and (for
// m = 1) by direct Monte Carlo zero counting.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gzonoid/errors.hpp"
#include "gzonoid/monte_carlo.hpp"
#include "gzonoid/quadrature.hpp"
#include "gzonoid/scalar_kernels.hpp"
#include "gzonoid/zonoid_geometry.hpp"

namespace gzonoid {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// phi(p) = amplitude * sin(frequency * p_1) + offset: depends on the first
/// coordinate only, so its level sets are unions of coordinate hyperplanes.
struct Sinusoid {
  double amplitude = 1.0;
  int frequency = 1;
  double offset = 0.0;
};

/// A smooth deterministic function on T^m with its gradient and a global
/// bound on the gradient norm (used to classify grid cells against the tube).
class ScalarFieldSpec {
 public:
  using Value = std::function<double(std::span<const double>)>;
  using Gradient = std::function<void(std::span<const double>, std::span<double>)>;

  ScalarFieldSpec(std::string id, int dim, Value phi, Gradient grad,
                  double max_gradient, std::optional<Sinusoid> reducible = {},
                  std::optional<double> zero_set_volume = {})
      : id_(std::move(id)),
        dim_(dim),
        phi_(std::move(phi)),
        grad_(std::move(grad)),
        max_gradient_(max_gradient),
        reducible_(reducible),
        zero_set_volume_(zero_set_volume) {
    if (dim_ < 1) throw DomainError("ScalarFieldSpec: dimension must be >= 1");
    if (!phi_ || !grad_) throw DomainError("ScalarFieldSpec: missing phi or gradient");
    if (!(max_gradient_ >= 0.0) || !std::isfinite(max_gradient_)) {
      throw DomainError("ScalarFieldSpec: max_gradient must be finite and >= 0");
    }
  }

  /// amplitude * sin(frequency * p_1) + offset on T^m.
  [[nodiscard]] static ScalarFieldSpec sinusoid(int m, Sinusoid s, std::string id) {
    if (s.frequency < 1) throw DomainError("sinusoid: frequency must be >= 1");
    if (!std::isfinite(s.amplitude) || !std::isfinite(s.offset) || s.amplitude == 0.0) {
      throw DomainError("sinusoid: amplitude must be finite and nonzero");
    }
    const double k = s.frequency;
    auto phi = [s, k](std::span<const double> p) {
      return s.amplitude * std::sin(k * p[0]) + s.offset;
    };
    auto grad = [s, k](std::span<const double> p, std::span<double> g) {
      std::fill(g.begin(), g.end(), 0.0);
      g[0] = s.amplitude * k * std::cos(k * p[0]);
    };
    std::optional<double> z0;
    if (std::fabs(s.offset) < std::fabs(s.amplitude)) {
      // 2k simple roots in p_1, each a flat (m-1)-torus of volume (2 pi)^{m-1}.
      z0 = 2.0 * k * std::pow(2.0 * kPi, m - 1);
    }
    return {std::move(id), m, phi, grad, std::fabs(s.amplitude) * k, s, z0};
  }

  /// phi = 0: the tube is the whole torus and the count is that of g alone.
  [[nodiscard]] static ScalarFieldSpec zero(int m) {
    return {"zero", m, [](std::span<const double>) { return 0.0; },
            [](std::span<const double>, std::span<double> g) {
              std::fill(g.begin(), g.end(), 0.0);
            },
            0.0};
  }

  /// cos(p_1) + 0.5 cos(p_2) on T^2: a field with curved level sets.
  [[nodiscard]] static ScalarFieldSpec cos_mix() {
    auto phi = [](std::span<const double> p) {
      return std::cos(p[0]) + 0.5 * std::cos(p[1]);
    };
    auto grad = [](std::span<const double> p, std::span<double> g) {
      g[0] = -std::sin(p[0]);
      g[1] = -0.5 * std::sin(p[1]);
    };
    return {"cos_mix", 2, phi, grad, std::sqrt(1.25)};
  }

  /// Named fields: "sin2t" = sin(2 p_1), "sin_offset" = sin(p_1) + 0.5,
  /// "zero", and "cos_mix" (m = 2 only).
  [[nodiscard]] static ScalarFieldSpec by_id(std::string_view id, int m) {
    if (m < 1) throw DomainError("field: dimension must be >= 1");
    if (id == "sin2t") return sinusoid(m, {1.0, 2, 0.0}, "sin2t");
    if (id == "sin_offset") return sinusoid(m, {1.0, 1, 0.5}, "sin_offset");
    if (id == "zero") return zero(m);
    if (id == "cos_mix") {
      if (m != 2) throw DomainError("field cos_mix is defined for m = 2 only");
      return cos_mix();
    }
    throw DomainError("unknown field id '" + std::string(id) +
                      "' (expected sin2t, sin_offset, zero or cos_mix)");
  }

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }
  [[nodiscard]] double max_gradient() const noexcept { return max_gradient_; }
  [[nodiscard]] const std::optional<Sinusoid>& reducible() const noexcept {
    return reducible_;
  }
  /// vol_{m-1} of the zero set when it is known in closed form.
  [[nodiscard]] const std::optional<double>& zero_set_volume() const noexcept {
    return zero_set_volume_;
  }

  [[nodiscard]] double phi(std::span<const double> p) const { return phi_(p); }
  void gradient(std::span<const double> p, std::span<double> out) const {
    grad_(p, out);
  }
  [[nodiscard]] double gradient_norm(std::span<const double> p) const {
    std::array<double, 16> buf{};
    std::vector<double> heap;
    std::span<double> g;
    if (dim_ <= 16) {
      g = std::span<double>(buf.data(), static_cast<std::size_t>(dim_));
    } else {
      heap.assign(static_cast<std::size_t>(dim_), 0.0);
      g = heap;
    }
    grad_(p, g);
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s);
  }

 private:
  std::string id_;
  int dim_;
  Value phi_;
  Gradient grad_;
  double max_gradient_;
  std::optional<Sinusoid> reducible_;
  std::optional<double> zero_set_volume_;
};

/// The tube U_r = {|phi| < r} at noise level tau. r may be +infinity.
struct TubeSpec {
  double tau = 1.0;
  double r = kInfinity;

  void validate() const {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
      throw DomainError("TubeSpec: tau must be finite and > 0");
    }
    if (!(r >= 0.0)) throw DomainError("TubeSpec: r must be >= 0");
  }
};

/// Tensor grid: `resolution` cells per axis (0 = choose automatically from
/// the tube and tau), Gauss-Legendre rule of order `order` in every cell.
struct GridSpec {
  int resolution = 0;
  int order = 5;

  void validate() const {
    if (resolution != 0 && resolution < 16) {
      throw DomainError("GridSpec: resolution must be 0 (auto) or >= 16");
    }
    if (order < 1 || order > 5) throw DomainError("GridSpec: order must be in [1, 5]");
  }
};

// ---------------------------------------------------------------------------
// Pointwise zonoid sections.

namespace detail {

inline void check_point(const ScalarFieldSpec& field, std::span<const double> p) {
  if (static_cast<int>(p.size()) != field.dim()) {
    throw DomainError("point dimension does not match the field");
  }
}

inline void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("tau must be finite and > 0");
}

/// vol_m(G(s)) as a function of s >= 0 on [0, s_max]: closed form for m = 1,
/// otherwise piecewise Chebyshev interpolation of the quadrature volume on
/// [0, 1], [1, 2], [2, 4], ... (degree 23 per piece).
class GVolumeTable {
 public:
  GVolumeTable(int m, double s_max) : m_(m) {
    if (m_ < 1) throw DomainError("GVolumeTable: dimension must be >= 1");
    if (m_ == 1) return;
    breaks_.push_back(0.0);
    double hi = 1.0;
    breaks_.push_back(hi);
    while (hi < s_max) {
      hi *= 2.0;
      breaks_.push_back(hi);
    }
    values_.resize((breaks_.size() - 1) * kNodes);
    for (std::size_t seg = 0; seg + 1 < breaks_.size(); ++seg) {
      for (int j = 0; j < kNodes; ++j) {
        const double s = node(seg, j);
        values_[seg * kNodes + static_cast<std::size_t>(j)] =
            volume(RevolutionBody::gaussian_zonoid(s, m_), 1e-13);
      }
    }
  }

  [[nodiscard]] double operator()(double s) const {
    if (m_ == 1) return folded_abs_moment({s, 1.0});
    if (!(s >= 0.0)) throw DomainError("GVolumeTable: s must be >= 0");
    if (s > breaks_.back()) {
      return volume(RevolutionBody::gaussian_zonoid(s, m_), 1e-13);
    }
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), s);
    std::size_t seg = static_cast<std::size_t>(it - breaks_.begin());
    seg = seg == 0 ? 0 : std::min(seg - 1, breaks_.size() - 2);
    const double a = breaks_[seg], b = breaks_[seg + 1];
    const double x = (2.0 * s - a - b) / (b - a);
    // Barycentric formula on Chebyshev points of the first kind.
    double num = 0.0, den = 0.0;
    for (int j = 0; j < kNodes; ++j) {
      const double xj = cheb(j);
      const double d = x - xj;
      const double v = values_[seg * kNodes + static_cast<std::size_t>(j)];
      if (d == 0.0) return v;
      const double w = weight(j) / d;
      num += w * v;
      den += w;
    }
    return num / den;
  }

 private:
  static constexpr int kNodes = 24;
  [[nodiscard]] static double cheb(int j) {
    static const std::array<double, kNodes> x = [] {
      std::array<double, kNodes> v{};
      for (int i = 0; i < kNodes; ++i) v[i] = std::cos((2.0 * i + 1.0) * kPi / (2.0 * kNodes));
      return v;
    }();
    return x[static_cast<std::size_t>(j)];
  }
  [[nodiscard]] static double weight(int j) {
    static const std::array<double, kNodes> w = [] {
      std::array<double, kNodes> v{};
      for (int i = 0; i < kNodes; ++i) {
        v[i] = ((i % 2) ? -1.0 : 1.0) * std::sin((2.0 * i + 1.0) * kPi / (2.0 * kNodes));
      }
      return v;
    }();
    return w[static_cast<std::size_t>(j)];
  }
  [[nodiscard]] double node(std::size_t seg, int j) const {
    const double a = breaks_[seg], b = breaks_[seg + 1];
    return 0.5 * (a + b) + 0.5 * (b - a) * cheb(j);
  }

  int m_;
  std::vector<double> breaks_;
  std::vector<double> values_;
};

}  // namespace detail

/// vol_m(zeta_tau(p)) = (2 pi)^{-m/2} exp(-m phi^2 / (2 tau^2)) vol_m(G(|grad phi| / tau)).
[[nodiscard]] inline double zonoid_section_volume(std::span<const double> p,
                                                  const ScalarFieldSpec& field,
                                                  double tau) {
  detail::check_tau(tau);
  detail::check_point(field, p);
  const int m = field.dim();
  const double f = field.phi(p);
  const double s = field.gradient_norm(p) / tau;
  return std::pow(2.0 * kPi, -0.5 * m) * std::exp(-m * f * f / (2.0 * tau * tau)) *
         volume(RevolutionBody::gaussian_zonoid(s, m), 1e-12);
}

/// h_{zeta_tau(p)}(u) = exp(-phi^2 / (2 tau^2)) / sqrt(2 pi) * 1/2 E|<u, grad phi / tau + xi>|.
[[nodiscard]] inline double zonoid_section_support(std::span<const double> p,
                                                   const ScalarFieldSpec& field,
                                                   double tau,
                                                   std::span<const double> u) {
  detail::check_tau(tau);
  detail::check_point(field, p);
  if (u.size() != p.size()) throw DomainError("direction dimension does not match the field");
  std::vector<double> g(p.size());
  field.gradient(p, g);
  double uc = 0.0, uu = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    uc += u[i] * g[i] / tau;
    uu += u[i] * u[i];
  }
  const double f = field.phi(p);
  return std::exp(-f * f / (2.0 * tau * tau)) / kSqrt2Pi * 0.5 *
         folded_abs_moment({uc, std::sqrt(uu)});
}

// ---------------------------------------------------------------------------
// Tube integrals on the tensor grid.

namespace detail {

/// Bisection depth for cells straddling the tube boundary.
[[nodiscard]] inline int tube_refinement_depth(int m) {
  return m == 1 ? 40 : (m == 2 ? 5 : 3);
}

}  // namespace detail

/// Cells per axis for the tube integral. The grid must put at least 8 cells
/// across the tube (width ~ 2 r / max|grad phi|), counting the bisection of
/// boundary cells. The automatic choice (resolution 0) also puts 16 cells
/// across 8 tau / max|grad phi| so that exp(-phi^2 / (2 tau^2)) is resolved;
/// for very thin tubes it leaves the rest to boundary bisection.
[[nodiscard]] inline int tube_grid_resolution(const ScalarFieldSpec& field,
                                              const TubeSpec& tube,
                                              const GridSpec& grid) {
  tube.validate();
  grid.validate();
  const int m = field.dim();
  const double lip = field.max_gradient();
  const double period = 2.0 * kPi;
  const double need_tube = (std::isfinite(tube.r) && lip > 0.0)
                               ? std::ceil(8.0 * period * lip / (2.0 * tube.r))
                               : 0.0;
  const double refine = std::ldexp(1.0, detail::tube_refinement_depth(m));
  int n = grid.resolution;
  if (n == 0) {
    const double cap = m == 1 ? 4.0e6 : (m == 2 ? 8.0e3 : 256.0);
    const double need_bump = lip > 0.0 ? std::ceil(16.0 * period * lip / (8.0 * tube.tau)) : 0.0;
    const double want = std::max({16.0, need_bump, std::min(need_tube, cap)});
    if (want > cap) {
      throw ResolutionError("tau is too small for an automatic grid in dimension " +
                            std::to_string(m) + "; pass an explicit resolution");
    }
    n = static_cast<int>(want);
  }
  if (need_tube > 0.0 && n * refine < need_tube) {
    throw ResolutionError("grid resolution " + std::to_string(n) +
                          " puts fewer than 8 cells across the tube; increase it to at least " +
                          std::to_string(static_cast<long long>(std::ceil(need_tube / refine))) +
                          " (or use 0 for automatic)");
  }
  return n;
}

namespace detail {

/// int_{U_r} f(phi(p), |grad phi(p)|) dp over T^m. Cells are classified with
/// the Lipschitz bound; cells straddling the tube boundary are bisected up to
/// a dimension-dependent depth, then integrated with the indicator.
template <class F>
double integrate_tube(const ScalarFieldSpec& field, const TubeSpec& tube, int n,
                      int order, unsigned threads, const F& f) {
  const int m = field.dim();
  const auto rule = gauss_legendre(order);
  const double h0 = 2.0 * kPi / n;
  const double lip = field.max_gradient() * (1.0 + 1e-12);
  const double r = tube.r;
  const int max_depth = tube_refinement_depth(m);
  const auto um = static_cast<std::size_t>(m);
  std::int64_t n_other = 1;
  for (int d = 1; d < m; ++d) n_other *= n;

  std::vector<double> slabs(static_cast<std::size_t>(n), 0.0);
  for_each_chunk(n, threads, [&](std::int64_t i0) {
    std::vector<double> lo(um), p(um), g(um);
    std::vector<int> idx(um), q(um);

    auto gauss = [&](const std::vector<double>& corner, double h, bool indicator) {
      const auto no = rule.nodes.size();
      std::fill(q.begin(), q.end(), 0);
      double acc = 0.0;
      for (;;) {
        double w = 1.0;
        for (std::size_t d = 0; d < um; ++d) {
          const auto k = static_cast<std::size_t>(q[d]);
          p[d] = corner[d] + 0.5 * h * (rule.nodes[k] + 1.0);
          w *= 0.5 * h * rule.weights[k];
        }
        const double v = field.phi(p);
        if (!indicator || std::fabs(v) < r) {
          field.gradient(p, g);
          double gn = 0.0;
          for (double x : g) gn += x * x;
          acc += w * f(v, std::sqrt(gn));
        }
        std::size_t d = 0;
        while (d < um && ++q[d] == static_cast<int>(no)) q[d++] = 0;
        if (d == um) break;
      }
      return acc;
    };

    std::function<double(const std::vector<double>&, double, int)> cell =
        [&](const std::vector<double>& corner, double h, int depth) -> double {
      if (!std::isfinite(r)) return gauss(corner, h, false);
      for (std::size_t d = 0; d < um; ++d) p[d] = corner[d] + 0.5 * h;
      const double c = std::fabs(field.phi(p));
      const double reach = lip * 0.5 * h * std::sqrt(static_cast<double>(m));
      if (c - reach >= r) return 0.0;
      if (c + reach < r) return gauss(corner, h, false);
      if (depth >= max_depth) return gauss(corner, h, true);
      double acc = 0.0;
      std::vector<double> sub(um);
      for (int mask = 0; mask < (1 << m); ++mask) {
        for (std::size_t d = 0; d < um; ++d) {
          sub[d] = corner[d] + (((mask >> d) & 1) ? 0.5 * h : 0.0);
        }
        acc += cell(sub, 0.5 * h, depth + 1);
      }
      return acc;
    };

    double slab = 0.0;
    std::fill(idx.begin(), idx.end(), 0);
    for (std::int64_t j = 0; j < n_other; ++j) {
      lo[0] = h0 * static_cast<double>(i0);
      std::int64_t rest = j;
      for (std::size_t d = 1; d < um; ++d) {
        lo[d] = h0 * static_cast<double>(rest % n);
        rest /= n;
      }
      slab += cell(lo, h0, 0);
    }
    slabs[static_cast<std::size_t>(i0)] = slab;
  });
  double total = 0.0;
  for (double s : slabs) total += s;
  return total;
}

}  // namespace detail

/// n_{r,tau} = m! int_{U_r} vol_m(zeta_tau(p)) dp by tensor-grid quadrature.
[[nodiscard]] inline double n_r_tau_integral(const ScalarFieldSpec& field,
                                             const TubeSpec& tube,
                                             const GridSpec& grid = {},
                                             unsigned threads = 0) {
  tube.validate();
  grid.validate();
  if (tube.r == 0.0) return 0.0;
  const int n = tube_grid_resolution(field, tube, grid);
  const int m = field.dim();
  const double tau = tube.tau;
  const detail::GVolumeTable vol(m, field.max_gradient() / tau);
  const double pre = factorial(m) * std::pow(2.0 * kPi, -0.5 * m);
  return detail::integrate_tube(field, tube, n, grid.order, threads,
                                [&](double f, double gn) {
                                  return pre * std::exp(-m * f * f / (2.0 * tau * tau)) *
                                         vol(gn / tau);
                                });
}

/// n_{r,tau} for a sinusoid field by the coarea formula over the levels
/// t in (-r, r). Each level set {a sin(k p_1) + b = t} consists of 2k flat
/// tori on which |grad phi| = k sqrt(a^2 - (t - b)^2).
[[nodiscard]] inline double n_r_tau_coarea(const ScalarFieldSpec& field,
                                           const TubeSpec& tube,
                                           const GridSpec& grid = {}) {
  tube.validate();
  grid.validate();
  if (!field.reducible()) {
    throw UnsupportedError("n_r_tau_coarea: field '" + field.id() +
                           "' does not depend on a single coordinate");
  }
  if (tube.r == 0.0) return 0.0;
  const auto [a_signed, k_int, b] = *field.reducible();
  const double a = std::fabs(a_signed);
  const double k = k_int;
  const double r = tube.r;
  const double tau = tube.tau;
  const int m = field.dim();
  const double lo_level = b - a, hi_level = b + a;
  if (hi_level <= -r || lo_level >= r) return 0.0;  // tube is empty
  if ((lo_level > -r && lo_level < r) || (hi_level > -r && hi_level < r)) {
    throw DomainError("n_r_tau_coarea: the tube contains a critical value of phi; "
                      "use a smaller r or n_r_tau_integral");
  }
  const detail::GVolumeTable vol(m, a * k / tau);
  const double pre = factorial(m) * std::pow(2.0 * kPi, -0.5 * m) * 2.0 * k *
                     std::pow(2.0 * kPi, m - 1) * tau;
  // t = tau u; the Gaussian weight is below 1e-300 beyond |u| = 38 / sqrt(m).
  const double u_max = std::min(r / tau, 38.0 / std::sqrt(static_cast<double>(m)));
  auto integrand = [&](double u) {
    const double t = tau * u;
    const double d = a * a - (t - b) * (t - b);
    if (d <= 0.0) return 0.0;
    const double gn = k * std::sqrt(d);
    return std::exp(-0.5 * m * u * u) * vol(gn / tau) / gn;
  };
  const int panels = std::max(16, grid.resolution);
  return pre * adaptive_simpson_rel(integrand, -u_max, u_max, 1e-11, panels);
}

/// lim_{tau -> 0} n_{alpha tau, tau}
///   = (m-1)! kappa_{m-1} / (2 pi)^{m-1} * erf(sqrt(m/2) alpha) * vol_{m-1}(Z_0).
[[nodiscard]] inline double concentration_limit(int m, double alpha, double vol_z0) {
  if (m < 1) throw DomainError("concentration_limit: m must be >= 1");
  if (!(alpha >= 0.0)) throw DomainError("concentration_limit: alpha must be >= 0");
  if (!(vol_z0 >= 0.0)) throw DomainError("concentration_limit: vol_Z0 must be >= 0");
  const double e = std::isinf(alpha) ? 1.0 : std::erf(std::sqrt(0.5 * m) * alpha);
  return factorial(m - 1) * kappa(m - 1) / std::pow(2.0 * kPi, m - 1) * e * vol_z0;
}

/// Tube radius as a function of tau: r = alpha tau, or r = c tau^s.
struct RadiusRule {
  enum class Kind { Proportional, Power };
  Kind kind = Kind::Proportional;
  double alpha = 1.0;  // Proportional
  double c = 1.0;      // Power
  double s = 1.0;      // Power

  [[nodiscard]] static RadiusRule proportional(double alpha) {
    return {Kind::Proportional, alpha, 1.0, 1.0};
  }
  [[nodiscard]] static RadiusRule power(double c, double s) {
    return {Kind::Power, 1.0, c, s};
  }
  [[nodiscard]] double radius(double tau) const {
    return kind == Kind::Proportional ? alpha * tau : c * std::pow(tau, s);
  }
  /// The effective alpha = lim r / tau as tau -> 0.
  [[nodiscard]] double limit_alpha() const {
    if (kind == Kind::Proportional) return alpha;
    if (s > 1.0) return 0.0;
    if (s < 1.0) return kInfinity;
    return c;
  }
};

// ---------------------------------------------------------------------------
// Monte Carlo zero counting on the circle.

namespace detail {

struct CircleNode {
  double t, phi, cos_t, sin_t;
};

/// Maximal arcs of {|phi| < r} sampled on the scan grid, with exact
/// (bisected) endpoints. `closed` marks the whole-circle case.
struct CircleTube {
  std::vector<std::vector<CircleNode>> arcs;
  bool closed = false;
};

inline CircleNode circle_node(const ScalarFieldSpec& field, double t) {
  const std::array<double, 1> p{t};
  return {t, field.phi(p), std::cos(t), std::sin(t)};
}

inline CircleTube build_circle_tube(const ScalarFieldSpec& field, double r, int n) {
  const double h = 2.0 * kPi / n;
  std::vector<CircleNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) nodes.push_back(circle_node(field, h * i));
  auto inside = [r](double v) { return std::fabs(v) < r; };
  CircleTube tube;
  int start = -1;
  for (int i = 0; i < n; ++i) {
    if (!inside(nodes[static_cast<std::size_t>(i)].phi)) {
      start = i;
      break;
    }
  }
  if (start < 0) {
    tube.closed = true;
    tube.arcs.push_back(std::move(nodes));
    return tube;
  }
  // Boundary of the tube between an outside time `out` and an inside time `in`.
  auto edge = [&](double out, double in) {
    for (int it = 0; it < 80 && std::fabs(in - out) > 1e-15; ++it) {
      const double mid = 0.5 * (out + in);
      const std::array<double, 1> p{mid};
      (inside(field.phi(p)) ? in : out) = mid;
    }
    return circle_node(field, in);
  };
  std::vector<CircleNode> arc;
  for (int j = 1; j <= n; ++j) {
    const int i = (start + j) % n;
    const double t = h * (start + j);  // unwrapped time
    CircleNode node = nodes[static_cast<std::size_t>(i)];
    node.t = t;
    if (inside(node.phi)) {
      if (arc.empty()) arc.push_back(edge(t - h, t));
      arc.push_back(node);
    } else if (!arc.empty()) {
      arc.push_back(edge(t, arc.back().t));
      tube.arcs.push_back(std::move(arc));
      arc.clear();
    }
  }
  return tube;
}

}  // namespace detail

/// Scan spacing for the zero count: explicit resolution (cells per period)
/// or, when 0, min(tau / (10 max|phi'| + 10), min(tau, r) / 20). An explicit
/// spacing coarser than tau / (10 max|phi'| + 10) is rejected.
[[nodiscard]] inline int circle_scan_resolution(const ScalarFieldSpec& field,
                                                const TubeSpec& tube,
                                                const GridSpec& grid) {
  tube.validate();
  grid.validate();
  const double limit = tube.tau / (10.0 * field.max_gradient() + 10.0);
  if (grid.resolution == 0) {
    const double h = std::min(limit, std::min(tube.tau, tube.r) / 20.0);
    const double n = std::ceil(2.0 * kPi / h);
    if (n > 1e9) throw ResolutionError("scan grid would exceed 1e9 points");
    return static_cast<int>(n);
  }
  const double h = 2.0 * kPi / grid.resolution;
  if (h > limit) {
    throw ResolutionError("scan spacing " + std::to_string(h) + " exceeds tau/(10 max|phi'| + 10) = " +
                          std::to_string(limit) + "; increase the grid resolution to at least " +
                          std::to_string(static_cast<long long>(std::ceil(2.0 * kPi / limit))));
  }
  return grid.resolution;
}

/// Expected number of zeros of phi + tau g inside {|phi| < r} on the circle,
/// with g(t) = xi_1 cos t + xi_2 sin t. Sign changes on the scan grid are
/// refined by bisection to 1e-10.
[[nodiscard]] inline EstimateWithCI mc_zero_count_circle(const ScalarFieldSpec& field,
                                                         const TubeSpec& tube,
                                                         const MCConfig& cfg,
                                                         const GridSpec& grid = {}) {
  if (field.dim() != 1) throw DomainError("mc_zero_count_circle: field must live on T^1");
  tube.validate();
  validate(cfg);
  if (tube.r == 0.0) return {0.0, 0.0, cfg.samples};
  const int n = circle_scan_resolution(field, tube, grid);
  const detail::CircleTube ct = detail::build_circle_tube(field, tube.r, n);
  const double tau = tube.tau;
  const ScalarFieldSpec* fp = &field;
  const detail::CircleTube* tp = &ct;

  auto sample = [fp, tp, tau](CounterRng& rng) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    auto value = [&](const detail::CircleNode& nd) {
      return nd.phi + tau * (x1 * nd.cos_t + x2 * nd.sin_t);
    };
    auto refine = [&](double a, double fa, double b) {
      while (b - a > 1e-10) {
        const double mid = 0.5 * (a + b);
        const std::array<double, 1> p{mid};
        const double fm = fp->phi(p) + tau * (x1 * std::cos(mid) + x2 * std::sin(mid));
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    };
    int count = 0;
    for (const auto& arc : tp->arcs) {
      const std::size_t len = arc.size();
      const std::size_t pairs = tp->closed ? len : len - 1;
      double prev = value(arc[0]);
      for (std::size_t i = 0; i < pairs; ++i) {
        const auto& b = arc[(i + 1) % len];
        const double tb = (i + 1 == len) ? arc[0].t + 2.0 * kPi : b.t;
        const double cur = value(b);
        if ((prev < 0.0) != (cur < 0.0)) {
          const double root = refine(arc[i].t, prev, tb);
          if (root >= arc[i].t && root <= tb) ++count;
        }
        prev = cur;
      }
    }
    return static_cast<double>(count);
  };
  return run_monte_carlo(cfg, sample);
}

// ---------------------------------------------------------------------------
// Comparison field.

struct SandwichReport {
  int dim = 0;
  double tau = 0.0;
  double r = 0.0;
  std::int64_t n_points = 0;
  double min_ratio = 0.0;  // min vol(zeta) / vol(ellipsoid section)
  double max_ratio = 0.0;
  std::int64_t n_violations = 0;
  std::vector<double> witness;
  double count = 0.0;            // m! int_{U_r} vol(zeta_tau)
  double comparison_count = 0.0;  // m! int_{U_r} vol((1/2pi) e^{-phi^2/2tau^2} T_c B)
  bool passed = false;
};

/// Volume of the comparison ellipsoid section
/// (1/(2 pi)) exp(-phi^2/(2 tau^2)) T_c B_m with c = grad phi / tau:
/// (2 pi)^{-m} exp(-m phi^2/(2 tau^2)) lambda(|c|) kappa_m.
[[nodiscard]] inline double comparison_section_volume(int m, double phi, double s,
                                                      double tau) {
  return std::pow(2.0 * kPi, -m) * std::exp(-m * phi * phi / (2.0 * tau * tau)) *
         lambda(s) * kappa(m);
}

/// Checks b_inf^m vol_ell <= vol_zeta <= vol_ell (slack 1e-10, both on the
/// volumes and on their ratio) at the cell centres of a `points_per_axis`^m grid and compares the integrated counts
/// over U_r.
[[nodiscard]] inline SandwichReport comparison_field_sandwich(
    const ScalarFieldSpec& field, double tau, const GridSpec& grid = {},
    double r = kInfinity, int points_per_axis = 32, unsigned threads = 0) {
  detail::check_tau(tau);
  if (points_per_axis < 1) throw DomainError("comparison_field_sandwich: points_per_axis must be >= 1");
  const TubeSpec tube{tau, r};
  tube.validate();
  const int m = field.dim();
  const double bm = std::pow(kBInfinity, m);
  constexpr double kSlack = 1e-10;

  SandwichReport rep;
  rep.dim = m;
  rep.tau = tau;
  rep.r = r;
  rep.min_ratio = kInfinity;
  rep.max_ratio = -kInfinity;
  std::int64_t total = 1;
  for (int d = 0; d < m; ++d) total *= points_per_axis;
  rep.n_points = total;
  const double h = 2.0 * kPi / points_per_axis;
  std::vector<double> p(static_cast<std::size_t>(m));
  for (std::int64_t j = 0; j < total; ++j) {
    std::int64_t rest = j;
    for (auto& x : p) {
      x = h * (static_cast<double>(rest % points_per_axis) + 0.5);
      rest /= points_per_axis;
    }
    const double vz = zonoid_section_volume(p, field, tau);
    const double sn = field.gradient_norm(p) / tau;
    const double ve = comparison_section_volume(m, field.phi(p), sn, tau);
    // The ratio does not depend on phi; evaluating it without the common
    // factor exp(-m phi^2 / (2 tau^2)) keeps it meaningful where both
    // volumes underflow.
    const double ratio = std::pow(2.0 * kPi, 0.5 * m) *
                         volume(RevolutionBody::gaussian_zonoid(sn, m), 1e-12) /
                         (lambda(sn) * kappa(m));
    rep.min_ratio = std::min(rep.min_ratio, ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
    const bool abs_ok = vz >= bm * ve - kSlack && vz <= ve + kSlack;
    const bool rel_ok = ratio >= bm - kSlack && ratio <= 1.0 + kSlack;
    if (!abs_ok || !rel_ok) {
      if (rep.n_violations == 0) rep.witness = p;
      ++rep.n_violations;
    }
  }
  if (r > 0.0) {
    const int n = tube_grid_resolution(field, tube, grid);
    const detail::GVolumeTable vol(m, field.max_gradient() / tau);
    const double fm = factorial(m);
    rep.count = detail::integrate_tube(field, tube, n, grid.order, threads,
                                       [&](double f, double gn) {
                                         return fm * std::pow(2.0 * kPi, -0.5 * m) *
                                                std::exp(-m * f * f / (2.0 * tau * tau)) *
                                                vol(gn / tau);
                                       });
    rep.comparison_count = detail::integrate_tube(
        field, tube, n, grid.order, threads, [&](double f, double gn) {
          return fm * comparison_section_volume(m, f, gn / tau, tau);
        });
  }
  const double tol = kSlack * (1.0 + rep.comparison_count);
  const bool counts_ok = rep.count >= bm * rep.comparison_count - tol &&
                         rep.count <= rep.comparison_count + tol;
  rep.passed = rep.n_violations == 0 && counts_ok;
  return rep;
}

}  // namespace gzonoid

#endif  // GZONOID_GRF_CONCENTRATION_HPP
