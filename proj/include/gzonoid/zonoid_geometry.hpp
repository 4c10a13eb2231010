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

// Support functions, boundaries and volumes of Gaussian zonoids.
//
// G(c) is the Vitale zonoid of c + xi (xi standard Gaussian). It is a body of
// revolution about the axis of c, so every direction u is reduced to
// (x, yr): x the component along c / |c| and yr the norm of the rest. The
// same reduction covers the renormalized bodies Gtilde(s) = sqrt(2 pi)
// T_c^{-1} G(c), their limit Gtilde(inf), and the outer ellipsoid
// T_c(B_m / sqrt(2 pi)).

#ifndef GZONOID_ZONOID_GEOMETRY_HPP
#define GZONOID_ZONOID_GEOMETRY_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gzonoid/errors.hpp"
#include "gzonoid/monte_carlo.hpp"
#include "gzonoid/quadrature.hpp"
#include "gzonoid/rng.hpp"
#include "gzonoid/scalar_kernels.hpp"

namespace gzonoid {

/// Direction in the (axial, radial) half-plane. yr is a norm; its sign is
/// ignored by every support function.
struct Direction {
  double x = 0.0;
  double yr = 0.0;

  [[nodiscard]] double norm() const noexcept { return std::hypot(x, yr); }
  [[nodiscard]] static Direction from_angle(double theta) noexcept {
    return {std::cos(theta), std::sin(theta)};
  }
};

/// Splits v into its component along `axis_unit` and the norm of the rest.
[[nodiscard]] inline Direction split_direction(const Eigen::VectorXd& v,
                                               const Eigen::VectorXd& axis_unit) {
  const double x = v.dot(axis_unit);
  const double yr = (v - x * axis_unit).norm();
  return {x, yr};
}

// ---------------------------------------------------------------------------
// Closed-form support functions.

/// h_{G(c)}(u) with s = |c|.
[[nodiscard]] inline double support_G(double s, Direction u) {
  detail::require_finite(s, "support_G");
  if (s < 0.0) throw DomainError("support_G: s must be >= 0");
  const double n2 = u.x * u.x + u.yr * u.yr;
  if (n2 == 0.0) return 0.0;
  const double n = std::sqrt(n2);
  const double xs = u.x * s;
  return n / kSqrt2Pi * std::exp(-xs * xs / (2.0 * n2)) +
         0.5 * xs * std::erf(xs / (kSqrt2 * n));
}

/// Support of T_c(B_m / sqrt(2 pi)): sqrt(lambda(s)^2 x^2 + yr^2) / sqrt(2 pi).
[[nodiscard]] inline double support_Tc_ellipsoid(double s, Direction u) {
  if (s < 0.0) throw DomainError("support_Tc_ellipsoid: s must be >= 0");
  const double l = lambda(s);
  return std::hypot(l * u.x, u.yr) / kSqrt2Pi;
}

/// h_{Gtilde(s)}(x, y) = alpha(s) lambda(beta(s)) with
/// alpha = sqrt(x^2 + lambda^2 y^2) / lambda, beta = x s / sqrt(x^2 + lambda^2 y^2).
[[nodiscard]] inline double support_Gtilde(double s, Direction u) {
  detail::require_finite(s, "support_Gtilde");
  if (!(s > 0.0)) throw DomainError("support_Gtilde: s must be > 0");
  const double l = lambda(s);
  const double root = std::hypot(u.x, l * u.yr);
  if (root == 0.0) return 0.0;
  const double alpha = root / l;
  const double beta = u.x * s / root;
  return alpha * lambda(beta);
}

[[nodiscard]] inline double support_Gtilde_infinity(Direction u) {
  return phi_inf(u.x, std::fabs(u.yr));
}

// ---------------------------------------------------------------------------
// b_infinity

struct BInfinity {
  double value = 0.0;
  double t_star = 0.0;  // minimizing angle in [0, pi/2]
};

/// Frozen regression value of min_t phi_inf(cos t, sin t), cross-checked by a
/// 10^6 point grid scan in the test suite.
inline constexpr double kBInfinity = 0.91034591079451240524;

/// Minimizes phi_inf(cos t, sin t) on [0, pi/2] (phi_inf is even in each
/// argument): a 1000 point grid brackets the minimum and golden-section
/// search refines it to `tolerance` in t.
[[nodiscard]] inline BInfinity compute_b_infinity(double tolerance = 1e-10) {
  if (!(tolerance > 0.0)) {
    throw DomainError("compute_b_infinity: tolerance must be > 0");
  }
  auto f = [](double t) { return phi_inf(std::cos(t), std::sin(t)); };
  constexpr int kGrid = 1000;
  const double h = 0.5 * kPi / kGrid;
  int best = 0;
  double best_value = f(0.0);
  for (int i = 1; i <= kGrid; ++i) {
    const double v = f(i * h);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  const double lo = std::max(0.0, (best - 1) * h);
  const double hi = std::min(0.5 * kPi, (best + 1) * h);
  const ScalarMinimum m = golden_section_minimize(f, lo, hi, tolerance);
  return {m.value, m.argmin};
}

/// Boundary of Gtilde(inf): radial = exp(-(erf^{-1}(axial))^2), |axial| <= 1.
[[nodiscard]] inline double gtilde_infinity_profile(double x) {
  detail::require_finite(x, "gtilde_infinity_profile");
  const double a = std::fabs(x);
  if (a > 1.0) throw DomainError("gtilde_infinity_profile: |x| must be <= 1");
  if (a == 1.0) return 0.0;
  const double e = erf_inv(a);
  return std::exp(-e * e);
}

// ---------------------------------------------------------------------------
// Bodies of revolution

enum class BodyKind { GOfC, GtildeS, GtildeInfinity, TcEllipsoid };

[[nodiscard]] inline const char* to_string(BodyKind k) noexcept {
  switch (k) {
    case BodyKind::GOfC: return "G";
    case BodyKind::GtildeS: return "Gtilde";
    case BodyKind::GtildeInfinity: return "Gtilde_inf";
    case BodyKind::TcEllipsoid: return "ellipsoid";
  }
  return "?";
}

struct ProfilePoint {
  double theta = 0.0;
  double axial = 0.0;
  double radial = 0.0;
};

/// A convex body of revolution whose support function has the form
///
///   h(x, y) = w * F(a x, sqrt(p^2 x^2 + q^2 y^2)),   F(mu, sigma) = E|N(mu, sigma^2)|,
///
/// i.e. 2w times the Vitale zonoid of a Gaussian with mean a e_1 and
/// covariance diag(p^2, q^2, ..., q^2). All four kinds fit this form:
///
///   G(c)          w = 1/2,          a = s,         p = 1,          q = 1
///   Gtilde(s)     w = sqrt(pi/2),   a = s/lambda,  p = 1/lambda,   q = 1
///   Gtilde(inf)   w = 1,            a = 1,         p = 0,          q = sqrt(pi/2)
///   T_c ellipsoid w = 1/2,          a = 0,         p = lambda(s),  q = 1
class RevolutionBody {
 public:
  RevolutionBody(BodyKind kind, double s, int dim) : kind_(kind), s_(s), dim_(dim) {
    detail::require_finite(s, "RevolutionBody");
    if (s < 0.0) throw DomainError("RevolutionBody: s must be >= 0");
    if (dim < 1) throw DomainError("RevolutionBody: dim must be >= 1");
    switch (kind) {
      case BodyKind::GOfC:
        w_ = 0.5; a_ = s; p_ = 1.0; q_ = 1.0;
        break;
      case BodyKind::GtildeS: {
        if (s == 0.0) {
          // Gtilde(0) = B_m.
          w_ = kSqrtPiOver2; a_ = 0.0; p_ = 1.0; q_ = 1.0;
          break;
        }
        const double l = lambda(s);
        w_ = kSqrtPiOver2; a_ = s / l; p_ = 1.0 / l; q_ = 1.0;
        break;
      }
      case BodyKind::GtildeInfinity:
        s_ = std::numeric_limits<double>::infinity();
        w_ = 1.0; a_ = 1.0; p_ = 0.0; q_ = kSqrtPiOver2;
        break;
      case BodyKind::TcEllipsoid:
        w_ = 0.5; a_ = 0.0; p_ = lambda(s); q_ = 1.0;
        break;
    }
  }

  static RevolutionBody gaussian_zonoid(double s, int dim) {
    return {BodyKind::GOfC, s, dim};
  }

  [[nodiscard]] BodyKind kind() const noexcept { return kind_; }
  [[nodiscard]] double s() const noexcept { return s_; }
  [[nodiscard]] int dim() const noexcept { return dim_; }

  [[nodiscard]] double support(Direction u) const {
    const double y = std::fabs(u.yr);
    if (u.x == 0.0 && y == 0.0) return 0.0;
    return w_ * folded_abs_moment_jet(a_ * u.x, sigma(u.x, y)).value;
  }

  /// Gradient (dh/dx, dh/dyr): the boundary point with outer normal u.
  [[nodiscard]] ProfilePoint gradient(Direction u) const {
    const double y = std::fabs(u.yr);
    const double sg = sigma(u.x, y);
    const FoldedMomentJet j = folded_abs_moment_jet(a_ * u.x, sg);
    ProfilePoint pt;
    if (sg > 0.0) {
      pt.axial = w_ * (j.d_mu * a_ + j.d_sigma * p_ * p_ * u.x / sg);
      pt.radial = w_ * j.d_sigma * q_ * q_ * y / sg;
    } else {
      pt.axial = w_ * j.d_mu * a_;
      pt.radial = 0.0;
    }
    return pt;
  }

  /// Radius of curvature h + h'' of the planar section at angle theta,
  /// theta in (0, pi). Equals the trace of the Hessian of h at the unit
  /// vector (cos theta, sin theta).
  [[nodiscard]] double curvature_radius(double theta) const {
    const double x = std::cos(theta);
    const double y = std::fabs(std::sin(theta));
    const double sg = sigma(x, y);
    if (!(sg > 0.0)) {
      throw NumericalError("curvature_radius: degenerate direction for " +
                           std::string(to_string(kind_)));
    }
    const FoldedMomentJet j = folded_abs_moment_jet(a_ * x, sg);
    const double sx = p_ * p_ * x / sg;
    const double sy = q_ * q_ * y / sg;
    const double pq2 = p_ * p_ * q_ * q_;
    const double s3 = sg * sg * sg;
    const double sxx = pq2 * y * y / s3;
    const double syy = pq2 * x * x / s3;
    const double hxx = j.d_mu_mu * a_ * a_ + 2.0 * j.d_mu_sigma * a_ * sx +
                       j.d_sigma_sigma * sx * sx + j.d_sigma * sxx;
    const double hyy = j.d_sigma_sigma * sy * sy + j.d_sigma * syy;
    return w_ * (hxx + hyy);
  }

 private:
  [[nodiscard]] double sigma(double x, double y) const noexcept {
    return std::hypot(p_ * x, q_ * y);
  }

  BodyKind kind_;
  double s_;
  int dim_;
  double w_ = 0.0;
  double a_ = 0.0;
  double p_ = 0.0;
  double q_ = 0.0;
};

/// Boundary of the body in the (axial, radial) half-plane, traced by the
/// support-function gradient at u = (cos theta, sin theta), theta in [0, pi].
[[nodiscard]] inline std::vector<ProfilePoint> boundary_profile(
    const RevolutionBody& body, int n_points) {
  if (n_points < 2) throw DomainError("boundary_profile: n_points must be >= 2");
  std::vector<ProfilePoint> out;
  out.reserve(static_cast<std::size_t>(n_points));
  for (int i = 0; i < n_points; ++i) {
    const double theta = kPi * i / (n_points - 1);
    Direction u = Direction::from_angle(theta);
    if (i == n_points - 1) u = {-1.0, 0.0};
    if (i == 0) u = {1.0, 0.0};
    ProfilePoint pt = body.gradient(u);
    pt.theta = theta;
    out.push_back(pt);
  }
  return out;
}

/// m-dimensional volume of the body of revolution:
///   vol = kappa_{m-1} int radial^{m-1} d(-axial)
///       = kappa_{m-1} int_0^pi radial(theta)^{m-1} sin(theta) R(theta) dtheta,
/// with R the curvature radius. Gtilde(inf) has cusps at axial = +-1 and is
/// integrated in the axial variable after the substitution axial = erf(v).
[[nodiscard]] inline double volume(const RevolutionBody& body,
                                   double rel_tol = 1e-10) {
  const int m = body.dim();
  if (m == 1) {
    return body.support({1.0, 0.0}) + body.support({-1.0, 0.0});
  }
  const double kappa_rest = kappa(m - 1);
  if (body.kind() == BodyKind::GtildeInfinity) {
    // d(axial) = 2/sqrt(pi) exp(-v^2) dv; beyond |v| = 6 the integrand is
    // below 1e-15 relative.
    auto integrand = [m](double v) {
      const double axial = std::erf(v);
      const double r = std::fabs(axial) < 1.0 ? gtilde_infinity_profile(axial) : 0.0;
      return std::pow(r, m - 1) * 2.0 / kSqrtPi * std::exp(-v * v);
    };
    return kappa_rest * adaptive_simpson_rel(integrand, -6.0, 6.0, rel_tol, 32);
  }
  auto integrand = [&body, m](double theta) {
    if (theta <= 0.0 || theta >= kPi) return 0.0;
    const double r = body.gradient(Direction::from_angle(theta)).radial;
    const double curv = body.curvature_radius(theta);
    if (curv < -1e-9 * (1.0 + std::fabs(r))) {
      throw NumericalError("volume: boundary profile is not convex");
    }
    return std::pow(r, m - 1) * std::sin(theta) * curv;
  };
  return kappa_rest * adaptive_simpson_rel(integrand, 0.0, kPi, rel_tol, 64);
}

struct VolumeBounds {
  double lower_ball = 0.0;  // b_inf^m lambda kappa_m / (2 pi)^{m/2}
  double lower_cyl = 0.0;   // lambda 2 kappa_{m-1} / (sqrt(m) (2 pi)^{m/2})
  double upper = 0.0;       // lambda kappa_m / (2 pi)^{m/2}

  [[nodiscard]] double best_lower() const noexcept {
    return std::max(lower_ball, lower_cyl);
  }
};

[[nodiscard]] inline VolumeBounds volume_bounds(int m, double s) {
  if (m < 1) throw DomainError("volume_bounds: m must be >= 1");
  if (s < 0.0) throw DomainError("volume_bounds: s must be >= 0");
  const double scale = lambda(s) / std::pow(2.0 * kPi, 0.5 * m);
  VolumeBounds b;
  b.upper = scale * kappa(m);
  b.lower_ball = std::pow(kBInfinity, m) * b.upper;
  b.lower_cyl = scale * 2.0 * kappa(m - 1) / std::sqrt(static_cast<double>(m));
  return b;
}

/// lim_{s -> inf} vol_m(G(s)) / s = kappa_{m-1} / (sqrt(m) (2 pi)^{(m-1)/2}).
[[nodiscard]] inline double volume_asymptote(int m) {
  if (m < 1) throw DomainError("volume_asymptote: m must be >= 1");
  return kappa(m - 1) /
         (std::sqrt(static_cast<double>(m)) * std::pow(2.0 * kPi, 0.5 * (m - 1)));
}

// ---------------------------------------------------------------------------
// General Gaussian vectors M (c + xi)

class GaussianVectorSpec {
 public:
  GaussianVectorSpec(Eigen::MatrixXd map, Eigen::VectorXd mean)
      : map_(std::move(map)), mean_(std::move(mean)) {
    if (map_.rows() != map_.cols() || map_.rows() != mean_.size() ||
        map_.rows() < 1) {
      throw DomainError("GaussianVectorSpec: map must be square and match c");
    }
    if (!map_.allFinite() || !mean_.allFinite()) {
      throw DomainError("GaussianVectorSpec: entries must be finite");
    }
    const double det = map_.determinant();
    const double scale = std::pow(std::max(map_.cwiseAbs().maxCoeff(), 1e-300),
                                  static_cast<double>(map_.rows()));
    if (!(std::fabs(det) > 1e-12 * scale)) {
      throw DomainError("GaussianVectorSpec: map is singular");
    }
  }

  static GaussianVectorSpec standard(int m) {
    return {Eigen::MatrixXd::Identity(m, m), Eigen::VectorXd::Zero(m)};
  }

  [[nodiscard]] const Eigen::MatrixXd& map() const noexcept { return map_; }
  [[nodiscard]] const Eigen::VectorXd& mean() const noexcept { return mean_; }
  [[nodiscard]] int dim() const noexcept { return static_cast<int>(map_.rows()); }

 private:
  Eigen::MatrixXd map_;
  Eigen::VectorXd mean_;
};

/// T_c: stretches the c axis by lambda(|c|) and fixes c-perp.
[[nodiscard]] inline Eigen::MatrixXd tc_map(const Eigen::VectorXd& c) {
  const auto m = c.size();
  Eigen::MatrixXd t = Eigen::MatrixXd::Identity(m, m);
  const double s = c.norm();
  if (s == 0.0) return t;
  const Eigen::VectorXd e = c / s;
  t += (lambda(s) - 1.0) * e * e.transpose();
  return t;
}

/// h_{M(G(c))}(u) = h_{G(c)}(M^t u).
[[nodiscard]] inline double support_general(const GaussianVectorSpec& spec,
                                            const Eigen::VectorXd& u) {
  if (u.size() != spec.dim()) {
    throw DomainError("support_general: dimension mismatch");
  }
  const Eigen::VectorXd v = spec.map().transpose() * u;
  const double s = spec.mean().norm();
  if (s == 0.0) return v.norm() / kSqrt2Pi;
  return support_G(s, split_direction(v, spec.mean() / s));
}

// ---------------------------------------------------------------------------
// Ellipsoid sandwich certificate

struct InclusionReport {
  std::int64_t n_dirs = 0;
  double min_ratio_lower = 0.0;  // min h_G / h_ellipsoid
  double max_ratio_upper = 0.0;  // max h_G / h_ellipsoid
  Direction worst_direction;     // attains min_ratio_lower
  std::int64_t n_violations = 0;
  Direction witness;             // first violating direction, if any
  bool passed = true;
};

/// Checks b_inf h_ell <= h_G <= h_ell (absolute slack 1e-12) on `n_dirs`
/// pseudo-random unit directions of R^m, with h_ell the support of
/// T_c(B_m / sqrt(2 pi)). Directions are drawn per chunk from independent
/// streams, so the report is a function of (seed, n_dirs, chunk) only.
[[nodiscard]] inline InclusionReport check_inclusion(int m, double s,
                                                     std::int64_t n_dirs,
                                                     std::uint64_t seed,
                                                     std::int64_t chunk = 4096,
                                                     unsigned threads = 0) {
  if (m < 1) throw DomainError("check_inclusion: m must be >= 1");
  if (s < 0.0) throw DomainError("check_inclusion: s must be >= 0");
  if (n_dirs < 1) throw DomainError("check_inclusion: n_dirs must be >= 1");
  if (chunk < 1) throw DomainError("check_inclusion: chunk must be >= 1");
  constexpr double kSlack = 1e-12;
  const std::int64_t n_chunks = (n_dirs + chunk - 1) / chunk;
  std::vector<InclusionReport> parts(static_cast<std::size_t>(n_chunks));

  for_each_chunk(n_chunks, threads, [&](std::int64_t c) {
    CounterRng rng(seed, static_cast<std::uint64_t>(c));
    InclusionReport r;
    r.min_ratio_lower = std::numeric_limits<double>::infinity();
    r.max_ratio_upper = -std::numeric_limits<double>::infinity();
    const std::int64_t end = std::min(n_dirs, (c + 1) * chunk);
    std::vector<double> g(static_cast<std::size_t>(m));
    for (std::int64_t i = c * chunk; i < end; ++i) {
      double n2 = 0.0;
      do {
        n2 = 0.0;
        for (auto& v : g) {
          v = rng.normal();
          n2 += v * v;
        }
      } while (n2 == 0.0);
      const double n = std::sqrt(n2);
      double rest = 0.0;
      for (int k = 1; k < m; ++k) rest += g[k] * g[k];
      const Direction u{g[0] / n, std::sqrt(rest) / n};
      const double hg = support_G(s, u);
      const double he = support_Tc_ellipsoid(s, u);
      const double ratio = hg / he;
      ++r.n_dirs;
      if (ratio < r.min_ratio_lower) {
        r.min_ratio_lower = ratio;
        r.worst_direction = u;
      }
      r.max_ratio_upper = std::max(r.max_ratio_upper, ratio);
      if (hg > he + kSlack || hg < kBInfinity * he - kSlack) {
        if (r.n_violations == 0) r.witness = u;
        ++r.n_violations;
      }
    }
    parts[static_cast<std::size_t>(c)] = r;
  });

  InclusionReport out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const InclusionReport& p = parts[i];
    out.n_dirs += p.n_dirs;
    if (p.min_ratio_lower < out.min_ratio_lower) {
      out.min_ratio_lower = p.min_ratio_lower;
      out.worst_direction = p.worst_direction;
    }
    out.max_ratio_upper = std::max(out.max_ratio_upper, p.max_ratio_upper);
    if (out.n_violations == 0 && p.n_violations > 0) out.witness = p.witness;
    out.n_violations += p.n_violations;
  }
  out.passed = out.n_violations == 0;
  return out;
}

}  // namespace gzonoid

#endif  // GZONOID_ZONOID_GEOMETRY_HPP
