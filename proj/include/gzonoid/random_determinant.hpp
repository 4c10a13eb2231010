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

// Expected absolute determinants of Gaussian frames and their mixed-volume
// bounds.
//
// For independent columns X_i = M_i (c_i + xi_i) of an m x k frame Gamma,
//
//   b_inf^k alpha_{m,k} MV(E_1..E_k, B_m[m-k]) <= E sqrt(det(Gamma^t Gamma))
//                                               <= alpha_{m,k} MV(E_1..E_k, B_m[m-k])
//
// with E_i = M_i T_{c_i}(B_m). Mixed volumes are normalized so that
// MV(K, ..., K) = vol_m(K).
//
// Mixed volumes of ellipsoids come from the centered-Gaussian identity: if
// Y_i = A_i xi_i then E|det(Y_1..Y_k, xi_{k+1}..xi_m)| = alpha_{m,m}
// MV(A_1 B_m, ..., A_k B_m, B_m[m-k]), because the Vitale zonoid of A xi is
// A B_m / sqrt(2 pi) and that of a standard column is B_m / sqrt(2 pi). In
// the plane the exact value is available from support functions instead.

#ifndef GZONOID_RANDOM_DETERMINANT_HPP
#define GZONOID_RANDOM_DETERMINANT_HPP

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gzonoid/errors.hpp"
#include "gzonoid/monte_carlo.hpp"
#include "gzonoid/rng.hpp"
#include "gzonoid/scalar_kernels.hpp"
#include "gzonoid/zonoid_geometry.hpp"

namespace gzonoid {

/// m x k frame with independent Gaussian columns M_i (c_i + xi_i).
struct FrameSpec {
  int m = 0;
  std::vector<GaussianVectorSpec> columns;

  [[nodiscard]] int k() const noexcept { return static_cast<int>(columns.size()); }

  void validate() const {
    if (m < 1) throw DomainError("FrameSpec: m must be >= 1");
    if (columns.empty() || k() > m) {
      throw DomainError("FrameSpec: need 1 <= k <= m columns");
    }
    for (const auto& c : columns) {
      if (c.dim() != m) throw DomainError("FrameSpec: column dimension != m");
    }
  }

  /// k iid columns M (c + xi).
  static FrameSpec iid(int m, int k, const GaussianVectorSpec& column) {
    FrameSpec f{m, std::vector<GaussianVectorSpec>(static_cast<std::size_t>(k), column)};
    f.validate();
    return f;
  }
};

/// alpha_{m,k} = m! / ((2 pi)^{k/2} (m-k)! kappa_{m-k}).
[[nodiscard]] inline double alpha_coeff(int m, int k) {
  if (k < 1 || m < 1) throw DomainError("alpha_coeff: need m, k >= 1");
  if (k > m) throw DomainError("alpha_coeff: k must be <= m");
  return factorial(m) /
         (std::pow(2.0 * kPi, 0.5 * k) * factorial(m - k) * kappa(m - k));
}

namespace detail {

/// k-volume of the parallelotope spanned by the columns: prod |R_ii| of a
/// Householder QR.
class FrameVolume {
 public:
  FrameVolume(int m, int k) : qr_(m, k) {}

  double operator()(const Eigen::MatrixXd& frame) {
    if (frame.cols() == 1) return frame.col(0).norm();
    qr_.compute(frame);
    return qr_.matrixQR().diagonal().cwiseAbs().prod();
  }

 private:
  Eigen::HouseholderQR<Eigen::MatrixXd> qr_;
};

}  // namespace detail

/// Monte Carlo estimate of E sqrt(det(Gamma^t Gamma)).
[[nodiscard]] inline EstimateWithCI mc_expected_absdet(const FrameSpec& spec,
                                                       const MCConfig& cfg) {
  spec.validate();
  validate(cfg);
  const int m = spec.m;
  const int k = spec.k();
  struct Sampler {
    const FrameSpec* spec;
    Eigen::MatrixXd frame;
    Eigen::VectorXd noise;
    detail::FrameVolume vol;
    double operator()(CounterRng& rng) {
      for (int i = 0; i < frame.cols(); ++i) {
        const auto& col = spec->columns[static_cast<std::size_t>(i)];
        for (auto& z : noise) z = rng.normal();
        frame.col(i).noalias() = col.map() * (col.mean() + noise);
      }
      return vol(frame);
    }
  };
  return run_monte_carlo(
      cfg, Sampler{&spec, Eigen::MatrixXd(m, k), Eigen::VectorXd(m), {m, k}});
}

/// Support function of a planar convex body, evaluated at a unit vector.
using PlanarSupport = std::function<double(const Eigen::Vector2d&)>;

namespace detail {

/// Fourier coefficients of a support function sampled at n equispaced angles.
struct FourierSeries {
  double a0 = 0.0;
  std::vector<double> a;  // a[k-1] multiplies cos(k theta), k = 1..n/2
  std::vector<double> b;

  // area = (1/2) int (h^2 - h'^2) dtheta, spectrally exact for the
  // trigonometric interpolant.
  [[nodiscard]] double area() const {
    double total = kPi * a0 * a0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double kk = static_cast<double>(j + 1);
      total += 0.5 * kPi * (1.0 - kk * kk) * (a[j] * a[j] + b[j] * b[j]);
    }
    return total;
  }

  [[nodiscard]] FourierSeries operator+(const FourierSeries& o) const {
    FourierSeries r = *this;
    r.a0 += o.a0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      r.a[j] += o.a[j];
      r.b[j] += o.b[j];
    }
    return r;
  }
};

inline FourierSeries fourier_series(const PlanarSupport& h, int n) {
  std::vector<double> c(static_cast<std::size_t>(n)), s(static_cast<std::size_t>(n)),
      v(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = 2.0 * kPi * j / n;
    c[j] = std::cos(t);
    s[j] = std::sin(t);
    v[j] = h(Eigen::Vector2d(c[j], s[j]));
    if (!std::isfinite(v[j])) throw NumericalError("mixed_area_2d: non-finite support");
  }
  FourierSeries f;
  const int half = n / 2;
  f.a.assign(static_cast<std::size_t>(half), 0.0);
  f.b.assign(static_cast<std::size_t>(half), 0.0);
  for (int j = 0; j < n; ++j) f.a0 += v[j];
  f.a0 /= n;
  for (int kk = 1; kk <= half; ++kk) {
    double sa = 0.0, sb = 0.0;
    for (int j = 0; j < n; ++j) {
      const auto idx = static_cast<std::size_t>((static_cast<long>(kk) * j) % n);
      sa += v[j] * c[idx];
      sb += v[j] * s[idx];
    }
    // The Nyquist mode is counted once.
    const double norm = (2 * kk == n) ? 1.0 / n : 2.0 / n;
    f.a[kk - 1] = sa * norm;
    f.b[kk - 1] = (2 * kk == n) ? 0.0 : sb * norm;
  }
  return f;
}

}  // namespace detail

/// Mixed area MV(K, L) = (area(K + L) - area(K) - area(L)) / 2 of two planar
/// convex bodies given by smooth support functions, so that MV(K, K) =
/// area(K). Areas use the trapezoid rule on `n_nodes` equispaced angles.
[[nodiscard]] inline double mixed_area_2d(const PlanarSupport& hK,
                                          const PlanarSupport& hL,
                                          int n_nodes = 256) {
  if (n_nodes < 64) throw DomainError("mixed_area_2d: n_nodes must be >= 64");
  if (n_nodes % 2 != 0) ++n_nodes;
  const auto fk = detail::fourier_series(hK, n_nodes);
  const auto fl = detail::fourier_series(hL, n_nodes);
  const double ak = fk.area();
  const double al = fl.area();
  const double akl = (fk + fl).area();
  constexpr double kTiny = -1e-12;
  if (ak < kTiny || al < kTiny || akl < kTiny) {
    throw NumericalError("mixed_area_2d: negative area (input not convex)");
  }
  return 0.5 * (akl - ak - al);
}

/// Ellipsoid A(B_m).
struct EllipsoidSpec {
  Eigen::MatrixXd shape;

  [[nodiscard]] int dim() const noexcept { return static_cast<int>(shape.rows()); }
  [[nodiscard]] double support(const Eigen::VectorXd& u) const {
    return (shape.transpose() * u).norm();
  }
  [[nodiscard]] PlanarSupport planar_support() const {
    if (dim() != 2) throw DomainError("EllipsoidSpec: planar support needs m = 2");
    Eigen::Matrix2d a = shape;
    return [a](const Eigen::Vector2d& u) { return (a.transpose() * u).norm(); };
  }

  /// M T_c (B_m): the outer ellipsoid attached to the column M (c + xi).
  static EllipsoidSpec outer(const GaussianVectorSpec& column) {
    return {column.map() * tc_map(column.mean())};
  }
  static EllipsoidSpec ball(int m) { return {Eigen::MatrixXd::Identity(m, m)}; }
};

/// Monte Carlo estimate of MV(E_1, ..., E_k, B_m[m-k]) via centered Gaussian
/// columns A_i xi_i completed by m - k standard columns.
[[nodiscard]] inline EstimateWithCI mv_ellipsoids_mc(
    const std::vector<EllipsoidSpec>& ellipsoids, int m, const MCConfig& cfg) {
  const int k = static_cast<int>(ellipsoids.size());
  if (m < 1 || k < 1 || k > m) throw DomainError("mv_ellipsoids_mc: need 1 <= k <= m");
  for (const auto& e : ellipsoids) {
    if (e.dim() != m || e.shape.cols() != m) {
      throw DomainError("mv_ellipsoids_mc: ellipsoid dimension != m");
    }
  }
  validate(cfg);
  struct Sampler {
    const std::vector<EllipsoidSpec>* ells;
    Eigen::MatrixXd frame;
    Eigen::VectorXd noise;
    detail::FrameVolume vol;
    double operator()(CounterRng& rng) {
      const auto k = static_cast<Eigen::Index>(ells->size());
      for (Eigen::Index i = 0; i < frame.cols(); ++i) {
        for (auto& z : noise) z = rng.normal();
        if (i < k) {
          frame.col(i).noalias() = (*ells)[static_cast<std::size_t>(i)].shape * noise;
        } else {
          frame.col(i) = noise;
        }
      }
      return vol(frame);
    }
  };
  EstimateWithCI e = run_monte_carlo(
      cfg, Sampler{&ellipsoids, Eigen::MatrixXd(m, m), Eigen::VectorXd(m), {m, m}});
  const double alpha = alpha_coeff(m, m);
  e.mean /= alpha;
  e.std_error /= alpha;
  return e;
}

struct RandetBounds {
  double mixed_volume = 0.0;     // MV(E_1..E_k, B_m[m-k])
  double mixed_volume_se = 0.0;  // 0 when computed exactly
  std::string mv_method;         // "exact-1d", "exact-2d" or "monte-carlo"
  double alpha = 0.0;
  double lower = 0.0;            // b_inf^k alpha MV
  double upper = 0.0;            // alpha MV
};

struct RandetBoundsReport {
  EstimateWithCI estimate;     // E sqrt(det(Gamma^t Gamma))
  double mixed_volume = 0.0;   // MV(E_1..E_k, B_m[m-k])
  double mixed_volume_se = 0.0;  // 0 when computed exactly
  std::string mv_method;       // "exact-1d", "exact-2d" or "monte-carlo"
  double alpha = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double combined_se = 0.0;
  double ratio = 0.0;          // estimate / upper
  bool passed = false;
};

namespace detail {

inline void finish_verdict(RandetBoundsReport& r, double b_power) {
  r.upper = r.alpha * r.mixed_volume;
  r.lower = b_power * r.upper;
  r.combined_se = std::hypot(r.estimate.std_error, r.alpha * r.mixed_volume_se);
  r.ratio = r.estimate.mean / r.upper;
  r.passed = r.estimate.mean >= r.lower - 4.0 * r.combined_se &&
             r.estimate.mean <= r.upper + 4.0 * r.combined_se;
}

}  // namespace detail

/// The two-sided mixed-volume bound b_inf^k alpha MV <= E|det| <= alpha MV.
/// The mixed volume is exact for m <= 2 and estimated by Monte Carlo (on an
/// independent seed derived from cfg.seed) otherwise.
[[nodiscard]] inline RandetBounds randet_bounds(const FrameSpec& spec,
                                                const MCConfig& cfg) {
  spec.validate();
  const int m = spec.m;
  const int k = spec.k();
  std::vector<EllipsoidSpec> ells;
  ells.reserve(static_cast<std::size_t>(k));
  for (const auto& col : spec.columns) ells.push_back(EllipsoidSpec::outer(col));

  RandetBounds b;
  b.alpha = alpha_coeff(m, k);
  if (m == 1) {
    b.mixed_volume = 2.0 * std::fabs(ells.front().shape(0, 0));
    b.mv_method = "exact-1d";
  } else if (m == 2) {
    const PlanarSupport first = ells[0].planar_support();
    const PlanarSupport second =
        k == 2 ? ells[1].planar_support() : EllipsoidSpec::ball(2).planar_support();
    b.mixed_volume = mixed_area_2d(first, second, 512);
    b.mv_method = "exact-2d";
  } else {
    MCConfig mv_cfg = cfg;
    mv_cfg.seed = splitmix64(cfg.seed ^ 0x6D76'6D63ULL);
    const auto mv = mv_ellipsoids_mc(ells, m, mv_cfg);
    b.mixed_volume = mv.mean;
    b.mixed_volume_se = mv.std_error;
    b.mv_method = "monte-carlo";
  }
  b.upper = b.alpha * b.mixed_volume;
  b.lower = std::pow(kBInfinity, k) * b.upper;
  return b;
}

/// Monte Carlo estimate of E sqrt(det(Gamma^t Gamma)) checked against
/// [b_inf^k, 1] * alpha_{m,k} MV within 4 combined standard errors.
[[nodiscard]] inline RandetBoundsReport check_randet_bounds(const FrameSpec& spec,
                                                            const MCConfig& cfg) {
  const RandetBounds b = randet_bounds(spec, cfg);
  RandetBoundsReport r;
  r.alpha = b.alpha;
  r.mixed_volume = b.mixed_volume;
  r.mixed_volume_se = b.mixed_volume_se;
  r.mv_method = b.mv_method;
  r.estimate = mc_expected_absdet(spec, cfg);
  detail::finish_verdict(r, std::pow(kBInfinity, spec.k()));
  return r;
}

struct IidSquareBounds {
  double lower = 0.0;
  double upper = 0.0;
  double asymptote = 0.0;  // lim E|det Gamma| / |c|
};

/// Closed-form bounds for E|det Gamma| with m iid columns M (c + xi), |c| = s:
/// m! |det M| times the cylinder lower bound, the ellipsoid upper bound and the
/// large-mean slope of vol_m(G(c)).
[[nodiscard]] inline IidSquareBounds iid_square_bounds(int m, const Eigen::MatrixXd& map,
                                                       double s) {
  if (m < 1) throw DomainError("iid_square_bounds: m must be >= 1");
  if (s < 0.0) throw DomainError("iid_square_bounds: s must be >= 0");
  const GaussianVectorSpec check(map, Eigen::VectorXd::Zero(map.rows()));
  if (check.dim() != m) throw DomainError("iid_square_bounds: map must be m x m");
  const double scale = factorial(m) * std::fabs(map.determinant());
  const VolumeBounds vb = volume_bounds(m, s);
  return {scale * vb.lower_cyl, scale * vb.upper, scale * volume_asymptote(m)};
}

}  // namespace gzonoid

#endif  // GZONOID_RANDOM_DETERMINANT_HPP
