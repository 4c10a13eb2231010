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

// Acceptance suite: one PASS/FAIL line per criterion. Tolerances, grids and
// runtime limits are fixed here and must not be relaxed to make a run pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "gzonoid/gzonoid.hpp"
#include "gzonoid_cli.hpp"

namespace gz = gzonoid;

namespace {

struct Verdict {
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail += (detail.empty() ? "" : "; ") + std::string("violated: ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

struct Criterion {
  int id;
  const char* title;
  double max_seconds;  // <= 0: no runtime limit
  std::function<Verdict()> body;
};

std::string fmt(const char* format, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

gz::MCConfig mc(std::int64_t n, std::uint64_t seed) {
  gz::MCConfig c;
  c.samples = n;
  c.seed = seed;
  return c;
}

const std::vector<double> kSGrid = {0.0, 0.5, 1.0, 2.0, 5.0, 100.0};

Verdict ac1_binfty() {
  Verdict v;
  const auto b = gz::compute_b_infinity(1e-10);
  v.require(b.value > 0.905 && b.value < 0.915, "b_inf in (0.905, 0.915)");
  double best = 1e300;
  const int n = 1'000'000;
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * gz::kPi * i / (n - 1);
    best = std::min(best, gz::phi_inf(std::cos(t), std::sin(t)));
  }
  v.require(std::fabs(best - b.value) <= 1e-8, "grid scan agrees to 1e-8");
  v.note(fmt("b_inf=%.15f", b.value) + fmt(" |grid-golden|=%.2e", std::fabs(best - b.value)));
  return v;
}

Verdict ac2_sandwich() {
  Verdict v;
  double worst = 1e300;
  for (int m = 1; m <= 6; ++m) {
    for (double s : kSGrid) {
      const auto r = gz::check_inclusion(m, s, 10'000, 1000 + m);
      v.require(r.passed, "inclusion m=" + std::to_string(m) + fmt(" s=%g", s));
      worst = std::min(worst, r.min_ratio_lower);
    }
  }
  v.note("36 cases x 1e4 directions" + fmt(", min h_G/h_ell=%.6f", worst));
  return v;
}

Verdict ac3_volume_bounds() {
  Verdict v;
  // The quadrature is run at relative tolerance 1e-10; comparisons allow that
  // much relative rounding (G(0) is the ellipsoid itself, so the upper bound
  // is attained).
  constexpr double kQuad = 1e-9;
  for (int m = 1; m <= 4; ++m) {
    for (double s : kSGrid) {
      const double vol = gz::volume(gz::RevolutionBody::gaussian_zonoid(s, m), 1e-10);
      const auto b = gz::volume_bounds(m, s);
      v.require(vol >= std::max(b.lower_ball, b.lower_cyl) * (1 - kQuad) && vol <= b.upper * (1 + kQuad),
                "bounds m=" + std::to_string(m) + fmt(" s=%g", s));
    }
  }
  double worst = 0.0;
  for (int m = 1; m <= 6; ++m) {
    const double vol = gz::volume(gz::RevolutionBody(gz::BodyKind::GtildeInfinity, 0.0, m), 1e-12);
    const double expect = 2.0 * gz::kappa(m - 1) / std::sqrt(static_cast<double>(m));
    worst = std::max(worst, std::fabs(vol - expect));
    v.require(std::fabs(vol - expect) <= 1e-8, "vol(Gtilde_inf) m=" + std::to_string(m));
  }
  v.note(fmt("max |vol(Gtilde_inf) - 2 kappa_{m-1}/sqrt m| = %.2e", worst));
  return v;
}

Verdict ac4_asymptote() {
  Verdict v;
  for (int m : {2, 3}) {
    const double slope = gz::volume(gz::RevolutionBody::gaussian_zonoid(50.0, m), 1e-10) / 50.0;
    const double expect = gz::kappa(m - 1) / (std::sqrt(static_cast<double>(m)) *
                                              std::pow(2 * gz::kPi, 0.5 * (m - 1)));
    const double rel = std::fabs(slope / expect - 1);
    v.require(rel <= 0.01, "asymptote m=" + std::to_string(m));
    v.note("m=" + std::to_string(m) + fmt(" rel=%.2e", rel));
  }
  return v;
}

Verdict ac5_determinants() {
  Verdict v;
  // (a) m = k = 1.
  Eigen::VectorXd c1(1);
  c1 << 3.0;
  const auto a = gz::mc_expected_absdet(
      gz::FrameSpec::iid(1, 1, gz::GaussianVectorSpec(Eigen::MatrixXd::Identity(1, 1), c1)), mc(1'000'000, 51));
  const double folded = gz::folded_abs_moment({3.0, 1.0});
  v.require(std::fabs(a.mean - folded) <= 4 * a.std_error, "(a) 1x1 vs folded moment");
  v.note(fmt("(a) z=%.2f", (a.mean - folded) / a.std_error));
  // (b) 2 x 2 iid standard centred.
  const auto b = gz::mc_expected_absdet(gz::FrameSpec::iid(2, 2, gz::GaussianVectorSpec::standard(2)),
                                        mc(1'000'000, 52));
  v.require(std::fabs(b.mean - 1.0) <= 4 * b.std_error, "(b) 2x2 standard = 1");
  v.note(fmt("(b) z=%.2f", (b.mean - 1.0) / b.std_error));
  // (c) centred frames, m = 2 against the exact planar mixed area.
  Eigen::Matrix2d m2;
  m2 << 1.0, 0.4, -0.3, 1.7;
  const gz::GaussianVectorSpec col2(m2, Eigen::Vector2d::Zero());
  for (int k : {1, 2}) {
    const auto e = gz::mc_expected_absdet(gz::FrameSpec::iid(2, k, col2), mc(1'000'000, 53 + k));
    const gz::EllipsoidSpec ell{m2};
    const double mv = gz::mixed_area_2d(ell.planar_support(),
                                        k == 2 ? ell.planar_support() : gz::EllipsoidSpec::ball(2).planar_support());
    const double target = gz::alpha_coeff(2, k) * mv;
    v.require(std::fabs(e.mean - target) <= 4 * e.std_error, "(c) m=2 k=" + std::to_string(k));
    v.note("(c) m=2 k=" + std::to_string(k) + fmt(" z=%.2f", (e.mean - target) / e.std_error));
  }
  // m = 3: Monte Carlo against Monte Carlo with pooled standard error.
  Eigen::Matrix3d m3;
  m3 << 1.0, 0.2, 0.0, 0.0, 0.8, 0.5, 0.3, 0.0, 1.4;
  const gz::GaussianVectorSpec col3(m3, Eigen::Vector3d::Zero());
  for (int k : {1, 2, 3}) {
    const auto e = gz::mc_expected_absdet(gz::FrameSpec::iid(3, k, col3), mc(1'000'000, 60 + k));
    const auto mv = gz::mv_ellipsoids_mc(std::vector<gz::EllipsoidSpec>(k, gz::EllipsoidSpec{m3}), 3,
                                         mc(1'000'000, 70 + k));
    const double alpha = gz::alpha_coeff(3, k);
    const double se = std::hypot(e.std_error, alpha * mv.std_error);
    v.require(std::fabs(e.mean - alpha * mv.mean) <= 4 * se, "(c) m=3 k=" + std::to_string(k));
    v.note("(c) m=3 k=" + std::to_string(k) + fmt(" z=%.2f", (e.mean - alpha * mv.mean) / se));
  }
  return v;
}

Verdict ac6_determinant_bounds() {
  Verdict v;
  const double b2 = gz::kBInfinity * gz::kBInfinity;
  for (double s : {0.5, 2.0, 10.0}) {
    const gz::GaussianVectorSpec col(Eigen::MatrixXd::Identity(2, 2), Eigen::Vector2d(s, 0.0));
    const auto r = gz::check_randet_bounds(gz::FrameSpec::iid(2, 2, col), mc(1'000'000, 80 + static_cast<int>(s)));
    const double se = r.combined_se / r.upper;
    v.require(r.ratio >= b2 - 4 * se && r.ratio <= 1 + 4 * se, fmt("ratio at c=%g e1", s));
    v.note(fmt("c=%g", s) + fmt(": ratio=%.4f", r.ratio));
  }
  return v;
}

Verdict ac7_concentration() {
  Verdict v;
  const auto f = gz::ScalarFieldSpec::by_id("sin2t", 1);
  const double limit = 4 * std::erf(1 / std::sqrt(2.0));
  const double n3 = gz::n_r_tau_integral(f, {3e-3, 3e-3});
  v.require(std::fabs(n3 / limit - 1) <= 0.02, "integral at tau=3e-3 within 2%");
  v.note(fmt("n(3e-3)=%.6f", n3) + fmt(" limit=%.6f", limit));
  const auto e = gz::mc_zero_count_circle(f, {1e-2, 1e-2}, mc(100'000, 71));
  const double n2 = gz::n_r_tau_integral(f, {1e-2, 1e-2});
  v.require(std::fabs(e.mean - n2) <= 4 * e.std_error, "MC vs integral at tau=1e-2");
  v.require(std::fabs(e.mean - limit) <= 4 * e.std_error, "MC vs limit at tau=1e-2");
  v.note(fmt("mc=%.4f", e.mean) + fmt("+-%.4f", e.std_error));
  // Regime check r = tau^s at tau -> 0.
  const auto thin = gz::RadiusRule::power(1.0, 2.0);
  const auto wide = gz::RadiusRule::power(1.0, 0.5);
  double prev = 1e300;
  for (double tau : {1e-2, 1e-3, 1e-4}) {
    const double n = gz::n_r_tau_integral(f, {tau, thin.radius(tau)});
    v.require(n < prev, fmt("s=2 decreasing at tau=%g", tau));
    prev = n;
  }
  const double full = gz::concentration_limit(1, wide.limit_alpha(), 4.0);
  v.require(prev <= 0.02 * full && thin.limit_alpha() == 0.0, "s=2 limit 0");
  const double nw = gz::n_r_tau_integral(f, {1e-4, wide.radius(1e-4)});
  v.require(std::fabs(nw / 4.0 - 1) <= 0.02 && full == 4.0, "s=0.5 limit 4 within 2%");
  v.note(fmt("s=2: n(1e-4)=%.2e", prev) + fmt(", s=0.5: n(1e-4)=%.6f", nw));
  return v;
}

Verdict ac8_comparison_field() {
  Verdict v;
  const auto r1 = gz::comparison_field_sandwich(gz::ScalarFieldSpec::by_id("sin2t", 1), 0.1, {}, 0.3, 1000);
  v.require(r1.passed && r1.n_points >= 1000, "m=1 sin2t, 1000 points");
  const auto r2 = gz::comparison_field_sandwich(gz::ScalarFieldSpec::cos_mix(), 0.05, {}, 0.15, 32);
  v.require(r2.passed && r2.n_points >= 1000, "m=2 cos_mix, 32x32 points");
  v.note(fmt("m=2 ratio in [%.4f", r2.min_ratio) + fmt(", %.4f]", r2.max_ratio) +
         fmt(" vs b_inf^2=%.4f", gz::kBInfinity * gz::kBInfinity) +
         fmt("; counts N=%.4f", r2.count) + fmt(" <= N~=%.4f", r2.comparison_count));
  return v;
}

Verdict ac9_monotonicity() {
  Verdict v;
  int checked = 0;
  for (int k = 1; k < 16; ++k) {
    if (k == 8) continue;  // x = 0
    const gz::Direction u = gz::Direction::from_angle(gz::kPi * k / 16);
    double prev = gz::support_Gtilde(0.1, u);
    for (int i = 2; i <= 100; ++i) {
      const double h = gz::support_Gtilde(0.1 * i, u);
      if (!(h - prev < -1e-12)) {
        v.require(false, "Gtilde decreasing at k=" + std::to_string(k) + fmt(" s=%g", 0.1 * i));
      }
      prev = h;
      ++checked;
    }
    for (double s : {0.5, 1.0, 3.0}) {
      prev = gz::support_G(0.0, u);
      for (int i = 1; i <= 100; ++i) {
        const double h = gz::support_G(0.04 * i * s, u);
        if (!(h - prev > 1e-12)) {
          v.require(false, "G(t s) increasing at k=" + std::to_string(k) + fmt(" t=%g", 0.04 * i));
        }
        prev = h;
        ++checked;
      }
    }
  }
  v.note(std::to_string(checked) + " consecutive pairs");
  return v;
}

Verdict ac10_reproducibility() {
  Verdict v;
  const std::vector<std::vector<std::string>> runs = {
      {"binfty", "--check"},
      {"zonoid", "support", "--m", "3", "--s", "0,2"},
      {"zonoid", "profile", "--s", "0,1,2,3"},
      {"zonoid", "volume", "--m", "3", "--s", "0,1,5"},
      {"zonoid", "inclusion", "--m", "4", "--s", "2", "--n", "5000", "--seed", "3"},
      {"det", "mc", "--m", "3", "--k", "2", "--c", "1", "--samples", "100000", "--seed", "8"},
      {"det", "bounds", "--m", "3", "--samples", "100000", "--seed", "8"},
      {"det", "check", "--m", "2", "--c", "2", "--samples", "100000", "--seed", "8", "--format", "csv"},
      {"grf", "integral", "--tau", "0.1,0.01"},
      {"grf", "coarea", "--m", "2", "--field", "sin_offset", "--tau", "0.1,0.01"},
      {"grf", "mc", "--tau", "0.05", "--samples", "20000", "--seed", "2"},
      {"grf", "limit", "--m", "2", "--alpha", "1", "--volz0", "6.283185307179586"},
      {"grf", "sandwich", "--m", "2", "--field", "cos_mix", "--tau", "0.2", "--points", "16"},
  };
  for (const auto& args : runs) {
    std::ostringstream o1, o2, e1, e2;
    const int c1 = gz::cli::run(args, o1, e1);
    std::vector<std::string> threaded = args;
    threaded.insert(threaded.end(), {"--threads", "2"});
    const int c2 = gz::cli::run(threaded, o2, e2);
    std::string name;
    for (const auto& a : args) name += a + " ";
    v.require(c1 == 0 && c2 == 0, "exit 0: " + name + e1.str());
    v.require(!o1.str().empty() && o1.str() == o2.str(), "byte-identical: " + name);
    // Re-run from the echoed manifest when the output is JSON.
    if (o1.str().front() == '{') {
      const auto manifest = gz::cli::Json::parse(o1.str())["manifest"];
      const auto path = std::string("acceptance_manifest.json");
      {
        std::ofstream(path) << manifest.dump(2);
      }
      std::ostringstream o3, e3;
      const int c3 = gz::cli::run({"--manifest", path}, o3, e3);
      std::remove(path.c_str());
      v.require(c3 == 0 && o3.str() == o1.str(), "manifest replay: " + name);
    }
  }
  v.note(std::to_string(runs.size()) + " commands");
  return v;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "b_inf reproduction", 1.0, ac1_binfty},
      {2, "ellipsoid sandwich suite", 10.0, ac2_sandwich},
      {3, "volume bounds and vol(Gtilde_inf)", 0.0, ac3_volume_bounds},
      {4, "large-mean volume asymptote", 0.0, ac4_asymptote},
      {5, "determinant identities", 60.0, ac5_determinants},
      {6, "determinant bounds", 30.0, ac6_determinant_bounds},
      {7, "zero-set concentration", 120.0, ac7_concentration},
      {8, "comparison-field sandwich", 0.0, ac8_comparison_field},
      {9, "monotonicity in the mean", 0.0, ac9_monotonicity},
      {10, "CLI reproducibility", 0.0, ac10_reproducibility},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.body();
    } catch (const std::exception& e) {
      v.passed = false;
      v.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.max_seconds > 0 && secs > c.max_seconds) {
      v.passed = false;
      v.note(fmt("runtime over %.0f s", c.max_seconds));
    }
    if (!v.passed) ++failures;
    std::printf("[%s] AC%d %s (%.2f s): %s\n", v.passed ? "PASS" : "FAIL", c.id, c.title, secs,
                v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
