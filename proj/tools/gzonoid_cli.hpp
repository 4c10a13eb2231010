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

#ifndef GZONOID_TOOLS_GZONOID_CLI_HPP
#define GZONOID_TOOLS_GZONOID_CLI_HPP

// Command-line front end. Every command is described by a parameter schema;
// parameters come from (in increasing priority) schema defaults, the
// "params" block of a JSON manifest, and command-line flags. Output is JSON
// (one object) or CSV (header + rows) and is a pure function of the resolved
// manifest, so re-running with the same manifest reproduces it byte for byte.
//
// Exit codes: 0 success / PASS, 1 check FAIL, 2 usage or manifest error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gzonoid/gzonoid.hpp"

namespace gzonoid::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Raised for malformed manifests and parameter values (exit code 2).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Number formatting and parsing.

/// Shortest round-trip decimal form; "inf"/"-inf" for infinities, "" for NaN.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// JSON cannot hold non-finite numbers: infinities become strings, NaN null.
inline Json number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

inline double parse_real(const std::string& text, const std::string& key) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }),
          t.end());
  if (t == "inf" || t == "+inf" || t == "infinity") return kInfinity;
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
    throw UsageError("parameter '" + key + "': cannot parse '" + text + "' as a number");
  }
  return v;
}

// ---------------------------------------------------------------------------
// Parameter schema.

enum class ParamType { Int, Real, RealOrInf, Text, RealList, Bool, Object };

struct ParamDef {
  std::string key;
  ParamType type;
  Json fallback;  // null = optional without default
  std::string help;
};

/// Resolved parameters of one invocation.
class Params {
 public:
  explicit Params(Json values) : values_(std::move(values)) {}

  [[nodiscard]] bool has(const std::string& key) const {
    return values_.contains(key) && !values_.at(key).is_null();
  }
  [[nodiscard]] std::int64_t integer(const std::string& key) const {
    return values_.at(key).get<std::int64_t>();
  }
  [[nodiscard]] double real(const std::string& key) const {
    const auto& v = values_.at(key);
    if (v.is_string()) return parse_real(v.get<std::string>(), key);
    return v.get<double>();
  }
  [[nodiscard]] std::string text(const std::string& key) const {
    return values_.at(key).get<std::string>();
  }
  [[nodiscard]] bool flag(const std::string& key) const { return values_.at(key).get<bool>(); }
  [[nodiscard]] std::vector<double> list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& v : values_.at(key)) {
      out.push_back(v.is_string() ? parse_real(v.get<std::string>(), key) : v.get<double>());
    }
    return out;
  }
  [[nodiscard]] const Json& raw(const std::string& key) const { return values_.at(key); }
  [[nodiscard]] const Json& all() const noexcept { return values_; }

 private:
  Json values_;
};

/// Converts a manifest value or a flag string to the canonical JSON form of
/// its parameter type.
inline Json canonical_value(const ParamDef& def, const Json& v) {
  auto fail = [&](const std::string& what) {
    return UsageError("parameter '" + def.key + "': " + what);
  };
  if (v.is_null()) return nullptr;
  switch (def.type) {
    case ParamType::Int: {
      if (v.is_number_integer()) return v.get<std::int64_t>();
      if (v.is_number_float()) {
        const double d = v.get<double>();
        if (d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
      }
      if (v.is_string()) {
        const std::string s = v.get<std::string>();
        std::int64_t out = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size() && !s.empty()) return out;
        // Accept integral values in floating notation such as 1e6.
        const double d = parse_real(s, def.key);
        if (d == std::floor(d) && std::fabs(d) < 9e15) return static_cast<std::int64_t>(d);
      }
      throw fail("expected an integer");
    }
    case ParamType::Real: {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) {
        const double d = parse_real(v.get<std::string>(), def.key);
        if (!std::isfinite(d)) throw fail("expected a finite number");
        return d;
      }
      throw fail("expected a number");
    }
    case ParamType::RealOrInf: {
      if (v.is_number()) return v.get<double>();
      if (v.is_string()) return number(parse_real(v.get<std::string>(), def.key));
      throw fail("expected a number or \"inf\"");
    }
    case ParamType::Text:
      if (v.is_string()) return v;
      throw fail("expected a string");
    case ParamType::RealList: {
      Json out = Json::array();
      if (v.is_array()) {
        for (const auto& x : v) {
          if (x.is_number()) {
            out.push_back(x.get<double>());
          } else if (x.is_string()) {
            out.push_back(number(parse_real(x.get<std::string>(), def.key)));
          } else {
            throw fail("expected a list of numbers");
          }
        }
      } else if (v.is_number()) {
        out.push_back(v.get<double>());
      } else if (v.is_string()) {
        std::stringstream ss(v.get<std::string>());
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(number(parse_real(item, def.key)));
      } else {
        throw fail("expected a list of numbers");
      }
      if (out.empty()) throw fail("list must not be empty");
      return out;
    }
    case ParamType::Bool:
      if (v.is_boolean()) return v;
      throw fail("expected true or false");
    case ParamType::Object:
      if (v.is_string()) {
        try {
          return Json::parse(v.get<std::string>());
        } catch (const Json::parse_error&) {
          throw fail("flag value is not valid JSON");
        }
      }
      return v;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Command results.

struct Outcome {
  Json summary = Json::object();  // scalar results
  std::vector<Json> rows;         // table results (flat objects)
  bool failed = false;            // a check command reported FAIL
};

struct Context {
  Params params;
  std::uint64_t seed = 0;
  std::int64_t samples = 0;
  unsigned threads = 0;
};

struct CommandDef {
  std::string group;  // "" for top-level commands
  std::string name;
  std::string help;
  std::vector<ParamDef> params;
  std::int64_t default_samples = 0;  // 0: the command takes no sample count
  bool uses_seed = false;
  std::string default_format = "json";
  std::function<Outcome(const Context&)> run;

  [[nodiscard]] std::string id() const { return group.empty() ? name : group + " " + name; }
};

// ---------------------------------------------------------------------------
// Command implementations.

namespace detail {

inline const char* verdict(bool passed) { return passed ? "PASS" : "FAIL"; }

inline BodyKind body_kind(const std::string& name) {
  if (name == "G") return BodyKind::GOfC;
  if (name == "Gtilde") return BodyKind::GtildeS;
  if (name == "Gtilde_inf") return BodyKind::GtildeInfinity;
  if (name == "ellipsoid") return BodyKind::TcEllipsoid;
  throw UsageError("unknown body '" + name + "' (expected G, Gtilde, Gtilde_inf or ellipsoid)");
}

inline int dimension(const Params& p, const std::string& key = "m") {
  const std::int64_t m = p.integer(key);
  if (m < 1 || m > 64) throw UsageError("parameter '" + key + "' must be in [1, 64]");
  return static_cast<int>(m);
}

inline std::vector<double> s_values(const Params& p, BodyKind kind) {
  if (kind == BodyKind::GtildeInfinity) return {kInfinity};
  return p.list("s");
}

inline RevolutionBody make_body(BodyKind kind, double s, int m) {
  return {kind, kind == BodyKind::GtildeInfinity ? 0.0 : s, m};
}

inline Outcome run_binfty(const Context& ctx) {
  const double tol = ctx.params.real("tol");
  if (!(tol > 0.0)) throw UsageError("parameter 'tol' must be > 0");
  const BInfinity b = compute_b_infinity(tol);
  Outcome out;
  out.summary["b_infinity"] = b.value;
  out.summary["t_star"] = b.t_star;
  out.summary["tol"] = tol;
  if (ctx.params.flag("check")) {
    const std::int64_t n = ctx.params.integer("grid");
    if (n < 2) throw UsageError("parameter 'grid' must be >= 2");
    double best = kInfinity, best_t = 0.0;
    for (std::int64_t i = 0; i < n; ++i) {
      const double t = 0.5 * kPi * static_cast<double>(i) / static_cast<double>(n - 1);
      const double v = phi_inf(std::cos(t), std::sin(t));
      if (v < best) {
        best = v;
        best_t = t;
      }
    }
    const bool agrees = std::fabs(best - b.value) <= tol;
    out.summary["grid_points"] = n;
    out.summary["grid_min"] = best;
    out.summary["grid_t"] = best_t;
    out.summary["verdict"] = verdict(agrees);
    out.failed = !agrees;
  }
  return out;
}

inline Outcome run_zonoid_support(const Context& ctx) {
  const auto& p = ctx.params;
  const int m = dimension(p);
  const BodyKind kind = body_kind(p.text("body"));
  std::vector<double> thetas;
  if (p.has("theta")) {
    thetas = p.list("theta");
  } else {
    const std::int64_t n = p.integer("n");
    if (n < 1) throw UsageError("parameter 'n' must be >= 1");
    for (std::int64_t i = 0; i < n; ++i) {
      thetas.push_back(n == 1 ? 0.0 : kPi * static_cast<double>(i) / static_cast<double>(n - 1));
    }
  }
  Outcome out;
  for (double s : s_values(p, kind)) {
    const RevolutionBody body = make_body(kind, s, m);
    for (double th : thetas) {
      const Direction u = Direction::from_angle(th);
      Json row;
      row["body"] = to_string(kind);
      row["m"] = m;
      row["s"] = number(s);
      row["theta"] = th;
      row["x"] = u.x;
      row["yr"] = u.yr;
      row["support"] = body.support(u);
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

inline Outcome run_zonoid_profile(const Context& ctx) {
  const auto& p = ctx.params;
  const BodyKind kind = body_kind(p.text("body"));
  const std::int64_t n = p.integer("n");
  if (n < 2 || n > 10'000'000) throw UsageError("parameter 'n' must be in [2, 1e7]");
  Outcome out;
  for (double s : s_values(p, kind)) {
    const RevolutionBody body = make_body(kind, s, 2);
    for (const ProfilePoint& pt : boundary_profile(body, static_cast<int>(n))) {
      Json row;
      row["s"] = number(s);
      row["theta"] = pt.theta;
      row["axial"] = pt.axial;
      row["radial"] = pt.radial;
      out.rows.push_back(std::move(row));
    }
  }
  return out;
}

inline Outcome run_zonoid_volume(const Context& ctx) {
  const auto& p = ctx.params;
  const int m = dimension(p);
  const BodyKind kind = body_kind(p.text("body"));
  const double tol = p.real("tol");
  if (!(tol > 0.0)) throw UsageError("parameter 'tol' must be > 0");
  Outcome out;
  bool all_inside = true;
  for (double s : s_values(p, kind)) {
    const double v = volume(make_body(kind, s, m), tol);
    Json row;
    row["m"] = m;
    row["body"] = to_string(kind);
    row["s"] = number(s);
    row["volume"] = v;
    if (kind == BodyKind::GOfC) {
      const VolumeBounds b = volume_bounds(m, s);
      const bool inside = v >= b.best_lower() * (1.0 - tol) && v <= b.upper * (1.0 + tol);
      all_inside = all_inside && inside;
      row["lower_ball"] = b.lower_ball;
      row["lower_cyl"] = b.lower_cyl;
      row["upper"] = b.upper;
      row["verdict"] = verdict(inside);
    } else {
      row["lower_ball"] = nullptr;
      row["lower_cyl"] = nullptr;
      row["upper"] = nullptr;
      row["verdict"] = nullptr;
    }
    out.rows.push_back(std::move(row));
  }
  out.failed = !all_inside;
  return out;
}

inline Outcome run_zonoid_inclusion(const Context& ctx) {
  const auto& p = ctx.params;
  const int m = dimension(p);
  const std::int64_t n = p.integer("n");
  const std::int64_t chunk = p.integer("chunk");
  Outcome out;
  bool all = true;
  for (double s : p.list("s")) {
    if (!std::isfinite(s)) throw UsageError("parameter 's' must be finite for inclusion");
    const InclusionReport r = check_inclusion(m, s, n, ctx.seed, chunk, ctx.threads);
    Json row;
    row["m"] = m;
    row["s"] = s;
    row["n_dirs"] = r.n_dirs;
    row["min_ratio_lower"] = r.min_ratio_lower;
    row["max_ratio_upper"] = r.max_ratio_upper;
    row["b_infinity"] = kBInfinity;
    row["violations"] = r.n_violations;
    row["verdict"] = verdict(r.passed);
    all = all && r.passed;
    out.rows.push_back(std::move(row));
  }
  out.failed = !all;
  return out;
}

/// Frame from the params: explicit "columns" [{M, c}], or k iid columns
/// sigma (c + xi).
inline FrameSpec frame_from(const Params& p) {
  const bool explicit_columns = p.has("columns");
  if (explicit_columns && (p.has("c") || p.has("sigma"))) {
    throw UsageError("'columns' cannot be combined with 'c' or 'sigma'");
  }
  FrameSpec spec;
  if (explicit_columns) {
    const Json& cols = p.raw("columns");
    if (!cols.is_array() || cols.empty()) throw UsageError("'columns' must be a non-empty array");
    int m = p.has("m") ? dimension(p) : -1;
    for (const auto& col : cols) {
      if (!col.is_object()) throw UsageError("each column must be an object {\"M\", \"c\"}");
      for (const auto& [key, _] : col.items()) {
        if (key != "M" && key != "c") throw UsageError("unknown column key '" + key + "'");
      }
      Eigen::VectorXd c;
      Eigen::MatrixXd map;
      try {
        if (col.contains("c")) {
          const auto v = col.at("c").get<std::vector<double>>();
          c = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
        }
        if (col.contains("M")) {
          const auto rows = col.at("M").get<std::vector<std::vector<double>>>();
          map.resize(static_cast<Eigen::Index>(rows.size()),
                     rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows.front().size()) throw UsageError("column 'M' is ragged");
            for (std::size_t j = 0; j < rows[i].size(); ++j) {
              map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
            }
          }
        }
      } catch (const Json::exception&) {
        throw UsageError("column entries must be numeric arrays");
      }
      if (m < 0) m = static_cast<int>(map.size() > 0 ? map.rows() : c.size());
      if (m < 1) throw UsageError("cannot infer m from 'columns'");
      if (map.size() == 0) map = Eigen::MatrixXd::Identity(m, m);
      if (c.size() == 0) c = Eigen::VectorXd::Zero(m);
      spec.columns.emplace_back(map, c);
    }
    spec.m = m;
    if (p.has("k") && p.integer("k") != static_cast<std::int64_t>(cols.size())) {
      throw UsageError("'k' does not match the number of columns");
    }
    return spec;
  }
  const int m = p.has("m") ? dimension(p) : 2;
  const std::int64_t k = p.has("k") ? p.integer("k") : m;
  if (k < 1 || k > m) throw UsageError("parameter 'k' must be in [1, m]");
  Eigen::VectorXd c = Eigen::VectorXd::Zero(m);
  if (p.has("c")) {
    const auto v = p.list("c");
    if (v.size() == 1) {
      c(0) = v[0];
    } else if (static_cast<int>(v.size()) == m) {
      for (int i = 0; i < m; ++i) c(i) = v[static_cast<std::size_t>(i)];
    } else {
      throw UsageError("parameter 'c' must have 1 or m entries");
    }
  }
  const double sigma = p.has("sigma") ? p.real("sigma") : 1.0;
  return FrameSpec::iid(m, static_cast<int>(k),
                        GaussianVectorSpec(sigma * Eigen::MatrixXd::Identity(m, m), c));
}

inline MCConfig mc_config(const Context& ctx) {
  MCConfig cfg;
  cfg.samples = ctx.samples;
  cfg.seed = ctx.seed;
  cfg.chunk = ctx.params.integer("chunk");
  cfg.threads = ctx.threads;
  return cfg;
}

inline Json bounds_json(const RandetBounds& b) {
  Json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["alpha"] = b.alpha;
  j["mixed_volume"] = b.mixed_volume;
  j["mixed_volume_se"] = b.mixed_volume_se;
  j["mv_method"] = b.mv_method;
  return j;
}

inline Outcome run_det(const Context& ctx, const std::string& sub) {
  const FrameSpec spec = frame_from(ctx.params);
  const MCConfig cfg = mc_config(ctx);
  Outcome out;
  out.summary["m"] = spec.m;
  out.summary["k"] = spec.k();
  if (sub == "mc") {
    const EstimateWithCI e = mc_expected_absdet(spec, cfg);
    out.summary["mean"] = e.mean;
    out.summary["std_error"] = e.std_error;
    out.summary["n"] = e.n_samples;
    return out;
  }
  if (sub == "bounds") {
    out.summary["bounds"] = bounds_json(randet_bounds(spec, cfg));
    return out;
  }
  RandetBoundsReport r = check_randet_bounds(spec, cfg);
  const bool self_test = ctx.params.flag("self_test");
  if (self_test) {
    // Negative control: shrink the mixed volume so the upper bound is wrong.
    r.mixed_volume *= 0.25;
    r.mixed_volume_se *= 0.25;
    ::gzonoid::detail::finish_verdict(r, std::pow(kBInfinity, spec.k()));
  }
  out.summary["mean"] = r.estimate.mean;
  out.summary["std_error"] = r.estimate.std_error;
  out.summary["n"] = r.estimate.n_samples;
  RandetBounds b;
  b.lower = r.lower;
  b.upper = r.upper;
  b.alpha = r.alpha;
  b.mixed_volume = r.mixed_volume;
  b.mixed_volume_se = r.mixed_volume_se;
  b.mv_method = r.mv_method;
  out.summary["bounds"] = bounds_json(b);
  out.summary["ratio"] = r.ratio;
  out.summary["combined_se"] = r.combined_se;
  out.summary["self_test"] = self_test;
  out.summary["verdict"] = verdict(r.passed);
  out.failed = !r.passed;
  return out;
}

inline RadiusRule radius_rule(const Params& p) {
  if (p.has("r_power")) {
    return RadiusRule::power(p.has("r_c") ? p.real("r_c") : 1.0, p.real("r_power"));
  }
  if (p.has("r_c")) throw UsageError("'r_c' requires 'r_power'");
  const double alpha = p.real("alpha");
  if (!(alpha >= 0.0)) throw UsageError("parameter 'alpha' must be >= 0");
  return RadiusRule::proportional(alpha);
}

inline GridSpec grid_from(const Params& p) {
  GridSpec g;
  g.resolution = static_cast<int>(p.integer("resolution"));
  g.order = static_cast<int>(p.integer("order"));
  return g;
}

inline std::optional<double> zero_set_volume(const Params& p, const ScalarFieldSpec& field) {
  if (p.has("volz0")) return p.real("volz0");
  return field.zero_set_volume();
}

inline Outcome run_grf_limit(const Context& ctx) {
  const auto& p = ctx.params;
  const int m = dimension(p);
  const double alpha = p.real("alpha");
  std::optional<double> vz = p.has("volz0") ? std::optional<double>(p.real("volz0"))
                                            : ScalarFieldSpec::by_id(p.text("field"), m).zero_set_volume();
  if (!vz) throw UsageError("field has no closed-form zero set volume; pass --volz0");
  Outcome out;
  out.summary["m"] = m;
  out.summary["alpha"] = number(alpha);
  out.summary["volz0"] = *vz;
  out.summary["limit"] = concentration_limit(m, alpha, *vz);
  return out;
}

inline Outcome run_grf_sweep(const Context& ctx, const std::string& sub) {
  const auto& p = ctx.params;
  const int m = dimension(p);
  const ScalarFieldSpec field = ScalarFieldSpec::by_id(p.text("field"), m);
  const RadiusRule rule = radius_rule(p);
  const GridSpec grid = grid_from(p);
  const auto vz = zero_set_volume(p, field);
  const auto taus = p.list("tau");
  Outcome out;
  bool all = true;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double tau = taus[i];
    const double r = rule.radius(tau);
    const TubeSpec tube{tau, r};
    const double limit =
        vz ? concentration_limit(m, rule.limit_alpha(), *vz) : std::numeric_limits<double>::quiet_NaN();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    Json row;
    row["tau"] = tau;
    row["r"] = number(r);
    if (sub == "sandwich") {
      const std::int64_t pts = p.has("points") ? p.integer("points") : (m == 1 ? 1000 : 32);
      if (pts < 1 || pts > 100000) throw UsageError("parameter 'points' must be in [1, 1e5]");
      const SandwichReport rep =
          comparison_field_sandwich(field, tau, grid, r, static_cast<int>(pts), ctx.threads);
      row["n_points"] = rep.n_points;
      row["min_ratio"] = number(rep.min_ratio);
      row["max_ratio"] = number(rep.max_ratio);
      row["b_infinity_m"] = std::pow(kBInfinity, m);
      row["violations"] = rep.n_violations;
      row["count"] = rep.count;
      row["comparison_count"] = rep.comparison_count;
      row["verdict"] = verdict(rep.passed);
      all = all && rep.passed;
      out.rows.push_back(std::move(row));
      continue;
    }
    double n_integral = nan, n_coarea = nan, n_mc = nan, se = nan, primary = nan;
    if (sub == "integral" || sub == "mc") {
      n_integral = n_r_tau_integral(field, tube, grid, ctx.threads);
      primary = n_integral;
    }
    if (sub == "coarea") {
      n_coarea = n_r_tau_coarea(field, tube, grid);
      primary = n_coarea;
    }
    if (sub == "mc") {
      MCConfig cfg = mc_config(ctx);
      cfg.seed = ctx.seed + i;
      const EstimateWithCI e = mc_zero_count_circle(field, tube, cfg, grid);
      n_mc = e.mean;
      se = e.std_error;
      primary = n_mc;
    }
    row["n_integral"] = number(n_integral);
    row["n_coarea"] = number(n_coarea);
    row["n_mc"] = number(n_mc);
    row["se"] = number(se);
    row["limit"] = number(limit);
    row["rel_err"] = number(limit != 0.0 ? (primary - limit) / limit : nan);
    out.rows.push_back(std::move(row));
  }
  if (sub == "sandwich") {
    out.summary["verdict"] = verdict(all);
    out.failed = !all;
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Registry.

inline const std::vector<CommandDef>& commands() {
  using PT = ParamType;
  static const std::vector<CommandDef> defs = [] {
    std::vector<CommandDef> d;
    d.push_back({"", "binfty", "universal constant b_inf and its argmin angle",
                 {{"tol", PT::Real, 1e-10, "golden-section tolerance"},
                  {"check", PT::Bool, false, "also scan a uniform grid and compare"},
                  {"grid", PT::Int, 1'000'000, "grid points for --check"}},
                 0, false, "json", detail::run_binfty});

    const std::vector<ParamDef> body_params = {
        {"m", PT::Int, 2, "dimension"},
        {"s", PT::RealList, Json::array({1.0}), "mean norms, comma separated"},
        {"body", PT::Text, "G", "G, Gtilde, Gtilde_inf or ellipsoid"}};
    auto with = [](std::vector<ParamDef> base, std::vector<ParamDef> extra) {
      base.insert(base.end(), extra.begin(), extra.end());
      return base;
    };
    d.push_back({"zonoid", "support", "support function h(cos theta, sin theta)",
                 with(body_params, {{"n", PT::Int, 8, "number of angles in [0, pi]"},
                                    {"theta", PT::RealList, nullptr, "explicit angles"}}),
                 0, false, "json", detail::run_zonoid_support});
    d.push_back({"zonoid", "profile", "boundary curve in the (axial, radial) half-plane",
                 {{"s", PT::RealList, Json::array({0.0, 1.0, 2.0, 3.0}), "mean norms"},
                  {"body", PT::Text, "G", "G, Gtilde, Gtilde_inf or ellipsoid"},
                  {"n", PT::Int, 181, "points per curve"}},
                 0, false, "csv", detail::run_zonoid_profile});
    d.push_back({"zonoid", "volume", "volume by quadrature with the closed-form bounds",
                 {{"m", PT::Int, 2, "dimension"},
                  {"s", PT::RealList, Json::array({0.0}), "mean norms"},
                  {"body", PT::Text, "G", "G, Gtilde, Gtilde_inf or ellipsoid"},
                  {"tol", PT::Real, 1e-10, "relative quadrature tolerance"}},
                 0, false, "json", detail::run_zonoid_volume});
    d.push_back({"zonoid", "inclusion", "ellipsoid sandwich on random directions",
                 {{"m", PT::Int, 3, "dimension"},
                  {"s", PT::RealList, Json::array({1.0}), "mean norms"},
                  {"n", PT::Int, 10'000, "number of directions"},
                  {"chunk", PT::Int, 4096, "directions per stream"}},
                 0, true, "json", detail::run_zonoid_inclusion});

    const std::vector<ParamDef> det_params = {
        {"m", PT::Int, nullptr, "ambient dimension (default 2, or inferred from columns)"},
        {"k", PT::Int, nullptr, "number of columns (default m)"},
        {"c", PT::RealList, nullptr, "mean of every column: c_1 or the full vector"},
        {"sigma", PT::Real, nullptr, "scale of every column map (default 1)"},
        {"columns", PT::Object, nullptr, "explicit columns [{\"M\": [[..]], \"c\": [..]}]"},
        {"chunk", PT::Int, 65536, "samples per stream"}};
    for (const char* sub : {"mc", "bounds", "check"}) {
      std::vector<ParamDef> ps = det_params;
      if (std::string(sub) == "check") {
        ps.push_back({"self_test", PT::Bool, false, "corrupt the bound (negative control)"});
      }
      const std::string name = sub;
      d.push_back({"det", name,
                   name == "mc"       ? "Monte Carlo E sqrt(det(Gamma^t Gamma))"
                   : name == "bounds" ? "mixed-volume bounds"
                                      : "estimate against the bounds",
                   ps, 1'000'000, true, "json",
                   [name](const Context& c) { return detail::run_det(c, name); }});
    }

    const std::vector<ParamDef> grf_params = {
        {"field", PT::Text, "sin2t", "sin2t, sin_offset, zero or cos_mix"},
        {"m", PT::Int, 1, "dimension of the torus"},
        {"tau", PT::RealList, Json::array({0.1, 0.03, 0.01, 0.003}), "tau schedule"},
        {"alpha", PT::RealOrInf, 1.0, "tube radius r = alpha tau (may be inf)"},
        {"r_c", PT::Real, nullptr, "r = r_c tau^r_power (with r_power)"},
        {"r_power", PT::Real, nullptr, "exponent of the power rule"},
        {"resolution", PT::Int, 0, "grid cells per axis (0 = automatic)"},
        {"order", PT::Int, 5, "Gauss-Legendre order per cell"},
        {"volz0", PT::Real, nullptr, "volume of the zero set (default: closed form of the field)"}};
    for (const char* sub : {"integral", "coarea", "mc", "sandwich"}) {
      std::vector<ParamDef> ps = grf_params;
      const std::string name = sub;
      if (name == "mc") ps.push_back({"chunk", PT::Int, 16384, "samples per stream"});
      if (name == "sandwich") {
        ps.push_back({"points", PT::Int, nullptr, "check points per axis (default 1000 / 32)"});
        for (auto& def : ps) {
          if (def.key == "tau") def.fallback = Json::array({0.1});
        }
      }
      d.push_back({"grf", name,
                   name == "integral" ? "expected zeros in the tube by grid quadrature"
                   : name == "coarea" ? "expected zeros in the tube by the coarea formula"
                   : name == "mc"     ? "Monte Carlo zero count on the circle"
                                      : "comparison-field volume sandwich",
                   ps, name == "mc" ? 100'000 : 0, name == "mc", name == "sandwich" ? "json" : "csv",
                   [name](const Context& c) { return detail::run_grf_sweep(c, name); }});
    }
    d.push_back({"grf", "limit", "closed-form tau -> 0 limit",
                 {{"m", PT::Int, 1, "dimension"},
                  {"alpha", PT::RealOrInf, 1.0, "r / tau"},
                  {"volz0", PT::Real, nullptr, "volume of the zero set"},
                  {"field", PT::Text, "sin2t", "field providing volz0 when not given"}},
                 0, false, "json", detail::run_grf_limit});
    return d;
  }();
  return defs;
}

inline const CommandDef* find_command(const std::string& id) {
  for (const auto& c : commands()) {
    if (c.id() == id) return &c;
  }
  return nullptr;
}

// ---------------------------------------------------------------------------
// Manifests.

/// A manifest: {"command", "seed", "samples", "format", "out", "params"}.
/// Unknown keys are rejected at both levels.
struct Manifest {
  std::string command;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::string> format;
  std::optional<std::string> out;
  Json params = Json::object();

  [[nodiscard]] static Manifest from_json(const Json& j) {
    if (!j.is_object()) throw UsageError("manifest must be a JSON object");
    Manifest m;
    for (const auto& [key, value] : j.items()) {
      try {
        if (key == "command") {
          m.command = value.get<std::string>();
        } else if (key == "seed") {
          if (!value.is_number_unsigned()) throw UsageError("manifest 'seed' must be a non-negative integer");
          m.seed = value.get<std::uint64_t>();
        } else if (key == "samples") {
          if (!value.is_number_integer()) throw UsageError("manifest 'samples' must be an integer");
          m.samples = value.get<std::int64_t>();
        } else if (key == "format") {
          m.format = value.get<std::string>();
        } else if (key == "out") {
          m.out = value.get<std::string>();
        } else if (key == "params") {
          if (!value.is_object()) throw UsageError("manifest 'params' must be an object");
          m.params = value;
        } else {
          throw UsageError("unknown manifest key '" + key + "'");
        }
      } catch (const Json::exception&) {
        throw UsageError("manifest key '" + key + "' has the wrong type");
      }
    }
    return m;
  }

  [[nodiscard]] Json to_json() const {
    Json j;
    j["command"] = command;
    if (seed) j["seed"] = *seed;
    if (samples) j["samples"] = *samples;
    if (format) j["format"] = *format;
    if (out) j["out"] = *out;
    j["params"] = params;
    return j;
  }

  [[nodiscard]] static Manifest load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open manifest '" + path + "'");
    try {
      return from_json(Json::parse(in));
    } catch (const Json::parse_error& e) {
      throw UsageError("manifest '" + path + "' is not valid JSON: " + e.what());
    }
  }
};

// ---------------------------------------------------------------------------
// Output.

namespace detail {

inline void flatten(const Json& obj, const std::string& prefix, Json& out) {
  for (const auto& [key, value] : obj.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, out);
    } else {
      out[name] = value;
    }
  }
}

inline std::string csv_cell(const Json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
  if (v.is_number_float()) return format_number(v.get<double>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  }
  return csv_cell(Json(v.dump()));
}

inline std::string render_csv(const Outcome& o) {
  std::vector<Json> rows;
  if (o.rows.empty()) {
    Json flat = Json::object();
    flatten(o.summary, "", flat);
    rows.push_back(flat);
  } else {
    for (const auto& r : o.rows) {
      Json flat = Json::object();
      flatten(r, "", flat);
      rows.push_back(flat);
    }
  }
  std::string text;
  bool first = true;
  for (const auto& [key, _] : rows.front().items()) {
    text += (first ? "" : ",") + key;
    first = false;
  }
  text += "\n";
  for (const auto& r : rows) {
    first = true;
    for (const auto& [key, _] : rows.front().items()) {
      text += (first ? "" : ",") + csv_cell(r.contains(key) ? r.at(key) : Json());
      first = false;
    }
    text += "\n";
  }
  return text;
}

inline std::string render_json(const Outcome& o, const Json& manifest) {
  Json j;
  j["command"] = manifest.at("command");
  j["manifest"] = manifest;
  for (const auto& [key, value] : o.summary.items()) j[key] = value;
  if (!o.rows.empty()) j["rows"] = o.rows;
  return j.dump(2) + "\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entry point.

/// Runs one invocation. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian zonoids: support functions, volumes, random determinants and "
               "zero-set concentration"};
  app.name("gzonoid");
  app.require_subcommand(0, 1);
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> samples;
  std::optional<std::string> out_path, format, manifest_path;
  unsigned threads = 0;
  app.add_option("--seed", seed, "random seed");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--out", out_path, "write output to this file instead of stdout");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--manifest", manifest_path, "JSON manifest with command, seed and params");
  app.add_option("--threads", threads, "worker threads (0 = hardware); does not change results");

  struct Bound {
    const CommandDef* def;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
  };
  std::vector<std::unique_ptr<Bound>> bound;
  std::map<std::string, CLI::App*> groups;
  for (const auto& def : commands()) {
    CLI::App* parent = &app;
    if (!def.group.empty()) {
      auto it = groups.find(def.group);
      if (it == groups.end()) {
        CLI::App* g = app.add_subcommand(def.group, def.group + " commands");
        g->require_subcommand(1);
        g->fallthrough();
        it = groups.emplace(def.group, g).first;
      }
      parent = it->second;
    }
    auto b = std::make_unique<Bound>();
    b->def = &def;
    b->app = parent->add_subcommand(def.name, def.help);
    b->app->fallthrough();
    for (const auto& p : def.params) {
      std::string flag = "--" + p.key;
      std::replace(flag.begin(), flag.end(), '_', '-');
      if (p.type == ParamType::Bool) {
        b->app->add_flag(flag, b->flags[p.key], p.help);
      } else {
        b->app->add_option(flag, b->values[p.key], p.help);
      }
    }
    bound.push_back(std::move(b));
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    const Bound* chosen = nullptr;
    for (const auto& b : bound) {
      if (b->app->parsed()) chosen = b.get();
    }
    Manifest manifest;
    if (manifest_path) manifest = Manifest::load(*manifest_path);
    const CommandDef* def = chosen ? chosen->def : nullptr;
    if (!def) {
      if (manifest.command.empty()) {
        err << app.help();
        err << "error: no command given (pass a command or a manifest with \"command\")\n";
        return kExitUsage;
      }
      def = find_command(manifest.command);
      if (!def) throw UsageError("unknown manifest command '" + manifest.command + "'");
    } else if (!manifest.command.empty() && manifest.command != def->id()) {
      throw UsageError("manifest command '" + manifest.command + "' does not match '" +
                       def->id() + "'");
    }

    // Defaults <- manifest <- flags.
    Json resolved = Json::object();
    for (const auto& p : def->params) resolved[p.key] = canonical_value(p, p.fallback);
    for (const auto& [key, value] : manifest.params.items()) {
      const auto it = std::find_if(def->params.begin(), def->params.end(),
                                   [&](const ParamDef& p) { return p.key == key; });
      if (it == def->params.end()) {
        throw UsageError("unknown parameter '" + key + "' for command '" + def->id() + "'");
      }
      resolved[key] = canonical_value(*it, value);
    }
    if (chosen) {
      for (const auto& p : def->params) {
        std::string flag = "--" + p.key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        if (chosen->app->count(flag) == 0) continue;
        resolved[p.key] = p.type == ParamType::Bool ? Json(chosen->flags.at(p.key))
                                                    : canonical_value(p, chosen->values.at(p.key));
      }
    }
    Json params = Json::object();
    for (const auto& [key, value] : resolved.items()) {
      if (!value.is_null()) params[key] = value;
    }

    Context ctx{Params(params)};
    ctx.threads = threads;
    Json echo;
    echo["command"] = def->id();
    if (def->uses_seed) {
      ctx.seed = seed.value_or(manifest.seed.value_or(0));
      echo["seed"] = ctx.seed;
    } else if (seed || manifest.seed) {
      throw UsageError("command '" + def->id() + "' does not take a seed");
    }
    if (def->default_samples > 0) {
      ctx.samples = samples.value_or(manifest.samples.value_or(def->default_samples));
      if (ctx.samples < 2) throw UsageError("'samples' must be >= 2");
      echo["samples"] = ctx.samples;
    } else if (samples || manifest.samples) {
      throw UsageError("command '" + def->id() + "' does not take a sample count");
    }
    const std::string fmt = format.value_or(manifest.format.value_or(def->default_format));
    if (fmt != "json" && fmt != "csv") throw UsageError("format must be json or csv");
    echo["format"] = fmt;
    echo["params"] = params;

    const Outcome outcome = def->run(ctx);
    const std::string text =
        fmt == "json" ? detail::render_json(outcome, echo) : detail::render_csv(outcome);
    const auto path = out_path ? out_path : manifest.out;
    if (path) {
      std::ofstream file(*path, std::ios::binary);
      if (!file) throw UsageError("cannot write '" + *path + "'");
      file << text;
    } else {
      out << text;
    }
    return outcome.failed ? kExitFail : kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
}

}  // namespace gzonoid::cli

#endif  // GZONOID_TOOLS_GZONOID_CLI_HPP
