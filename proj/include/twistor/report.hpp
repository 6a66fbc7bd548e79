#pragma once

#include "twistor/config.hpp"
#include "twistor/verify.hpp"

#include "json.hpp"

#include <cstdio>
#include <iomanip>

// JSON reports. Every document carries "schema": 1, the effective configuration, the tolerance
// tier, and a digest of the catalog verification that ran alongside it.

namespace twistor {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string fixed(double v, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", digits, v);
  return buf;
}

inline Json vec_json(const Vec4& v) { return Json::array({v[0], v[1], v[2], v[3]}); }
inline Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

inline Json tangent_json(const PTangent& a) {
  return Json{{"horizontal", vec_json(a.h)}, {"vertical_plus", vec_json(a.vp)}, {"vertical_minus", vec_json(a.vm)}};
}

}  // namespace detail

/// Catalog re-verification summary; the digest covers ids, verdicts and residuals to four digits.
inline Json catalog_digest() {
  Json entries = Json::array();
  std::string canonical;
  for (const auto& e : default_catalog()) {
    const auto v = verify_entry(e);
    entries.push_back({{"id", v.id}, {"ok", v.ok}});
    canonical += v.id + (v.ok ? ":ok:" : ":fail:") + detail::fixed(v.max_traceless_ricci) + ":" +
                 detail::fixed(v.max_weyl_plus) + ":" + detail::fixed(v.max_weyl_minus) + ":" +
                 detail::fixed(v.min_scalar) + ";";
  }
  std::ostringstream hex;
  hex << std::hex << std::setw(16) << std::setfill('0') << detail::fnv1a(canonical);
  const bool ok = std::all_of(entries.begin(), entries.end(), [](const Json& j) { return j["ok"].get<bool>(); });
  return Json{{"ok", ok}, {"digest", hex.str()}, {"entries", entries}};
}

inline Json config_json(const RunConfig& c) {
  Json grid = Json::array();
  for (const auto& t : c.t_grid) grid.push_back(Json::array({t.t1, t.t2}));
  Json j{{"chart", c.chart},
         {"nu", c.nu},
         {"t1", c.t1},
         {"t2", c.t2},
         {"t_grid", grid},
         {"samples", c.samples},
         {"kappas", c.kappas},
         {"tuples", c.tuples},
         {"seed", c.seed},
         {"tol_tier", c.tier ? Json(to_string(*c.tier)) : Json("chart")},
         {"points", c.points},
         {"parameter", to_string(c.parameter)},
         {"distribution", to_string(c.distribution)},
         {"interval", Json::array({c.interval_lo, c.interval_hi})},
         {"clause", c.clause}};
  if (c.chart.rfind("user", 0) == 0) {
    Json comps = Json::object();
    for (int a = 0; a < 4; ++a)
      for (int b = a; b < 4; ++b) {
        const auto& s = c.components[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        if (!s.empty()) comps["g" + std::to_string(a + 1) + std::to_string(b + 1)] = s;
      }
    j["lower"] = detail::vec_json(c.lower);
    j["upper"] = detail::vec_json(c.upper);
    j["components"] = comps;
  }
  return j;
}

inline Json envelope(const std::string& command, const RunConfig& c, ToleranceTier tier, double tol, Json result) {
  return Json{{"schema", kSchemaVersion},
              {"command", command},
              {"config", config_json(c)},
              {"tolerance_tier", to_string(tier)},
              {"tolerance", tol},
              {"catalog_verification", catalog_digest()},
              {"result", std::move(result)}};
}

inline Json to_json(const ConditionReport& r) {
  return Json{{"condition", to_string(r.condition)},
              {"distribution", to_string(r.distribution)},
              {"residual", r.residual},
              {"samples", r.samples},
              {"tolerance", r.tolerance},
              {"verdict", to_string(r.verdict)},
              {"witness",
               {{"x", detail::vec_json(r.witness.x)},
                {"sigma_plus", detail::vec_json(r.witness.plus)},
                {"sigma_minus", detail::vec_json(r.witness.minus)},
                {"a", detail::tangent_json(r.witness.a)},
                {"b", detail::tangent_json(r.witness.b)}}}};
}

inline Json to_json(const DistributionSummary& s) {
  return Json{{"integrable", s.integrable}, {"minimal", s.minimal}, {"totally_geodesic", s.totally_geodesic}};
}

inline Json to_json(const ClassReport& r) {
  Json reports = Json::array();
  for (const auto& c : r.reports) reports.push_back(to_json(c));
  return Json{{"nu", r.nu},
              {"t", Json::array({r.t.t1, r.t.t2})},
              {"chart", r.chart_id},
              {"label", r.label},
              {"pattern", r.pattern},
              {"d1_implies_d2_d3", r.d1_implies_d2_d3},
              {"budget_doubled", r.budget_doubled},
              {"tuples", r.tuples},
              {"summary", {{"D", to_json(r.primary)}, {"D-perp", to_json(r.complement)}}},
              {"conditions", reports}};
}

inline Json to_json(const CriticalTResult& r) {
  Json curve = Json::array();
  for (const auto& [t, f] : r.curve) curve.push_back(Json::array({t, f}));
  return Json{{"nu", r.nu},
              {"distribution", to_string(r.distribution)},
              {"parameter", to_string(r.parameter)},
              {"interval", Json::array({r.lower, r.upper})},
              {"fixed_other", r.fixed_other},
              {"scalar_curvature", r.scalar},
              {"constant_curvature", r.constant_curvature},
              {"degenerate", r.degenerate},
              {"t_star", r.t_star},
              {"residual_at_t_star", r.residual_at_star},
              {"six_over_s", r.six_over_s},
              {"three_over_eight_chi", r.three_over_eight_chi ? Json(*r.three_over_eight_chi) : Json(nullptr)},
              {"matches", r.matches},
              {"curve", curve}};
}

inline Json to_json(const TheoremTable& t) {
  Json rows = Json::array();
  for (const auto& r : t.rows) {
    rows.push_back(Json{{"clause", r.clause},
                        {"chart", r.chart},
                        {"nu", r.nu},
                        {"t", Json::array({r.t.t1, r.t.t2})},
                        {"expected", r.expected},
                        {"observed", r.observed},
                        {"residual", r.residual},
                        {"pass", r.pass}});
  }
  return Json{{"all_pass", t.all_pass()}, {"rows", rows}};
}

}  // namespace twistor
