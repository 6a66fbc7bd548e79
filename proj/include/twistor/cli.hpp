#pragma once

#include "twistor/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

// Command-line front end: decompose, classify, verify, critical-t.
// Exit codes: 0 pass, 1 fail, 2 usage.

namespace twistor {

enum ExitCode { kExitPass = 0, kExitFail = 1, kExitUsage = 2 };

namespace detail {

inline double effective_tolerance(const RunConfig& c, const MetricChart& chart) {
  return tolerance(c.tier.value_or(chart.tier()));
}

inline ToleranceTier effective_tier(const RunConfig& c, const MetricChart& chart) { return c.tier.value_or(chart.tier()); }

inline void write_json(const RunConfig& c, const Json& doc) {
  if (c.out.empty()) return;
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorKind::Usage, "cannot write '" + c.out + "'");
  f << doc.dump(2) << '\n';
}

inline std::string num(double v, int precision = 3) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(precision) << v;
  return os.str();
}

}  // namespace detail

inline int cmd_decompose(const RunConfig& c, std::ostream& out) {
  const MetricChart chart = make_chart(c);
  const double tol = detail::effective_tolerance(c, chart);
  Json rows = Json::array();
  bool einstein = true, self_dual = true, anti_self_dual = true, ok = true;
  out << "chart " << chart.id() << "\n";
  out << std::left << std::setw(44) << "point" << std::setw(12) << "s" << std::setw(12) << "|B|" << std::setw(12)
      << "|W+|" << std::setw(12) << "|W-|" << "residual\n";
  for (const Point& p : base_points(chart, c.points)) {
    const auto d = decompose(frame_curvature(chart, p));
    const double b = d.traceless_ricci.norm();
    const double wp = d.weyl_plus.norm();
    const double wm = d.weyl_minus.norm();
    einstein = einstein && d.einstein(tol);
    self_dual = self_dual && d.self_dual(tol);
    anti_self_dual = anti_self_dual && d.anti_self_dual(tol);
    ok = ok && d.residual < tol;
    std::ostringstream pt;
    pt << std::fixed << std::setprecision(4) << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
    out << std::left << std::setw(44) << pt.str() << std::setw(12) << detail::num(d.scalar) << std::setw(12)
        << detail::num(b) << std::setw(12) << detail::num(wp) << std::setw(12) << detail::num(wm)
        << detail::num(d.residual) << "\n";
    rows.push_back(Json{{"x", detail::vec_json(p)},
                        {"scalar", d.scalar},
                        {"traceless_ricci_norm", b},
                        {"weyl_plus_norm", wp},
                        {"weyl_minus_norm", wm},
                        {"reconstruction_residual", d.residual}});
  }
  out << "einstein " << (einstein ? "yes" : "no") << ", self-dual " << (self_dual ? "yes" : "no")
      << ", anti-self-dual " << (anti_self_dual ? "yes" : "no") << "\n";
  Json result{{"chart", chart.id()},
              {"points", rows},
              {"einstein", einstein},
              {"self_dual", self_dual},
              {"anti_self_dual", anti_self_dual},
              {"reconstruction_ok", ok}};
  detail::write_json(c, envelope("decompose", c, detail::effective_tier(c, chart), tol, std::move(result)));
  return ok ? kExitPass : kExitFail;
}

inline int cmd_classify(const RunConfig& c, std::ostream& out) {
  c.validate();
  const MetricChart chart = make_chart(c);
  const double tol = detail::effective_tolerance(c, chart);
  const MetricParams t(c.t1, c.t2);
  Json reports = Json::array();
  bool ok = true;
  out << "chart " << chart.id() << "  t = (" << t.t1 << ", " << t.t2 << ")  tolerance " << tol << "\n";
  for (int nu : c.nu) {
    const ClassReport r = classify(nu, t, chart, c.sampling(), tol);
    ok = ok && r.d1_implies_d2_d3;
    out << "nu=" << nu << "  " << r.label << "\n";
    for (const auto& cr : r.reports) {
      out << "    " << std::left << std::setw(8) << to_string(cr.distribution) << std::setw(4) << to_string(cr.condition)
          << std::setw(14) << to_string(cr.verdict) << detail::num(cr.residual) << "\n";
    }
    reports.push_back(to_json(r));
  }
  Json result{{"chart", chart.id()}, {"reports", reports}};
  detail::write_json(c, envelope("classify", c, detail::effective_tier(c, chart), tol, std::move(result)));
  return ok ? kExitPass : kExitFail;
}

inline int cmd_verify(const RunConfig& c, std::ostream& out) {
  c.validate();
  std::vector<VerifyTarget> targets;
  if (c.chart.empty() || c.chart == "catalog") {
    for (const auto& e : default_catalog()) targets.push_back({e.id, e.chart});
  } else {
    const MetricChart chart = make_chart(c);
    targets.push_back({chart.id(), chart});
  }
  std::optional<double> tol_override;
  if (c.tier) tol_override = tolerance(*c.tier);
  const TheoremTable table = verify_theorems(targets, c.t_grid, c.sampling(), c.clause, tol_override);
  if (table.rows.empty()) throw Error(ErrorKind::Usage, "no theorem clause matches '" + c.clause + "'");
  std::size_t passed = 0;
  for (const auto& r : table.rows) {
    if (r.pass) ++passed;
    else {
      out << "FAIL " << r.clause << " chart=" << r.chart << " nu=" << r.nu << " t=(" << r.t.t1 << "," << r.t.t2
          << ") expected " << r.expected << ", observed " << r.observed << " (" << detail::num(r.residual) << ")\n";
    }
  }
  out << passed << "/" << table.rows.size() << " theorem clauses pass\n";
  const ToleranceTier tier = c.tier.value_or(targets.front().chart.tier());
  detail::write_json(c, envelope("verify", c, tier, tol_override.value_or(tolerance(tier)), to_json(table)));
  return table.all_pass() ? kExitPass : kExitFail;
}

inline int cmd_critical_t(const RunConfig& c, std::ostream& out) {
  c.validate();
  if (c.nu.size() != 1) throw Error(ErrorKind::Usage, "critical-t needs exactly one --nu");
  const MetricChart chart = make_chart(c);
  const double tol = detail::effective_tolerance(c, chart);
  const double other = c.parameter == TParameter::T2 ? c.t1 : c.t2;
  const CriticalTResult r = critical_t_search(chart, c.nu.front(), c.distribution, c.parameter, c.interval_lo,
                                              c.interval_hi, other, c.sampling(), tol);
  out << "chart " << chart.id() << "  nu=" << r.nu << "  " << to_string(r.distribution) << "  over "
      << to_string(r.parameter) << "\n";
  if (r.degenerate) {
    out << "D1 residual below tolerance on the whole interval: no critical value\n";
  } else {
    out << std::setprecision(12) << "t* = " << r.t_star << "  residual " << detail::num(r.residual_at_star) << "\n";
    out << "6/s = " << r.six_over_s;
    if (r.three_over_eight_chi) out << "  3/(8 chi) = " << *r.three_over_eight_chi;
    out << "  matches: " << r.matches << "\n";
  }
  detail::write_json(c, envelope("critical-t", c, detail::effective_tier(c, chart), tol, to_json(r)));
  return r.degenerate || r.residual_at_star < tol ? kExitPass : kExitFail;
}

/// Parses arguments (argv[0] excluded) and runs one subcommand.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product twistor bundle: curvature decomposition and Naveira classification", "twistor"};
  app.require_subcommand(1);
  std::string config_path, chart, nu, tier, out_path, parameter, distribution, interval, clause, grid;
  double t1 = 0.0, t2 = 0.0;
  int samples = 0, kappas = 0, tuples = 0, points = 0;
  std::uint64_t seed = 0;

  std::vector<CLI::App*> subs;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", config_path, "key = value configuration file");
    s->add_option("--chart", chart, "chart id, e.g. sphere:r=2 or cp2:orientation=-1");
    s->add_option("--nu", nu, "structure indices, e.g. 2 or 1,3");
    s->add_option("--t1", t1, "fibre parameter t1");
    s->add_option("--t2", t2, "fibre parameter t2");
    s->add_option("--samples", samples, "base points");
    s->add_option("--kappas", kappas, "twistor points per base point");
    s->add_option("--tuples", tuples, "argument tuples per twistor point");
    s->add_option("--seed", seed, "random seed");
    s->add_option("--tol-tier", tier, "analytic or fd");
    s->add_option("--out", out_path, "JSON report path");
    subs.push_back(s);
  };
  auto* decompose_cmd = app.add_subcommand("decompose", "curvature blocks at sample points");
  add_common(decompose_cmd);
  decompose_cmd->add_option("--points", points, "number of points");
  auto* classify_cmd = app.add_subcommand("classify", "Gil-Medrano conditions and Naveira class");
  add_common(classify_cmd);
  auto* verify_cmd = app.add_subcommand("verify", "theorem table over charts and a t grid");
  add_common(verify_cmd);
  verify_cmd->add_option("--t-grid", grid, "t1:t2 pairs, comma separated");
  verify_cmd->add_option("--clause", clause, "run a single clause");
  auto* critical_cmd = app.add_subcommand("critical-t", "parameter making a distribution totally geodesic");
  add_common(critical_cmd);
  critical_cmd->add_option("--parameter", parameter, "t1, t2 or equal");
  critical_cmd->add_option("--distribution", distribution, "D or D-perp");
  critical_cmd->add_option("--interval", interval, "lo,hi");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    RunConfig c;
    CLI::App* active = app.get_subcommands().front();
    if (!config_path.empty()) load_config_file(c, config_path);
    auto given = [&](const char* name) { return active->get_option_no_throw(name) && active->count(name) > 0; };
    if (given("--chart")) c.chart = chart;
    if (given("--nu")) c.nu = parse_nu_list(nu);
    if (given("--t1")) c.t1 = t1;
    if (given("--t2")) c.t2 = t2;
    if (given("--samples")) c.samples = samples;
    if (given("--kappas")) c.kappas = kappas;
    if (given("--tuples")) c.tuples = tuples;
    if (given("--seed")) c.seed = seed;
    if (given("--tol-tier")) c.tier = parse_tier(tier);
    if (given("--out")) c.out = out_path;
    if (given("--points")) c.points = points;
    if (given("--t-grid")) apply_setting(c, "t-grid", grid);
    if (given("--clause")) c.clause = clause;
    if (given("--parameter")) c.parameter = parse_parameter(parameter);
    if (given("--distribution")) c.distribution = parse_distribution(distribution);
    if (given("--interval")) apply_setting(c, "interval", interval);
    const std::string name = active->get_name();
    if (name != "verify" && c.chart.empty()) c.chart = "sphere";
    if (name == "decompose") return cmd_decompose(c, out);
    if (name == "classify") return cmd_classify(c, out);
    if (name == "verify") return cmd_verify(c, out);
    return cmd_critical_t(c, out);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return e.kind() == ErrorKind::Usage || e.kind() == ErrorKind::Parse ? kExitUsage : kExitFail;
  }
}

}  // namespace twistor
