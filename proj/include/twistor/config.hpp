#pragma once

#include "twistor/catalog.hpp"
#include "twistor/classifier.hpp"
#include "twistor/expression.hpp"

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

// Run configuration. The file format is one `key = value` per line; '#' starts a comment.
//
//   chart       = sphere:r=1          # flat | sphere[:r=] | cp2 | s2xs2[:a=,b=] | perturbed[:amp=,seed=] | user
//                                     # unset: sphere, or the whole catalog for verify
//                                     # any of them may carry orientation=-1
//   nu          = 1,2,3,4
//   t1          = 0.7
//   t2          = 1.3
//   t-grid      = 0.7:1.3, 1:1        # verify only
//   samples     = 20                  # base points
//   kappas      = 5
//   tuples      = 10
//   seed        = 1
//   tol-tier    = analytic            # analytic | fd
//   out         = report.json
//   points      = 5                   # decompose only
//   parameter   = t1                  # critical-t: t1 | t2 | equal
//   distribution = D                  # critical-t: D | D-perp
//   interval    = 0.05,2
//   clause      = D.minimal           # verify: run a single clause
//   lower       = -1,-1,-1,-1         # user chart box
//   upper       = 1,1,1,1
//   g11 = ...   g12 = ...  ...  g44 = ...   # user chart metric components in x1..x4

namespace twistor {

struct RunConfig {
  std::string chart;
  std::vector<int> nu{1, 2, 3, 4};
  double t1 = 1.0;
  double t2 = 1.0;
  std::vector<MetricParams> t_grid{{0.7, 1.3}, {1.0, 1.0}, {2.0, 0.5}};
  int samples = 20;
  int kappas = 5;
  int tuples = 10;
  std::uint64_t seed = 1;
  std::optional<ToleranceTier> tier;
  std::string out;
  int points = 5;
  TParameter parameter = TParameter::T1;
  Distribution distribution = Distribution::Primary;
  double interval_lo = 0.05;
  double interval_hi = 2.0;
  std::string clause;
  Vec4 lower = Vec4::Constant(-1.0);
  Vec4 upper = Vec4::Constant(1.0);
  std::array<std::array<std::string, 4>, 4> components{};

  SamplingConfig sampling() const { return {samples, kappas, tuples, seed}; }

  void validate() const {
    if (nu.empty()) throw Error(ErrorKind::Usage, "nu list is empty");
    for (int n : nu)
      if (n < 1 || n > 4) throw Error(ErrorKind::Usage, "nu must be in 1..4, got " + std::to_string(n));
    if (!(t1 > 0.0 && t2 > 0.0)) throw Error(ErrorKind::Usage, "t1 and t2 must be positive");
    if (samples < 20 || kappas < 5 || tuples < 10) {
      throw Error(ErrorKind::Usage, "sampling budget below the minimum (samples >= 20, kappas >= 5, tuples >= 10)");
    }
    if (points < 1) throw Error(ErrorKind::Usage, "points must be positive");
    if (!(interval_lo > 0.0 && interval_hi > interval_lo)) throw Error(ErrorKind::Usage, "interval must satisfy 0 < lo < hi");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

inline double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0.0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    throw Error(ErrorKind::Usage, "'" + key + "' expects a number, got '" + v + "'");
  }
  if (used != v.size()) throw Error(ErrorKind::Usage, "'" + key + "' expects a number, got '" + v + "'");
  return d;
}

inline long long to_int(const std::string& key, const std::string& v) {
  const double d = to_double(key, v);
  if (d != std::floor(d)) throw Error(ErrorKind::Usage, "'" + key + "' expects an integer, got '" + v + "'");
  return static_cast<long long>(d);
}

inline Vec4 to_vec4(const std::string& key, const std::string& v) {
  const auto parts = split(v, ',');
  if (parts.size() != 4) throw Error(ErrorKind::Usage, "'" + key + "' expects four comma-separated numbers");
  Vec4 r;
  for (int i = 0; i < 4; ++i) r[i] = to_double(key, parts[static_cast<std::size_t>(i)]);
  return r;
}

}  // namespace detail

inline TParameter parse_parameter(const std::string& v) {
  if (v == "t1") return TParameter::T1;
  if (v == "t2") return TParameter::T2;
  if (v == "equal" || v == "t1=t2") return TParameter::Equal;
  throw Error(ErrorKind::Usage, "parameter must be t1, t2 or equal, got '" + v + "'");
}

inline Distribution parse_distribution(const std::string& v) {
  if (v == "D") return Distribution::Primary;
  if (v == "D-perp" || v == "Dperp") return Distribution::Complement;
  throw Error(ErrorKind::Usage, "distribution must be D or D-perp, got '" + v + "'");
}

inline ToleranceTier parse_tier(const std::string& v) {
  if (v == "analytic") return ToleranceTier::Analytic;
  if (v == "fd") return ToleranceTier::FiniteDifference;
  throw Error(ErrorKind::Usage, "tol-tier must be analytic or fd, got '" + v + "'");
}

inline std::vector<int> parse_nu_list(const std::string& v) {
  std::vector<int> out;
  for (const auto& p : detail::split(v, ',')) out.push_back(static_cast<int>(detail::to_int("nu", p)));
  return out;
}

/// Applies one key/value to the configuration.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "chart") c.chart = value;
  else if (key == "nu") c.nu = parse_nu_list(value);
  else if (key == "t1") c.t1 = detail::to_double(key, value);
  else if (key == "t2") c.t2 = detail::to_double(key, value);
  else if (key == "t-grid") {
    c.t_grid.clear();
    for (const auto& item : detail::split(value, ',')) {
      const auto pair = detail::split(item, ':');
      if (pair.size() != 2) throw Error(ErrorKind::Usage, "t-grid entries look like t1:t2");
      const double a = detail::to_double(key, pair[0]);
      const double b = detail::to_double(key, pair[1]);
      if (!(a > 0.0 && b > 0.0)) throw Error(ErrorKind::Usage, "t-grid values must be positive");
      c.t_grid.emplace_back(a, b);
    }
  } else if (key == "samples") c.samples = static_cast<int>(detail::to_int(key, value));
  else if (key == "kappas") c.kappas = static_cast<int>(detail::to_int(key, value));
  else if (key == "tuples") c.tuples = static_cast<int>(detail::to_int(key, value));
  else if (key == "seed") c.seed = static_cast<std::uint64_t>(detail::to_int(key, value));
  else if (key == "tol-tier") c.tier = parse_tier(value);
  else if (key == "out") c.out = value;
  else if (key == "points") c.points = static_cast<int>(detail::to_int(key, value));
  else if (key == "parameter") c.parameter = parse_parameter(value);
  else if (key == "distribution") c.distribution = parse_distribution(value);
  else if (key == "interval") {
    const auto parts = detail::split(value, ',');
    if (parts.size() != 2) throw Error(ErrorKind::Usage, "interval expects lo,hi");
    c.interval_lo = detail::to_double(key, parts[0]);
    c.interval_hi = detail::to_double(key, parts[1]);
  } else if (key == "clause") c.clause = value;
  else if (key == "lower") c.lower = detail::to_vec4(key, value);
  else if (key == "upper") c.upper = detail::to_vec4(key, value);
  else if (key.size() == 3 && key[0] == 'g' && key[1] >= '1' && key[1] <= '4' && key[2] >= '1' && key[2] <= '4') {
    c.components[static_cast<std::size_t>(key[1] - '1')][static_cast<std::size_t>(key[2] - '1')] = value;
  } else {
    throw Error(ErrorKind::Usage, "unknown configuration key '" + key + "'");
  }
}

inline void load_config_text(RunConfig& c, const std::string& text) {
  std::stringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::Usage, "line " + std::to_string(number) + ": expected key = value");
    }
    apply_setting(c, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
}

inline void load_config_file(RunConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Usage, "cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  load_config_text(c, ss.str());
}

/// Chart from an id of the form name[:key=value,...].
inline MetricChart make_chart(const RunConfig& c) {
  const std::string& spec = c.chart;
  const auto colon = spec.find(':');
  const std::string name = detail::trim(spec.substr(0, colon));
  std::map<std::string, std::string> args;
  if (colon != std::string::npos) {
    for (const auto& kv : detail::split(spec.substr(colon + 1), ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw Error(ErrorKind::Usage, "chart argument '" + kv + "' is not key=value");
      args[detail::trim(kv.substr(0, eq))] = detail::trim(kv.substr(eq + 1));
    }
  }
  auto take = [&](const std::string& key, double fallback) {
    const auto it = args.find(key);
    if (it == args.end()) return fallback;
    const double v = detail::to_double(key, it->second);
    args.erase(it);
    return v;
  };
  const double orientation = take("orientation", 1.0);
  if (orientation != 1.0 && orientation != -1.0) throw Error(ErrorKind::Usage, "orientation must be 1 or -1");
  std::optional<MetricChart> chart;
  if (name == "flat") chart = make_flat();
  else if (name == "sphere") chart = make_round_sphere(take("r", 1.0));
  else if (name == "cp2") chart = make_cp2(1);
  else if (name == "s2xs2") {
    const double a = take("a", 1.0);
    chart = make_s2xs2(a, take("b", 1.0));
  } else if (name == "perturbed") {
    const double amp = take("amp", 0.1);
    chart = make_perturbed_flat(amp, static_cast<unsigned>(take("seed", 7.0)));
  } else if (name == "user") chart = make_expression_chart("user", c.lower, c.upper, c.components);
  else if (name.empty()) throw Error(ErrorKind::Usage, "no chart given");
  else throw Error(ErrorKind::Usage, "unknown chart '" + name + "'");
  if (!args.empty()) throw Error(ErrorKind::Usage, "unknown chart argument '" + args.begin()->first + "' for " + name);
  if (orientation < 0.0) chart = chart->flipped().with_id(chart->id() + "(orientation=-1)");
  return *chart;
}

}  // namespace twistor
