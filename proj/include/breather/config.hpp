#ifndef BREATHER_CONFIG_HPP
#define BREATHER_CONFIG_HPP

#include "potential.hpp"
#include "solver.hpp"
#include "spectrum.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace breather {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScanConfig {
  double lambda_max = 0;  // 0: ((K + 4) omega)^2
  double resolution = 0;  // sqrt(lambda) step, 0: default
};

struct DensityConfig {
  double lambda_max = 0;  // 0: scan range
  int nodes_per_band = 256;
};

struct CheckConfig {
  int k_max = 7;
  bool embedding = true;
};

struct BoundsConfig {
  Interval I{0.0, 2.0}, J{0.5, 1.5};
  double lambda_max = 1e4;
  int samples = 2000;
  int angles = 32;
};

struct OutputConfig {
  int field_nx = 401;  // samples of x in [-R, R]
  int field_nt = 64;   // samples of t in [0, T)
};

struct RunConfig {
  std::optional<Potential> potential;
  std::optional<NonlinearityProfile> gamma;
  ExactNumber T;
  double omega = 0;
  ScanConfig scan;
  DensityConfig density;
  CheckConfig check;
  BoundsConfig bounds;
  BreatherConfig solver;
  OutputConfig output;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  nlohmann::json source;  // as read, after command-line overrides

  const Potential& pot() const { return *potential; }
  double scan_lambda_max() const {
    return scan.lambda_max > 0 ? scan.lambda_max : std::pow((solver.K + 4) * omega, 2);
  }
};

namespace detail {

using nlohmann::json;

inline void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

inline const json& require(const json& j, const std::string& where, const char* key) {
  if (!j.contains(key)) throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

// Integer, float (exact if dyadic) or "p/q" string.
inline ExactNumber number(const json& j, const std::string& where) {
  if (j.is_number_integer()) return ExactNumber(static_cast<long long>(j.get<std::int64_t>()));
  if (j.is_number_unsigned()) return ExactNumber(static_cast<long long>(j.get<std::uint64_t>()));
  if (j.is_number_float()) {
    ExactNumber e(j.get<double>());
    e.exact = dyadic_exact(e.value);
    return e;
  }
  if (j.is_string()) {
    try {
      return parse_exact(j.get<std::string>());
    } catch (const std::exception& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected a number or \"p/q\" string");
}

inline double real(const json& j, const std::string& where) {
  const double v = number(j, where).value;
  if (!std::isfinite(v)) throw ConfigError(where + ": not finite");
  return v;
}

inline int integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ConfigError(where + ": expected an integer");
  return j.get<int>();
}

template <class T>
void read_if(const json& j, const char* key, T& dst, const std::string& where) {
  if (!j.contains(key)) return;
  const std::string w = where + "." + key;
  if constexpr (std::is_same_v<T, int>)
    dst = integer(j.at(key), w);
  else if constexpr (std::is_same_v<T, bool>) {
    if (!j.at(key).is_boolean()) throw ConfigError(w + ": expected true/false");
    dst = j.at(key).get<bool>();
  } else
    dst = real(j.at(key), w);
}

inline Interval interval(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) throw ConfigError(where + ": expected [lo, hi]");
  return {real(j[0], where), real(j[1], where)};
}

// {"steps": [[fraction, value], ...], "X": period}
inline StepProfile step_profile(const json& j, const std::string& where) {
  allow_keys(j, where, {"steps", "X"});
  const json& steps = require(j, where, "steps");
  if (!steps.is_array() || steps.empty()) throw ConfigError(where + ".steps: expected a nonempty list");
  std::vector<std::pair<ExactNumber, ExactNumber>> s;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string w = where + ".steps[" + std::to_string(i) + "]";
    if (!steps[i].is_array() || steps[i].size() != 2) throw ConfigError(w + ": expected [fraction, value]");
    s.emplace_back(number(steps[i][0], w), number(steps[i][1], w));
  }
  try {
    return StepProfile::from_fractions(s, number(require(j, where, "X"), where + ".X"));
  } catch (const InvalidProfile& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

inline Potential potential(const json& j) {
  const std::string where = "potential";
  allow_keys(j, where, {"type", "periodic", "dislocation", "interface"});
  std::string type;
  if (j.contains("type")) {
    if (!j.at("type").is_string()) throw ConfigError("potential.type: expected a string");
    type = j.at("type").get<std::string>();
  } else {
    type = j.contains("interface") ? "interface" : j.contains("dislocation") ? "dislocation" : "periodic";
  }
  try {
    if (type == "periodic") {
      if (j.contains("dislocation") || j.contains("interface"))
        throw ConfigError("potential: periodic type takes only 'periodic'");
      return make_periodic(step_profile(require(j, where, "periodic"), "potential.periodic"));
    }
    if (type == "dislocation") {
      if (j.contains("interface")) throw ConfigError("potential: dislocation type takes no 'interface'");
      const Potential base = make_periodic(step_profile(require(j, where, "periodic"), "potential.periodic"));
      const json& d = require(j, where, "dislocation");
      allow_keys(d, "potential.dislocation", {"V0", "d"});
      return make_dislocation(base, number(require(d, "potential.dislocation", "V0"), "potential.dislocation.V0"),
                              number(require(d, "potential.dislocation", "d"), "potential.dislocation.d"));
    }
    if (type == "interface") {
      if (j.contains("periodic") || j.contains("dislocation"))
        throw ConfigError("potential: interface type takes only 'interface'");
      const json& i = require(j, where, "interface");
      allow_keys(i, "potential.interface", {"left", "right"});
      return make_interface(
          make_periodic(step_profile(require(i, "potential.interface", "left"), "potential.interface.left")),
          make_periodic(step_profile(require(i, "potential.interface", "right"), "potential.interface.right")));
    }
  } catch (const InvalidProfile& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("potential.type: expected periodic, dislocation or interface, got '" + type + "'");
}

// {"mode": "compact" | "asymptotically-periodic", "steps": [...], "X": ..., "loc": [...]}
inline NonlinearityProfile gamma(const json& j) {
  const std::string where = "gamma";
  allow_keys(j, where, {"mode", "steps", "X", "loc"});
  std::string mode = "compact";
  if (j.contains("mode")) {
    if (!j.at("mode").is_string()) throw ConfigError("gamma.mode: expected a string");
    mode = j.at("mode").get<std::string>();
  }
  GammaMode gm;
  if (mode == "compact")
    gm = GammaMode::compact;
  else if (mode == "asymptotically-periodic")
    gm = GammaMode::asymptotically_periodic;
  else
    throw ConfigError("gamma.mode: expected compact or asymptotically-periodic, got '" + mode + "'");
  std::optional<StepProfile> per;
  if (j.contains("steps") || j.contains("X")) {
    json pj = json::object();
    if (j.contains("steps")) pj["steps"] = j.at("steps");
    if (j.contains("X")) pj["X"] = j.at("X");
    per = step_profile(pj, where);
  }
  std::vector<LocalStep> steps;
  std::vector<Bump> bumps;
  if (j.contains("loc")) {
    const json& loc = j.at("loc");
    if (!loc.is_array()) throw ConfigError("gamma.loc: expected a list");
    for (std::size_t i = 0; i < loc.size(); ++i) {
      const std::string w = "gamma.loc[" + std::to_string(i) + "]";
      const json& e = loc[i];
      if (!e.is_object() || !e.contains("type") || !e.at("type").is_string())
        throw ConfigError(w + ": expected an object with a 'type'");
      const std::string t = e.at("type").get<std::string>();
      if (t == "bump") {
        allow_keys(e, w, {"type", "center", "half_width", "amplitude"});
        Bump b;
        b.center = real(require(e, w, "center"), w + ".center");
        b.half_width = real(require(e, w, "half_width"), w + ".half_width");
        read_if(e, "amplitude", b.amplitude, w);
        bumps.push_back(b);
      } else if (t == "step") {
        allow_keys(e, w, {"type", "from", "to", "value"});
        LocalStep s;
        s.from = real(require(e, w, "from"), w + ".from");
        s.to = real(require(e, w, "to"), w + ".to");
        s.value = real(require(e, w, "value"), w + ".value");
        steps.push_back(s);
      } else {
        throw ConfigError(w + ".type: expected bump or step, got '" + t + "'");
      }
    }
  }
  try {
    return NonlinearityProfile(gm, per, steps, bumps);
  } catch (const InvalidProfile& e) {
    throw ConfigError(std::string("gamma: ") + e.what());
  }
}

inline void solver(const json& j, BreatherConfig& c) {
  const std::string w = "solver";
  allow_keys(j, w, {"K", "m", "R", "lambda_max", "density", "gl_order", "time_factor", "tol_inner",
                    "tol_outer", "max_inner", "max_outer", "n_starts", "max_enlarge", "boundary_tol"});
  read_if(j, "K", c.K, w);
  read_if(j, "m", c.m_class, w);
  read_if(j, "R", c.R, w);
  read_if(j, "lambda_max", c.lambda_max, w);
  read_if(j, "density", c.grid.density, w);
  read_if(j, "gl_order", c.grid.gl_order, w);
  read_if(j, "time_factor", c.grid.time_factor, w);
  read_if(j, "tol_inner", c.solve.tol_inner, w);
  read_if(j, "tol_outer", c.solve.tol_outer, w);
  read_if(j, "max_inner", c.solve.max_inner, w);
  read_if(j, "max_outer", c.solve.max_outer, w);
  read_if(j, "n_starts", c.solve.n_starts, w);
  read_if(j, "max_enlarge", c.solve.max_enlarge, w);
  read_if(j, "boundary_tol", c.solve.boundary_tol, w);
  if (c.K < 1 || c.K % 2 == 0) throw ConfigError("solver.K: expected a positive odd integer");
  if (c.m_class < 1 || c.m_class % 2 == 0) throw ConfigError("solver.m: expected a positive odd integer");
  if (c.m_class > c.K) throw ConfigError("solver.m: exceeds K");
  if (c.R < 0 || c.lambda_max < 0) throw ConfigError("solver: R and lambda_max must be nonnegative");
  if (!(c.grid.density > 0) || c.grid.gl_order < 2 || c.grid.time_factor < 1)
    throw ConfigError("solver: invalid grid settings");
  if (!(c.solve.tol_inner > 0) || !(c.solve.tol_outer > 0) || c.solve.max_inner < 1 || c.solve.max_outer < 1 ||
      c.solve.n_starts < 0 || c.solve.max_enlarge < 0 || !(c.solve.boundary_tol > 0))
    throw ConfigError("solver: invalid tolerance or iteration settings");
}

}  // namespace detail

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::allow_keys;
  RunConfig c;
  allow_keys(j, "config",
             {"potential", "gamma", "p", "T", "omega", "seed", "threads", "scan", "density", "check", "bounds",
              "solver", "output"});
  c.source = j;
  c.potential = detail::potential(detail::require(j, "config", "potential"));
  if (j.contains("gamma")) c.gamma = detail::gamma(j.at("gamma"));

  if (j.contains("T") == j.contains("omega")) throw ConfigError("config: give exactly one of 'T' and 'omega'");
  if (j.contains("T")) {
    c.T = detail::number(j.at("T"), "T");
    if (!(c.T.value > 0) || !std::isfinite(c.T.value)) throw ConfigError("T: must be positive");
    c.omega = 2.0 * std::numbers::pi / c.T.value;
  } else {
    c.omega = detail::real(j.at("omega"), "omega");
    if (!(c.omega > 0)) throw ConfigError("omega: must be positive");
    c.T = ExactNumber(2.0 * std::numbers::pi / c.omega);
  }
  c.solver.omega = c.omega;
  if (j.contains("p")) {
    c.solver.p = detail::real(j.at("p"), "p");
    if (!(c.solver.p > 1)) throw ConfigError("p: must exceed 1");
  }
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
      throw ConfigError("seed: expected a nonnegative integer");
    if (j.at("seed").is_number_integer() && j.at("seed").get<std::int64_t>() < 0)
      throw ConfigError("seed: expected a nonnegative integer");
    c.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    const int t = detail::integer(j.at("threads"), "threads");
    if (t < 0) throw ConfigError("threads: must be nonnegative");
    c.threads = unsigned(t);
  }
  c.solver.solve.seed = c.seed;
  if (j.contains("solver")) detail::solver(j.at("solver"), c.solver);

  if (j.contains("scan")) {
    const auto& s = j.at("scan");
    allow_keys(s, "scan", {"lambda_max", "resolution"});
    detail::read_if(s, "lambda_max", c.scan.lambda_max, "scan");
    detail::read_if(s, "resolution", c.scan.resolution, "scan");
    if (c.scan.lambda_max < 0 || c.scan.resolution < 0) throw ConfigError("scan: values must be nonnegative");
  }
  if (j.contains("density")) {
    const auto& s = j.at("density");
    allow_keys(s, "density", {"lambda_max", "nodes_per_band"});
    detail::read_if(s, "lambda_max", c.density.lambda_max, "density");
    detail::read_if(s, "nodes_per_band", c.density.nodes_per_band, "density");
    if (c.density.lambda_max < 0 || c.density.nodes_per_band < 2) throw ConfigError("density: invalid settings");
  }
  if (j.contains("check")) {
    const auto& s = j.at("check");
    allow_keys(s, "check", {"k_max", "embedding"});
    detail::read_if(s, "k_max", c.check.k_max, "check");
    detail::read_if(s, "embedding", c.check.embedding, "check");
    if (c.check.k_max < 1 || c.check.k_max % 2 == 0) throw ConfigError("check.k_max: expected a positive odd integer");
  }
  if (j.contains("bounds")) {
    const auto& s = j.at("bounds");
    allow_keys(s, "bounds", {"I", "J", "lambda_max", "samples", "angles"});
    if (s.contains("I")) c.bounds.I = detail::interval(s.at("I"), "bounds.I");
    if (s.contains("J")) c.bounds.J = detail::interval(s.at("J"), "bounds.J");
    detail::read_if(s, "lambda_max", c.bounds.lambda_max, "bounds");
    detail::read_if(s, "samples", c.bounds.samples, "bounds");
    detail::read_if(s, "angles", c.bounds.angles, "bounds");
    if (!(c.bounds.I.hi > c.bounds.I.lo) || !(c.bounds.J.hi > c.bounds.J.lo))
      throw ConfigError("bounds: degenerate interval");
    if (c.bounds.J.lo < c.bounds.I.lo || c.bounds.J.hi > c.bounds.I.hi)
      throw ConfigError("bounds: J must lie inside I");
    if (!(c.bounds.lambda_max > 0) || c.bounds.samples < 1 || c.bounds.angles < 3)
      throw ConfigError("bounds: invalid sampling settings");
  }
  if (j.contains("output")) {
    const auto& s = j.at("output");
    allow_keys(s, "output", {"field_nx", "field_nt"});
    detail::read_if(s, "field_nx", c.output.field_nx, "output");
    detail::read_if(s, "field_nt", c.output.field_nt, "output");
    if (c.output.field_nx < 2 || c.output.field_nt < 1) throw ConfigError("output: invalid field sampling");
  }
  return c;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return nlohmann::json::parse(ss.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
}

inline RunConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

}  // namespace breather

#endif
