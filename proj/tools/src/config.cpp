#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "downcross/cli.hpp"
#include "downcross/errors.hpp"

namespace downcross::cli {

namespace {

using nlohmann::json;

void check_keys(const json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError(where + " needs '" + key + "'");
  if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
  return j.at(key).get<double>();
}

template <class T>
void read_number(const json& j, const std::string& key, const std::string& where, T& out) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  const auto& v = j.at(key);
  if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
    out = v.get<T>();
  } else {
    if (!v.is_number_integer() && !v.is_number_unsigned()) {
      throw ConfigError(where + "." + key + " must be an integer");
    }
    if (std::is_unsigned_v<T> && v.is_number_integer() && v.get<long long>() < 0) {
      throw ConfigError(where + "." + key + " must be non-negative");
    }
    out = v.get<T>();
  }
}

std::string read_string(const json& j, const std::string& key, const std::string& where,
                        const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_string()) throw ConfigError(where + "." + key + " must be a string");
  return j.at(key).get<std::string>();
}

Scheme parse_scheme(const std::string& s) {
  if (s == "euler_maruyama") return Scheme::EulerMaruyama;
  if (s == "milstein") return Scheme::Milstein;
  throw ConfigError("simulation.scheme must be euler_maruyama or milstein");
}

Monitoring parse_monitoring(const std::string& s) {
  if (s == "discrete") return Monitoring::Discrete;
  if (s == "bridge") return Monitoring::BrownianBridge;
  throw ConfigError("simulation.monitoring must be discrete or bridge");
}

BoundaryPolicy parse_boundary(const std::string& s) {
  if (s == "abort") return BoundaryPolicy::Abort;
  if (s == "reflect") return BoundaryPolicy::Reflect;
  throw ConfigError("simulation.boundary must be abort or reflect");
}

const char* name(Scheme s) { return s == Scheme::Milstein ? "milstein" : "euler_maruyama"; }
const char* name(Monitoring m) { return m == Monitoring::BrownianBridge ? "bridge" : "discrete"; }
const char* name(BoundaryPolicy b) { return b == BoundaryPolicy::Reflect ? "reflect" : "abort"; }

// Rewrites a drift block with every default filled in.
json normalize_drift(const json& j) {
  const auto family = read_string(j, "family", "drift", "");
  if (family == "zero") {
    check_keys(j, "drift", {"family"});
    return {{"family", "zero"}};
  }
  if (family == "constant") {
    check_keys(j, "drift", {"family", "beta"});
    return {{"family", "constant"}, {"beta", get_number(j, "beta", "drift")}};
  }
  if (family == "logloglog") {
    check_keys(j, "drift", {"family", "c", "gamma", "x_cut", "clamp"});
    json out{{"family", "logloglog"},
             {"c", get_number(j, "c", "drift")},
             {"gamma", get_number(j, "gamma", "drift")},
             {"x_cut", DriftFamily::kDefaultCut}};
    read_number(j, "x_cut", "drift", out["x_cut"].get_ref<double&>());
    if (j.contains("clamp") && !j.at("clamp").is_null()) {
      out["clamp"] = get_number(j, "clamp", "drift");
    }
    return out;
  }
  if (family == "bessel") {
    check_keys(j, "drift", {"family", "k"});
    return {{"family", "bessel"}, {"k", get_number(j, "k", "drift")}};
  }
  if (family == "tabulated") {
    check_keys(j, "drift", {"family", "points"});
    if (!j.contains("points") || !j.at("points").is_array()) {
      throw ConfigError("tabulated drift needs a 'points' array of [x, b] pairs");
    }
    json pts = json::array();
    for (const auto& p : j.at("points")) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
        throw ConfigError("tabulated drift points must be [x, b] number pairs");
      }
      pts.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return {{"family", "tabulated"}, {"points", pts}};
  }
  if (family == "sum") {
    check_keys(j, "drift", {"family", "terms"});
    if (!j.contains("terms") || !j.at("terms").is_array() || j.at("terms").empty()) {
      throw ConfigError("sum drift needs a non-empty 'terms' array");
    }
    json terms = json::array();
    for (const auto& t : j.at("terms")) terms.push_back(normalize_drift(t));
    return {{"family", "sum"}, {"terms", terms}};
  }
  throw ConfigError("drift.family must be one of zero, constant, logloglog, bessel, "
                    "tabulated, sum (got '" + family + "')");
}

json normalize_diffusion(const json& j) {
  if (j.is_null()) return {{"type", "unit"}};
  check_keys(j, "diffusion", {"type", "value"});
  const auto type = read_string(j, "type", "diffusion", "unit");
  if (type == "unit") return {{"type", "unit"}};
  if (type == "constant") return {{"type", "constant"}, {"value", get_number(j, "value", "diffusion")}};
  throw ConfigError("diffusion.type must be unit or constant");
}

}  // namespace

const char* version() { return DOWNCROSS_VERSION; }

DriftFamily parse_drift(const json& raw) {
  const json j = normalize_drift(raw);
  const auto family = j.at("family").get<std::string>();
  try {
    if (family == "zero") return DriftFamily::zero();
    if (family == "constant") return DriftFamily::constant(j.at("beta").get<double>());
    if (family == "logloglog") {
      std::optional<double> clamp;
      if (j.contains("clamp")) clamp = j.at("clamp").get<double>();
      return DriftFamily::logloglog(j.at("c").get<double>(), j.at("gamma").get<double>(),
                                    j.at("x_cut").get<double>(), clamp);
    }
    if (family == "bessel") return DriftFamily::bessel(j.at("k").get<double>());
    if (family == "tabulated") {
      std::vector<std::pair<double, double>> pts;
      for (const auto& p : j.at("points")) pts.emplace_back(p[0].get<double>(), p[1].get<double>());
      return DriftFamily::tabulated(std::move(pts));
    }
    std::vector<DriftFamily> terms;
    for (const auto& t : j.at("terms")) terms.push_back(parse_drift(t));
    return DriftFamily::sum(std::move(terms));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid drift: ") + e.what());
  }
}

DiffusionCoefficient parse_diffusion(const json& raw) {
  const json j = normalize_diffusion(raw);
  if (j.at("type") == "unit") return DiffusionCoefficient::unit();
  const double v = j.at("value").get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("diffusion.value must be positive");
  return DiffusionCoefficient::constant(v);
}

DiffusionModel RunConfig::build_model() const {
  return DiffusionModel(parse_drift(model.at("drift")),
                        parse_diffusion(model.value("diffusion", json())));
}

ScaleOptions RunConfig::scale_options() const {
  ScaleOptions o;
  o.abs_tol = abs_tol;
  o.rel_tol = rel_tol;
  return o;
}

PathConfig RunConfig::path_config() const {
  PathConfig p;
  p.x0 = x0;
  p.dt = simulation.dt;
  p.t_max = simulation.t_max;
  p.x_stop = simulation.x_stop;
  p.seed = seed;
  p.scheme = simulation.scheme;
  p.monitoring = simulation.monitoring;
  p.boundary = simulation.boundary;
  p.max_events = simulation.max_events;
  return p;
}

RunConfig parse_config(const json& input) {
  const json& j = (input.is_object() && input.contains("config") && !input.contains("model"))
                      ? input.at("config")
                      : input;
  check_keys(j, "config",
             {"model", "c", "x0", "gammas", "oracle_n", "seed", "tolerance", "workers",
              "simulation", "classifier", "bessel", "verify"});
  RunConfig cfg;
  if (j.contains("model")) {
    const auto& m = j.at("model");
    check_keys(m, "model", {"drift", "diffusion"});
    if (!m.contains("drift")) throw ConfigError("model needs a 'drift' block");
    cfg.model = {{"drift", normalize_drift(m.at("drift"))},
                 {"diffusion", normalize_diffusion(m.value("diffusion", json()))}};
  } else {
    cfg.model = {{"drift", {{"family", "zero"}}}, {"diffusion", {{"type", "unit"}}}};
  }
  read_number(j, "c", "config", cfg.c);
  if (!(cfg.c > 0.0) || !std::isfinite(cfg.c)) throw ConfigError("c must be positive");
  read_number(j, "x0", "config", cfg.x0);
  if (!std::isfinite(cfg.x0)) throw ConfigError("x0 must be finite");
  if (j.contains("gammas")) {
    if (!j.at("gammas").is_array()) throw ConfigError("gammas must be an array of numbers");
    cfg.gammas.clear();
    for (const auto& g : j.at("gammas")) {
      if (!g.is_number() || g.get<double>() < 0.0) {
        throw ConfigError("gammas must be non-negative numbers");
      }
      cfg.gammas.push_back(g.get<double>());
    }
  }
  read_number(j, "oracle_n", "config", cfg.oracle_n);
  if (cfg.oracle_n < 1) throw ConfigError("oracle_n must be at least 1");
  read_number(j, "seed", "config", cfg.seed);
  read_number(j, "workers", "config", cfg.workers);
  if (j.contains("tolerance")) {
    const auto& t = j.at("tolerance");
    check_keys(t, "tolerance", {"abs", "rel"});
    read_number(t, "abs", "tolerance", cfg.abs_tol);
    read_number(t, "rel", "tolerance", cfg.rel_tol);
    if (!(cfg.abs_tol > 0.0) || !(cfg.rel_tol > 0.0)) {
      throw ConfigError("tolerances must be positive");
    }
  }
  if (j.contains("simulation")) {
    const auto& s = j.at("simulation");
    check_keys(s, "simulation",
               {"dt", "t_max", "x_stop", "paths", "scheme", "monitoring", "boundary",
                "max_events", "c"});
    auto& sim = cfg.simulation;
    read_number(s, "dt", "simulation", sim.dt);
    read_number(s, "t_max", "simulation", sim.t_max);
    read_number(s, "x_stop", "simulation", sim.x_stop);
    read_number(s, "paths", "simulation", sim.paths);
    read_number(s, "max_events", "simulation", sim.max_events);
    sim.scheme = parse_scheme(read_string(s, "scheme", "simulation", "euler_maruyama"));
    sim.monitoring = parse_monitoring(read_string(s, "monitoring", "simulation", "discrete"));
    sim.boundary = parse_boundary(read_string(s, "boundary", "simulation", "abort"));
    if (s.contains("c") && !s.at("c").is_null()) sim.c = get_number(s, "c", "simulation");
    if (!(sim.dt > 0.0) || !(sim.dt < sim.t_max)) {
      throw ConfigError("simulation needs 0 < dt < t_max");
    }
    if (sim.paths == 0) throw ConfigError("simulation.paths must be at least 1");
  }
  if (j.contains("classifier")) {
    const auto& s = j.at("classifier");
    check_keys(s, "classifier", {"first_probe", "probe_limit", "probes"});
    if (s.contains("first_probe") && !s.at("first_probe").is_null()) {
      cfg.classifier.first_probe = get_number(s, "first_probe", "classifier");
    }
    read_number(s, "probe_limit", "classifier", cfg.classifier.probe_limit);
    read_number(s, "probes", "classifier", cfg.classifier.probes);
    if (cfg.classifier.probes < 8) throw ConfigError("classifier.probes must be at least 8");
  }
  if (j.contains("bessel")) {
    const auto& s = j.at("bessel");
    check_keys(s, "bessel", {"k", "rho", "n_max"});
    read_number(s, "k", "bessel", cfg.bessel.k);
    read_number(s, "rho", "bessel", cfg.bessel.rho);
    read_number(s, "n_max", "bessel", cfg.bessel.n_max);
  }
  if (j.contains("verify")) {
    const auto& s = j.at("verify");
    check_keys(s, "verify", {"alpha", "allowance", "grid_points"});
    read_number(s, "alpha", "verify", cfg.verify.alpha);
    read_number(s, "allowance", "verify", cfg.verify.allowance);
    read_number(s, "grid_points", "verify", cfg.verify.grid_points);
    if (!(cfg.verify.alpha > 0.0 && cfg.verify.alpha < 1.0)) {
      throw ConfigError("verify.alpha must lie in (0, 1)");
    }
    if (cfg.verify.grid_points < 2) throw ConfigError("verify.grid_points must be at least 2");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const RunConfig& cfg) {
  const auto& sim = cfg.simulation;
  json s{{"dt", sim.dt},
         {"t_max", sim.t_max},
         {"x_stop", std::isfinite(sim.x_stop) ? json(sim.x_stop) : json()},
         {"paths", sim.paths},
         {"scheme", name(sim.scheme)},
         {"monitoring", name(sim.monitoring)},
         {"boundary", name(sim.boundary)},
         {"max_events", sim.max_events},
         {"c", sim.c ? json(*sim.c) : json()}};
  json cls{{"first_probe", cfg.classifier.first_probe ? json(*cfg.classifier.first_probe) : json()},
           {"probe_limit", cfg.classifier.probe_limit},
           {"probes", cfg.classifier.probes}};
  return {{"model", cfg.model},
          {"c", cfg.c},
          {"x0", cfg.x0},
          {"gammas", cfg.gammas},
          {"oracle_n", cfg.oracle_n},
          {"seed", cfg.seed},
          {"tolerance", {{"abs", cfg.abs_tol}, {"rel", cfg.rel_tol}}},
          {"workers", cfg.workers},
          {"simulation", s},
          {"classifier", cls},
          {"bessel", {{"k", cfg.bessel.k}, {"rho", cfg.bessel.rho}, {"n_max", cfg.bessel.n_max}}},
          {"verify",
           {{"alpha", cfg.verify.alpha},
            {"allowance", cfg.verify.allowance},
            {"grid_points", cfg.verify.grid_points}}}};
}

}  // namespace downcross::cli
