#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "downcross/analysis.hpp"
#include "downcross/cli.hpp"
#include "downcross/errors.hpp"
#include "downcross/stats.hpp"

namespace downcross::cli {

namespace {

using nlohmann::json;

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(); }

json header(const char* command, const RunConfig& cfg) {
  return {{"version", version()}, {"command", command}, {"config", to_json(cfg)}};
}

OnsetLaw make_law(const RunConfig& cfg) {
  return OnsetLaw(HazardCurve(ScaleFunction(cfg.build_model(), cfg.scale_options()), cfg.c),
                  cfg.x0);
}

ClassifierOptions classifier_options(const RunConfig& cfg) {
  ClassifierOptions o;
  o.first_probe = cfg.classifier.first_probe;
  o.probe_limit = cfg.classifier.probe_limit;
  o.probes = cfg.classifier.probes;
  return o;
}

json fit_json(const TailFit& f) {
  return {{"K", finite_or_null(f.K)},   {"log_K", f.log_K}, {"p", f.p},
          {"s", f.s},                   {"k1", f.k1},       {"k2", f.k2},
          {"rms_residual", f.rms_residual}, {"points", f.points}};
}

}  // namespace

CommandResult cmd_classify(const RunConfig& cfg) {
  const ScaleFunction sf(cfg.build_model(), cfg.scale_options());
  const auto opts = classifier_options(cfg);
  const Verdict v = classify_downcrossing(sf, cfg.c, opts);

  CommandResult r;
  r.payload = header("classify", cfg);
  r.payload["classification"] = to_string(v.classification);
  r.payload["fit"] = fit_json(v.fit);
  r.payload["tail_integral_partial"] = finite_or_null(v.tail_integral_partial);
  r.payload["probe_start"] = v.probe_start;
  r.payload["probe_limit"] = v.probe_limit;
  r.payload["notes"] = v.notes;
  if (v.classification == DowncrossClass::StopsDownCrossing && sf.model().in_domain(cfg.x0 - cfg.c)) {
    const auto q = ever_downcross_probability(make_law(cfg), opts);
    r.payload["ever_downcross_probability"] = q.probability;
  }

  std::ostringstream csv;
  csv << "x,hazard,log_hazard\n";
  for (std::size_t i = 0; i < v.probes.size(); ++i) {
    csv << format_double(v.probes[i].first) << ',' << format_double(v.probes[i].second) << ','
        << format_double(v.log_probes[i].second) << '\n';
  }
  r.csv = csv.str();
  switch (v.classification) {
    case DowncrossClass::StopsDownCrossing: r.exit_code = 0; break;
    case DowncrossClass::DownCrossesForever: r.exit_code = 1; break;
    case DowncrossClass::Indeterminate: r.exit_code = 2; break;
  }
  return r;
}

CommandResult cmd_onset(const RunConfig& cfg) {
  const OnsetLaw law = make_law(cfg);
  CommandResult r;
  r.payload = header("onset", cfg);
  json rows = json::array();
  std::ostringstream csv;
  csv << "gamma,analytic,lower,upper\n";
  for (double g : cfg.gammas) {
    const double s = law.survival(g);
    const auto b = onset_survival_product_oracle(law, g, cfg.oracle_n);
    rows.push_back({{"gamma", g}, {"analytic", s}, {"lower", b.lower}, {"upper", b.upper}});
    csv << format_double(g) << ',' << format_double(s) << ',' << format_double(b.lower) << ','
        << format_double(b.upper) << '\n';
  }
  r.payload["rows"] = rows;
  r.csv = csv.str();
  return r;
}

CommandResult cmd_simulate(const RunConfig& cfg) {
  const auto model = cfg.build_model();
  const double c = cfg.simulation.c.value_or(cfg.c);
  const auto results =
      simulate_paths(model, cfg.path_config(), c, cfg.simulation.paths, cfg.workers);

  std::size_t events = 0, with_events = 0;
  std::map<std::string, std::size_t> exits;
  double onset_sum = 0.0;
  for (const auto& p : results) {
    events += p.events.size();
    if (!p.events.empty()) {
      ++with_events;
      onset_sum += p.events.front().onset_location - cfg.x0;
    }
    ++exits[to_string(p.exit_reason)];
  }
  CommandResult r;
  r.payload = header("simulate", cfg);
  r.payload["paths"] = results.size();
  r.payload["events"] = events;
  r.payload["paths_with_events"] = with_events;
  r.payload["mean_first_onset_offset"] =
      with_events ? json(onset_sum / static_cast<double>(with_events)) : json();
  r.payload["exits"] = exits;
  std::ostringstream csv;
  write_events_csv(csv, results);
  r.csv = csv.str();
  return r;
}

CommandResult cmd_verify(const RunConfig& cfg) {
  if (cfg.simulation.c && *cfg.simulation.c != cfg.c) {
    throw ConfigError("simulation.c (" + format_double(*cfg.simulation.c) +
                      ") differs from the analysis c (" + format_double(cfg.c) + ")");
  }
  const OnsetLaw law = make_law(cfg);
  const auto sample = sample_onset_locations(cfg.build_model(), cfg.path_config(), cfg.c,
                                             cfg.simulation.paths, cfg.workers);
  const auto emp = sample.survival(cfg.x0);
  if (emp.uncensored() == 0) throw InsufficientData("no path produced an onset");
  const double top = std::min(emp.censor_frontier(), emp.offsets().back());
  std::vector<double> grid;
  const int m = cfg.verify.grid_points;
  for (int i = 0; i < m; ++i) grid.push_back(top * static_cast<double>(i) / m);
  // Every jump of the empirical curve below the frontier, from both sides.
  for (double g : emp.offsets()) {
    if (g < emp.censor_frontier()) {
      grid.push_back(g);
      grid.push_back(std::nextafter(g, -1e300));
    }
  }
  const double ks = ks_distance(emp, law, grid);
  const double band = dkw_bound(emp.size(), cfg.verify.alpha);
  const bool pass = ks < band + cfg.verify.allowance;

  CommandResult r;
  r.payload = header("verify", cfg);
  r.payload["n"] = emp.size();
  r.payload["censored"] = emp.censored();
  r.payload["censor_frontier"] = finite_or_null(emp.censor_frontier());
  r.payload["ks"] = ks;
  r.payload["dkw"] = band;
  r.payload["alpha"] = cfg.verify.alpha;
  r.payload["allowance"] = cfg.verify.allowance;
  r.payload["pass"] = pass;

  std::ostringstream csv;
  csv << "gamma,empirical,analytic\n";
  std::vector<double> curve(grid.begin(), grid.begin() + m);
  const auto s = law.survival_curve(curve);
  for (int i = 0; i < m; ++i) {
    csv << format_double(curve[i]) << ',' << format_double(emp(curve[i])) << ','
        << format_double(s[i]) << '\n';
  }
  r.csv = csv.str();
  r.exit_code = pass ? 0 : 1;
  return r;
}

CommandResult cmd_bessel(const RunConfig& cfg) {
  const auto& b = cfg.bessel;
  const auto s = bessel_sequence_series(b.k, b.rho, b.n_max);
  CommandResult r;
  r.payload = header("bessel", cfg);
  r.payload["k"] = b.k;
  r.payload["rho"] = b.rho;
  r.payload["n_max"] = b.n_max;
  r.payload["decay_exponent"] = s.decay_exponent;
  r.payload["verdict"] = to_string(s.verdict);
  r.payload["partial_sum"] = s.partial_sums.back();
  r.payload["notes"] = s.notes;
  std::ostringstream csv;
  csv << "n,term,partial_sum\n";
  for (std::size_t i = 0; i < s.terms.size(); ++i) {
    csv << i + 2 << ',' << format_double(s.terms[i]) << ',' << format_double(s.partial_sums[i])
        << '\n';
  }
  r.csv = csv.str();
  return r;
}

}  // namespace downcross::cli
