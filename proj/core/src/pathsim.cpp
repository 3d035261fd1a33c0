#include "downcross/pathsim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "downcross/errors.hpp"
#include "downcross/parallel.hpp"
#include "downcross/rng.hpp"

namespace downcross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// a'(x) by central difference; zero for a constant coefficient.
double diffusion_slope(const DiffusionModel& model, double x) {
  if (model.diffusion_coefficient().is_constant()) return 0.0;
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  double lo = x - h;
  if (!model.in_domain(lo)) lo = x;
  return (model.diffusion(x + h) - model.diffusion(lo)) / (x + h - lo);
}

// One step of the chosen scheme from x with standard normal z.
double step(const DiffusionModel& model, Scheme scheme, double x, double dt, double sqrt_dt,
            double z) {
  const double a = model.diffusion(x);
  const double dw = sqrt_dt * z;
  double next = x + model.drift(x) * dt + std::sqrt(a) * dw;
  if (scheme == Scheme::Milstein) next += 0.25 * diffusion_slope(model, x) * (dw * dw - dt);
  return next;
}

double enforce_domain(const DiffusionModel& model, BoundaryPolicy policy, double x) {
  if (model.in_domain(x)) return x;
  if (policy == BoundaryPolicy::Reflect) {
    const double r = 2.0 * model.domain_lower() - x;
    if (model.in_domain(r)) return r;
  }
  throw DomainError("simulated path left the state space at x = " + format_double(x));
}

}  // namespace

void PathConfig::validate() const {
  if (!(dt > 0.0) || !(dt < t_max)) throw std::invalid_argument("path config needs 0 < dt < t_max");
  if (!std::isfinite(x0)) throw std::invalid_argument("path start must be finite");
}

DrawdownDetector::DrawdownDetector(double c) : c_(c) {
  if (!(c > 0.0)) throw std::invalid_argument("crossing depth c must be positive");
}

void DrawdownDetector::start(double x, double t) {
  record_ = x;
  record_time_ = t;
  last_onset_ = -kInf;
  armed_ = true;
}

std::optional<CrossingEvent> DrawdownDetector::observe(double x, double t) {
  if (!armed_) {
    if (!(x > last_onset_)) return std::nullopt;
    armed_ = true;
    record_ = x;
    record_time_ = t;
    return std::nullopt;
  }
  if (x > record_) {
    record_ = x;
    record_time_ = t;
    return std::nullopt;
  }
  if (x <= record_ - c_) {
    armed_ = false;
    last_onset_ = record_;
    return CrossingEvent{record_, record_time_, t};
  }
  return std::nullopt;
}

std::optional<CrossingEvent> DrawdownDetector::observe_bridge(double x_prev, double x, double t,
                                                              double variance, double u_cross,
                                                              double u_max) {
  if (armed_) {
    const double level = record_ - c_;
    if (x <= level ||
        u_cross < std::exp(-2.0 * (x_prev - level) * (x - level) / variance)) {
      armed_ = false;
      last_onset_ = record_;
      return CrossingEvent{record_, record_time_, t};
    }
  }
  // Maximum of the bridge from x_prev to x.
  const double d = x - x_prev;
  const double peak = 0.5 * (x_prev + x + std::sqrt(d * d - 2.0 * variance * std::log1p(-u_max)));
  if (!armed_) {
    if (!(peak > last_onset_)) return std::nullopt;
    armed_ = true;
    record_ = peak;
    record_time_ = t;
  } else if (peak > record_) {
    record_ = peak;
    record_time_ = t;
  }
  return std::nullopt;
}

LiteralOnsetTracker::LiteralOnsetTracker(double c) : c_(c) {
  if (!(c > 0.0)) throw std::invalid_argument("crossing depth c must be positive");
}

void LiteralOnsetTracker::push(double x, double t) {
  const std::size_t i = count_++;
  auto it = std::partition_point(records_.begin(), records_.end(),
                                 [&](const Record& r) { return !(x <= r.value - c_); });
  if (it != records_.end() && (!best_ || it->index < best_->onset_index)) {
    best_ = LiteralOnset{it->index, i, it->value, it->time};
  }
  if (records_.empty() || x > records_.back().value) records_.push_back({x, i, t});
}

PathResult simulate_path(const DiffusionModel& model, const PathConfig& cfg, double c) {
  cfg.validate();
  if (!model.in_domain(cfg.x0)) throw DomainError("path start lies outside the state space");
  DrawdownDetector detector(c);
  std::optional<LiteralOnsetTracker> literal;
  if (cfg.track_literal) literal.emplace(c);

  PathResult out;
  NormalStream normal(cfg.seed);
  const double sqrt_dt = std::sqrt(cfg.dt);
  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.dt - 1e-9));

  double x = cfg.x0;
  double running_max = x;
  detector.start(x, 0.0);
  if (literal) literal->push(x, 0.0);
  if (cfg.record_path) out.path.push_back(x);

  std::size_t j = 0;
  if (x >= cfg.x_stop) out.exit_reason = ExitReason::AbsorbedAtStop;
  while (out.exit_reason != ExitReason::AbsorbedAtStop && j < n_steps) {
    const double prev = x;
    const double variance = model.diffusion(prev) * cfg.dt;
    x = enforce_domain(model, cfg.boundary,
                       step(model, cfg.scheme, x, cfg.dt, sqrt_dt, normal()));
    ++j;
    const double t = static_cast<double>(j) * cfg.dt;
    running_max = std::max(running_max, x);
    if (cfg.record_path) out.path.push_back(x);
    if (literal) literal->push(x, t);
    std::optional<CrossingEvent> ev;
    if (cfg.monitoring == Monitoring::BrownianBridge) {
      const double u_cross = normal.uniform();
      const double u_max = normal.uniform();
      ev = detector.observe_bridge(prev, x, t, variance, u_cross, u_max);
      running_max = std::max(running_max, detector.record());
    } else {
      ev = detector.observe(x, t);
    }
    if (ev) {
      out.events.push_back(*ev);
      if (cfg.max_events != 0 && out.events.size() >= cfg.max_events) {
        out.exit_reason = ExitReason::EventLimit;
        break;
      }
    }
    if (x >= cfg.x_stop) out.exit_reason = ExitReason::AbsorbedAtStop;
  }
  out.final_x = x;
  out.final_t = static_cast<double>(j) * cfg.dt;
  out.steps = j;
  out.running_max = running_max;
  if (!out.events.empty()) out.first_onset = out.events.front().onset_location;
  if (literal) out.literal_onset = literal->onset();
  return out;
}

std::vector<PathResult> simulate_paths(const DiffusionModel& model, const PathConfig& cfg,
                                       double c, std::size_t n_paths, unsigned workers) {
  cfg.validate();
  std::vector<PathResult> results(n_paths);
  parallel_for_index(n_paths, workers, [&](std::size_t i) {
    PathConfig local = cfg;
    local.seed = derive_seed(cfg.seed, i);
    results[i] = simulate_path(model, local, c);
  });
  return results;
}

EmpiricalSurvival OnsetSample::survival(double x0) const {
  return EmpiricalSurvival::from_onsets(onsets, x0, censor_levels);
}

OnsetSample sample_onset_locations(const DiffusionModel& model, const PathConfig& cfg, double c,
                                   std::size_t n_paths, unsigned workers) {
  if (n_paths == 0) throw std::invalid_argument("need at least one path");
  PathConfig first_only = cfg;
  first_only.max_events = 1;
  first_only.record_path = false;
  first_only.track_literal = false;
  OnsetSample out;
  out.onsets.resize(n_paths);
  out.censor_levels.resize(n_paths);
  out.exits.resize(n_paths);
  parallel_for_index(n_paths, workers, [&](std::size_t i) {
    PathConfig local = first_only;
    local.seed = derive_seed(cfg.seed, i);
    const PathResult r = simulate_path(model, local, c);
    out.onsets[i] = r.first_onset;
    // Without an event so far the onset is at least the running maximum.
    out.censor_levels[i] = r.first_onset ? kInf : r.running_max - cfg.x0;
    out.exits[i] = r.exit_reason;
  });
  return out;
}

ProportionEstimate estimate_ever_downcross(const DiffusionModel& model, const PathConfig& cfg,
                                           double c, std::size_t n_paths, unsigned workers) {
  const OnsetSample s = sample_onset_locations(model, cfg, c, n_paths, workers);
  ProportionEstimate out;
  out.trials = n_paths;
  for (std::size_t i = 0; i < n_paths; ++i) {
    if (s.onsets[i]) {
      ++out.successes;
    } else if (s.exits[i] == ExitReason::HorizonReached) {
      ++out.unresolved;
    }
  }
  out.fraction = static_cast<double>(out.successes) / static_cast<double>(n_paths);
  out.wilson = wilson_interval(out.successes, n_paths);
  return out;
}

ProportionEstimate estimate_hitting_probability(const DiffusionModel& model, double w, double y,
                                                double z, std::size_t n_paths,
                                                const HittingConfig& cfg, unsigned workers) {
  if (!(y < w && w < z)) throw DomainError("hitting estimate needs y < w < z");
  if (!(cfg.dt > 0.0) || !(cfg.dt < cfg.t_max)) {
    throw std::invalid_argument("hitting config needs 0 < dt < t_max");
  }
  if (n_paths == 0) throw std::invalid_argument("need at least one path");
  if (!model.in_domain(y)) throw DomainError("lower barrier lies outside the state space");

  enum : char { kMiss = 0, kHit = 1, kOpen = 2 };
  std::vector<char> outcome(n_paths, kOpen);
  const auto n_steps = static_cast<std::size_t>(std::ceil(cfg.t_max / cfg.dt));
  const double sqrt_dt = std::sqrt(cfg.dt);
  parallel_for_index(n_paths, workers, [&](std::size_t i) {
    NormalStream normal(derive_seed(cfg.seed, i));
    double x = w;
    for (std::size_t j = 0; j < n_steps; ++j) {
      const double a = model.diffusion(x);
      const double next = step(model, cfg.scheme, x, cfg.dt, sqrt_dt, normal());
      if (next <= y) {
        outcome[i] = kMiss;
        return;
      }
      if (next >= z) {
        outcome[i] = kHit;
        return;
      }
      if (cfg.bridge_correction) {
        const double two_over_var = 2.0 / (a * cfg.dt);
        if (normal.uniform() < std::exp(-two_over_var * (x - y) * (next - y))) {
          outcome[i] = kMiss;
          return;
        }
        if (normal.uniform() < std::exp(-two_over_var * (z - x) * (z - next))) {
          outcome[i] = kHit;
          return;
        }
      }
      x = next;
    }
  });

  ProportionEstimate out;
  out.trials = n_paths;
  for (char o : outcome) {
    if (o == kHit) ++out.successes;
    if (o == kOpen) ++out.unresolved;
  }
  out.fraction = static_cast<double>(out.successes) / static_cast<double>(n_paths);
  out.wilson = wilson_interval(out.successes, n_paths);
  return out;
}

std::string format_double(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_events_csv(std::ostream& os, std::span<const PathResult> results) {
  os << "path_id,onset_location,onset_time,completion_time\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    for (const auto& e : results[i].events) {
      os << i << ',' << format_double(e.onset_location) << ',' << format_double(e.onset_time)
         << ',' << format_double(e.completion_time) << '\n';
    }
  }
}

const char* to_string(Scheme s) {
  return s == Scheme::Milstein ? "Milstein" : "EulerMaruyama";
}

const char* to_string(Monitoring m) {
  return m == Monitoring::BrownianBridge ? "BrownianBridge" : "Discrete";
}

const char* to_string(ExitReason r) {
  switch (r) {
    case ExitReason::HorizonReached: return "HorizonReached";
    case ExitReason::AbsorbedAtStop: return "AbsorbedAtStop";
    case ExitReason::EventLimit: return "EventLimit";
  }
  return "HorizonReached";
}

}  // namespace downcross
