#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "downcross/model.hpp"
#include "downcross/stats.hpp"

namespace downcross {

enum class Scheme { EulerMaruyama, Milstein };
enum class BoundaryPolicy { Abort, Reflect };
enum class ExitReason { HorizonReached, AbsorbedAtStop, EventLimit };
/// Discrete: the detector sees only the sampled X_j. BrownianBridge: between
/// samples the path is a bridge with variance a(X_j) dt; the record is raised
/// to an exact draw of the bridge maximum and a down-crossing is declared
/// with the bridge's probability of touching the level, which removes the
/// O(sqrt(dt)) late-detection bias of discrete monitoring.
enum class Monitoring { Discrete, BrownianBridge };

struct PathConfig {
  double x0 = 0.0;
  double dt = 1e-3;
  double t_max = 100.0;
  /// Absorb once X >= x_stop.
  double x_stop = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::EulerMaruyama;
  Monitoring monitoring = Monitoring::Discrete;
  /// What to do when a step leaves the state space.
  BoundaryPolicy boundary = BoundaryPolicy::Abort;
  /// Stop after this many events; 0 means no limit.
  std::size_t max_events = 0;
  /// Keep every sampled X (x0 first).
  bool record_path = false;
  /// Run the literal onset tracker alongside the detector.
  bool track_literal = false;

  /// Throws std::invalid_argument unless 0 < dt < t_max.
  void validate() const;
};

/// One c-down-crossing: the record level l, the first time it was attained,
/// and the first sampled time with X <= l - c.
struct CrossingEvent {
  double onset_location = 0.0;
  double onset_time = 0.0;
  double completion_time = 0.0;
};

/// Onset of the down-crossed range under the literal definition on a sampled
/// path: the first index t such that X_s <= X_t - c for some later s.
struct LiteralOnset {
  std::size_t onset_index = 0;
  std::size_t witness_index = 0;  // first s that witnessed it
  double location = 0.0;
  double time = 0.0;
};

struct PathResult {
  std::vector<CrossingEvent> events;
  double final_x = 0.0;
  double final_t = 0.0;
  std::size_t steps = 0;
  ExitReason exit_reason = ExitReason::HorizonReached;
  /// Running maximum of the sampled path at exit.
  double running_max = 0.0;
  std::optional<double> first_onset;
  std::optional<LiteralOnset> literal_onset;
  std::vector<double> path;
};

/// Streaming c-down-crossing detector.
///
/// Tracks the running record M and emits an event at the first sample with
/// X <= M - c. It then waits until X exceeds the last onset level before
/// tracking a new record from there, so onset locations strictly increase
/// and each onset is the record at the first c-drawdown after the previous one.
class DrawdownDetector {
 public:
  explicit DrawdownDetector(double c);

  void start(double x, double t);
  std::optional<CrossingEvent> observe(double x, double t);
  /// Bridge-monitored step from x_prev to x ending at time t. u_cross and
  /// u_max are independent uniforms on [0, 1).
  std::optional<CrossingEvent> observe_bridge(double x_prev, double x, double t,
                                              double variance, double u_cross, double u_max);

  double record() const { return record_; }
  bool armed() const { return armed_; }
  double depth() const { return c_; }

 private:
  double c_;
  double record_ = 0.0;
  double record_time_ = 0.0;
  double last_onset_ = 0.0;
  bool armed_ = true;
};

/// Streaming form of the literal onset definition.
///
/// Keeps the strict prefix records of the path; the earliest index t with
/// X_s <= X_t - c for the incoming X_s is always a record and is found by
/// binary search. The smallest such t seen so far is kept. O(log n) per
/// sample, and equal to the O(n^2) scan on the same samples.
class LiteralOnsetTracker {
 public:
  explicit LiteralOnsetTracker(double c);

  void push(double x, double t);
  const std::optional<LiteralOnset>& onset() const { return best_; }
  std::size_t size() const { return count_; }

 private:
  struct Record {
    double value;
    std::size_t index;
    double time;
  };
  double c_;
  std::vector<Record> records_;
  std::optional<LiteralOnset> best_;
  std::size_t count_ = 0;
};

/// Simulates X_{j+1} = X_j + b dt + sqrt(a dt) Z_j (plus the Milstein term
/// (a'/4)(dW^2 - dt) when selected) with Z_j from NormalStream(cfg.seed).
/// Throws DomainError if the path leaves the state space under
/// BoundaryPolicy::Abort.
PathResult simulate_path(const DiffusionModel& model, const PathConfig& cfg, double c);

/// n independent paths; path i uses derive_seed(cfg.seed, i). Results are
/// ordered by index and do not depend on `workers` (0 = hardware threads).
std::vector<PathResult> simulate_paths(const DiffusionModel& model, const PathConfig& cfg,
                                       double c, std::size_t n_paths, unsigned workers = 0);

struct OnsetSample {
  std::vector<std::optional<double>> onsets;
  /// Per path: offset (record minus x0) below which a censored path is known
  /// to have had no onset; +inf for observed paths.
  std::vector<double> censor_levels;
  std::vector<ExitReason> exits;

  EmpiricalSurvival survival(double x0) const;
};

/// First onset location of each of n paths (stopping at the first event).
OnsetSample sample_onset_locations(const DiffusionModel& model, const PathConfig& cfg, double c,
                                   std::size_t n_paths, unsigned workers = 0);

struct ProportionEstimate {
  double fraction = 0.0;
  Interval wilson;
  std::size_t successes = 0;
  std::size_t trials = 0;
  /// Paths that ended at the horizon without resolving.
  std::size_t unresolved = 0;
};

/// Fraction of paths with at least one c-down-crossing before absorption at
/// x_stop or the horizon, with its 95% Wilson interval.
ProportionEstimate estimate_ever_downcross(const DiffusionModel& model, const PathConfig& cfg,
                                           double c, std::size_t n_paths, unsigned workers = 0);

struct HittingConfig {
  double dt = 1e-3;
  double t_max = 1e4;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::EulerMaruyama;
  /// Between samples, the path is treated as a Brownian bridge with the
  /// local variance a(X_j) dt, and each barrier is declared hit with the
  /// bridge crossing probability exp(-2 d_j d_{j+1} / (a dt)).
  bool bridge_correction = true;
};

/// Monte Carlo P_w(tau_z < tau_y). Paths unresolved at the horizon count as
/// misses and are reported.
ProportionEstimate estimate_hitting_probability(const DiffusionModel& model, double w, double y,
                                                double z, std::size_t n_paths,
                                                const HittingConfig& cfg, unsigned workers = 0);

/// Shortest round-trip decimal form.
std::string format_double(double v);

/// CSV with header path_id,onset_location,onset_time,completion_time; one row
/// per event, paths in index order.
void write_events_csv(std::ostream& os, std::span<const PathResult> results);

const char* to_string(Scheme s);
const char* to_string(Monitoring m);
const char* to_string(ExitReason r);

}  // namespace downcross
