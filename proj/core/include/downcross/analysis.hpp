#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "downcross/scale.hpp"

namespace downcross {

// ---------------------------------------------------------------------------
// Hazard and onset law

/// log h_c(x), where h_c(x) = u'(x) / (u(x) - u(x - c)).
///
/// Equals -log int_{-c}^{0} exp(-(B(x+s) - B(x))) ds; B(x) cancels exactly, so
/// this is finite wherever the local integral is, however large x is.
double log_hazard(const ScaleFunction& sf, double c, double x);
double hazard(const ScaleFunction& sf, double c, double x);

/// The down-crossing hazard of depth c as a curve in x.
class HazardCurve {
 public:
  HazardCurve(ScaleFunction sf, double depth);

  double operator()(double x) const { return hazard(sf_, depth_, x); }
  double log_value(double x) const { return log_hazard(sf_, depth_, x); }
  /// int_{x1}^{x2} h.
  double integral(double x1, double x2) const;

  /// Evaluates h on a strictly increasing grid and keeps the samples.
  const std::vector<std::pair<double, double>>& sample(std::span<const double> xs);
  const std::vector<std::pair<double, double>>& samples() const { return samples_; }

  double depth() const { return depth_; }
  const ScaleFunction& scale() const { return sf_; }

 private:
  ScaleFunction sf_;
  double depth_;
  std::vector<std::pair<double, double>> samples_;
};

/// Law of the onset location l_c for the diffusion started at start_x:
/// P(l_c > start_x + gamma) = exp(-int_{start_x}^{start_x+gamma} h_c).
///
/// l_c here is the running maximum at the first time the path has fallen c
/// below it.
class OnsetLaw {
 public:
  OnsetLaw(HazardCurve hazard, double start_x);

  double survival(double gamma) const;
  double cumulative_hazard(double gamma) const;
  /// Survival on a non-decreasing grid of offsets; integrates incrementally.
  std::vector<double> survival_curve(std::span<const double> gammas) const;

  const HazardCurve& hazard() const { return hazard_; }
  double start() const { return start_; }
  double depth() const { return hazard_.depth(); }

 private:
  HazardCurve hazard_;
  double start_;
};

double onset_survival(const OnsetLaw& law, double gamma);

struct SurvivalBracket {
  double lower = 1.0;
  double upper = 1.0;
};

/// Two-sided bound on the onset survival from n steps of the strong Markov
/// property on x_k = x + k gamma / n:
///   lower = prod_k P_{x_k}(tau_{x_{k+1}} < tau_{x_{k+1} - c}),
///   upper = prod_k P_{x_k}(tau_{x_{k+1}} < tau_{x_k - c}).
/// Each factor is evaluated as 1 - (u-increment over the step) / (u-increment
/// down to the lower level), in log space.
SurvivalBracket onset_survival_product_oracle(const OnsetLaw& law, double gamma, int n);

/// P_w(tau_z < tau_y) = (u(w) - u(y)) / (u(z) - u(y)) for y <= w <= z, y < z.
double hitting_probability(const ScaleFunction& sf, double w, double y, double z);

/// P_from(ever reach `to`), to < from, for a diffusion transient to +inf:
/// (u(inf) - u(from)) / (u(inf) - u(to)).
double return_probability(const ScaleFunction& sf, double from, double to);

// ---------------------------------------------------------------------------
// Stop / cross-forever criterion

enum class DowncrossClass { StopsDownCrossing, DownCrossesForever, Indeterminate };

/// Fitted tail model of the hazard,
///   log h = log K - p log x - s log log x + k1 / log x + k2 log log x / log x.
/// (K, p, s) is the leading behaviour K x^-p (log x)^-s; k1 and k2 absorb the
/// slowly vanishing corrections that log-type drifts produce.
struct TailFit {
  double K = 0.0;
  double log_K = 0.0;
  double p = 0.0;
  double s = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;

  /// log of the fitted model at x.
  double log_model(double x) const;
};

struct ClassifierOptions {
  /// First probe; default max(10, asymptotic start of the drift + c).
  std::optional<double> first_probe;
  /// Last probe. Probes are spaced geometrically in log x, so the grid can
  /// reach far beyond where the leading power law dominates the corrections.
  double probe_limit = 1e300;
  int probes = 48;
  /// Fraction of probes (from the top) used in the fit.
  double fit_fraction = 0.5;
  /// |p - 1| beyond this decides on p alone.
  double p_margin = 0.05;
  /// |p - 1| within this counts as p = 1 and defers to s.
  double p_resolution = 0.005;
  /// With p = 1: s <= 1 + s_resolution is divergent (the boundary s = 1
  /// included), s > 1 + s_margin convergent, anything between indeterminate.
  double s_resolution = 0.02;
  double s_margin = 0.1;
  bool compute_partial_integral = true;
  TransienceOptions transience;
};

struct Verdict {
  DowncrossClass classification = DowncrossClass::Indeterminate;
  /// int_{probe_start}^{probe_limit} h.
  double tail_integral_partial = 0.0;
  double probe_start = 0.0;
  double probe_limit = 0.0;
  TailFit fit;
  std::vector<std::pair<double, double>> probes;      // (x, h)
  std::vector<std::pair<double, double>> log_probes;  // (log x, log h)
  std::vector<std::string> notes;
};

/// Decides whether int^inf h_c converges, i.e. whether the diffusion almost
/// surely stops making c-down-crossings. Throws NotTransientError unless the
/// diffusion is classified as transient to +inf.
Verdict classify_downcrossing(const ScaleFunction& sf, double c,
                              const ClassifierOptions& opts = {});

struct DowncrossProbability {
  /// q_x = 1 - exp(-int_x^inf h).
  double probability = 1.0;
  bool divergent = false;
  double partial_integral = 0.0;
  double extrapolated_integral = 0.0;
  double extrapolated_fraction = 0.0;
  Verdict verdict;
};

/// Probability of ever making a c-down-crossing from the law's start point.
/// Returns 1 when the criterion integral diverges; throws IndeterminateTail
/// when the classifier cannot decide.
DowncrossProbability ever_downcross_probability(const OnsetLaw& law,
                                                const ClassifierOptions& opts = {});

// ---------------------------------------------------------------------------
// Monotonicity in the drift

/// The displayed first variation of the hazard in the drift direction q >= 0:
///
///   e^{-B(x)} int_{x-c}^{x} e^{-B(y)} (int_y^x 2q/a) dy / (int_{x-c}^{x} e^{-B})^2
///
/// It is the rate at which h_c(x) decreases, i.e.
/// h(b + eps q, x) = h(b, x) - eps * value + O(eps^2), and it is >= 0.
/// Throws DomainError if q is negative at a sampled point.
double hazard_gateaux_derivative(const ScaleFunction& sf, double c, double x,
                                 const std::function<double(double)>& q);

// ---------------------------------------------------------------------------
// Down-crossings along sequences of levels

enum class SeriesVerdict { SummableIO_zero, Divergent_IO_one, Indeterminate };

struct SequenceSeries {
  std::vector<double> terms;         // p_n, n = 2..n_max
  std::vector<double> partial_sums;  // sum_{m=2}^{n} p_m
  /// alpha in p_n ~ n^-alpha (exact for the Bessel case, fitted otherwise).
  double decay_exponent = 0.0;
  SeriesVerdict verdict = SeriesVerdict::Indeterminate;
  std::vector<std::string> notes;
};

/// Bessel process of dimension k > 2 and levels d_m = (m!)^rho: p_n is the
/// probability of returning from d_n to d_{n-1}, i.e. (d_{n-1}/d_n)^(k-2) =
/// n^(-rho (k-2)). Infinitely-often with probability one iff rho (k-2) <= 1.
SequenceSeries bessel_sequence_series(double k, double rho, int n_max);

struct SequenceCheckOptions {
  double x_cut = DriftFamily::kDefaultCut;
  double fit_n_min = 10.0;
  double fit_n_max = 1e9;
  int fit_samples = 24;
  double resolution = 0.02;
  double margin = 0.1;
  ScaleOptions scale;
};

/// Drift b(x) = log(x)/(2c) and levels d_m = spacing * m: p_n is the
/// probability that the path, having reached d_n, later returns to d_{n-1}.
/// The verdict comes from the fitted decay exponent of p_n.
SequenceSeries logdrift_downcross_sequence_check(double c, double spacing, int n_max,
                                                 const SequenceCheckOptions& opts = {});

// ---------------------------------------------------------------------------
// Asymptotics of the hazard for b(x) = log(x)/(2c) + (gamma/c) log log x

/// h_c(x) * c * x * (log x)^(2 gamma - 1) for the unit-diffusion model with
/// that drift (cut at e^2).
double asymptotic_hazard_ratio(double c, double gamma, double x);
double asymptotic_hazard_ratio(const ScaleFunction& sf, double c, double gamma, double x);

struct AsymptoticSweep {
  std::vector<std::pair<double, double>> ratios;  // (x, ratio)
  /// |r_last / r_prev - 1|.
  double last_relative_change = 0.0;
  bool converged = false;
  double limit = 0.0;  // ratio at the last probe
  /// |log(limit * c)| and |log(limit * c e^2)|: distance to 1/c and 1/(c e^2).
  double log_distance_inverse_c = 0.0;
  double log_distance_inverse_c_e2 = 0.0;
  std::string nearest;  // "1/c" or "1/(c e^2)"
};

AsymptoticSweep asymptotic_hazard_sweep(double c, double gamma, std::span<const double> xs,
                                        double tolerance = 0.05);

const char* to_string(DowncrossClass c);
const char* to_string(SeriesVerdict v);

}  // namespace downcross
