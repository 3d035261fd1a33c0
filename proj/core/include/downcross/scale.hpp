#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "downcross/model.hpp"
#include "downcross/quadrature.hpp"

namespace downcross {

struct ScaleOptions {
  /// Lower limit of both integrals defining u. Defaults to 0 on the real
  /// line and to domain_lower + 1 on half-lines (1 for Bessel).
  std::optional<double> base_point;
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
  std::size_t cache_capacity = 1u << 14;
};

/// The scale function u(x) = int_base^x exp(-B(y)) dy of a diffusion, with
/// B(x) = int_base^x (2b/a)(z) dz.
///
/// Tail-sensitive quantities are computed in log space relative to a
/// reference point: integrals of exp(-(B(x_ref + s) - B(x_ref))) over offsets s
/// never form B(x_ref) itself, so they stay accurate when exp(-B) is far
/// outside double range and when x_ref is so large that x_ref - c rounds to
/// x_ref.
///
/// Copies share the checkpoint cache of B, which is safe for concurrent use.
class ScaleFunction {
 public:
  explicit ScaleFunction(DiffusionModel model, ScaleOptions opts = {});

  const DiffusionModel& model() const { return model_; }
  double base_point() const { return base_; }
  const QuadratureOptions& quadrature() const { return quad_; }

  /// B(x) = int_base^x (2b/a). Uses the nearest cached checkpoint as the
  /// starting point, so nearby queries only integrate locally.
  double exponent(double x) const;
  /// int_{x1}^{x2} (2b/a), computed directly (no cache).
  double exponent_between(double x1, double x2) const;
  /// int_{s1}^{s2} (2b/a)(x_ref + s) ds.
  double local_exponent(double x_ref, double s1, double s2) const;

  /// u(x). Throws OverflowPolicyError when |u(x)| is not representable.
  double scale_value(double x) const;
  /// u'(x) = exp(-B(x)).
  double scale_derivative(double x) const;

  /// log(u(x) - u(x - c)), without forming u.
  double scale_increment_log(double x, double c) const;
  /// log(u(hi) - u(lo)) for lo < hi.
  double log_increment(double lo, double hi) const;

  /// log int_{s_lo}^{s_hi} exp(-(B(x_ref + s) - B(x_ref))) ds.
  double log_integral_rel(double x_ref, double s_lo, double s_hi) const;
  /// Same with s_hi = +inf. Throws QuadratureError if the tail does not
  /// decay (non-positive drift far out).
  double log_tail_integral_rel(double x_ref, double s_lo) const;

  std::size_t cache_size() const;

 private:
  struct Cache;

  double panel_log_integral(double x_ref, double t0, double t1, double e0,
                            double e1, int depth = 0) const;

  DiffusionModel model_;
  double base_;
  QuadratureOptions quad_;
  std::size_t cache_capacity_ = 0;
  std::shared_ptr<Cache> cache_;
};

double exponent(const ScaleFunction& sf, double x);
double scale_value(const ScaleFunction& sf, double x);
double scale_increment_log(const ScaleFunction& sf, double x, double c);

// ---------------------------------------------------------------------------
// Transience

enum class TailBehavior { Converges, Diverges, Undecided };

/// Probe of one improper end of int exp(-B): log exp(-B) sampled at
/// geometrically spaced distances d from the anchor, with the fitted local
/// decay exponent alpha in exp(-B) ~ d^(-alpha).
struct TailProbe {
  TailBehavior behavior = TailBehavior::Undecided;
  double fitted_exponent = 0.0;
  std::vector<std::pair<double, double>> samples;  // (distance, -B)
};

enum class Transience {
  TransientToPlusInfinity,
  TransientToMinusInfinity,
  Recurrent,
  Indeterminate
};

struct TransienceOptions {
  double first_distance = 10.0;
  double ratio = 2.0;
  int probes = 40;
  int fit_points = 8;
  /// Undecided when |alpha - 1| < margin.
  double margin = 0.1;
};

struct TransienceVerdict {
  TailProbe left;   // int_{-inf} exp(-B), or towards a finite lower end
  TailProbe right;  // int^{+inf} exp(-B)
  Transience classification = Transience::Indeterminate;

  bool left_diverges() const { return left.behavior == TailBehavior::Diverges; }
  bool right_converges() const { return right.behavior == TailBehavior::Converges; }
};

TransienceVerdict classify_transience(const ScaleFunction& sf,
                                      const TransienceOptions& opts = {});

const char* to_string(Transience t);
const char* to_string(TailBehavior b);

}  // namespace downcross
