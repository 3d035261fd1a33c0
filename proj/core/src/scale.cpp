#include "downcross/scale.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>
#include <string>

#include "downcross/errors.hpp"

namespace downcross {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// log(DBL_MAX)
const double kLogMax = std::log(std::numeric_limits<double>::max());

double default_base(const DiffusionModel& model) {
  const double lo = model.domain_lower();
  return std::isinf(lo) ? 0.0 : lo + 1.0;
}

}  // namespace

struct ScaleFunction::Cache {
  mutable std::shared_mutex mutex;
  std::map<double, double> checkpoints;  // x -> B(x), strictly ordered by x
};

ScaleFunction::ScaleFunction(DiffusionModel model, ScaleOptions opts)
    : model_(std::move(model)),
      base_(opts.base_point.value_or(default_base(model_))),
      quad_{opts.abs_tol, opts.rel_tol, opts.max_intervals},
      cache_(std::make_shared<Cache>()) {
  if (!(opts.abs_tol > 0.0) || !(opts.rel_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (!model_.in_domain(base_)) {
    throw DomainError("scale base point lies outside the state space");
  }
  cache_->checkpoints.emplace(base_, 0.0);
  cache_capacity_ = opts.cache_capacity;
}

std::size_t ScaleFunction::cache_size() const {
  std::shared_lock lock(cache_->mutex);
  return cache_->checkpoints.size();
}

double ScaleFunction::local_exponent(double x_ref, double s1, double s2) const {
  if (s1 == s2) return 0.0;
  const double lo = std::min(s1, s2), hi = std::max(s1, s2);
  // Split at kinks of the drift; the error estimate is unreliable across them.
  double acc = 0.0;
  double t0 = lo;
  for (double k : model_.kinks()) {
    const double t = k - x_ref;
    if (t > t0 && t < hi) {
      acc += integrate([&](double s) { return model_.exponent_density(x_ref + s); }, t0, t,
                       quad_);
      t0 = t;
    }
  }
  acc += integrate([&](double s) { return model_.exponent_density(x_ref + s); }, t0, hi, quad_);
  return s1 < s2 ? acc : -acc;
}

double ScaleFunction::exponent_between(double x1, double x2) const {
  return local_exponent(0.0, x1, x2);
}

double ScaleFunction::exponent(double x) const {
  if (!model_.in_domain(x)) {
    throw DomainError("exponent requested outside the state space");
  }
  double from = base_;
  double b_from = 0.0;
  {
    std::shared_lock lock(cache_->mutex);
    const auto& cp = cache_->checkpoints;
    auto hi = cp.lower_bound(x);
    if (hi != cp.end() && hi->first == x) return hi->second;
    auto best = cp.end();
    if (hi != cp.end()) best = hi;
    if (hi != cp.begin()) {
      auto lo = std::prev(hi);
      if (best == cp.end() || x - lo->first <= best->first - x) best = lo;
    }
    from = best->first;
    b_from = best->second;
  }
  const double value = b_from + exponent_between(from, x);
  {
    std::unique_lock lock(cache_->mutex);
    if (cache_->checkpoints.size() < cache_capacity_) {
      cache_->checkpoints.emplace(x, value);
    }
  }
  return value;
}

double ScaleFunction::panel_log_integral(double x_ref, double t0, double t1, double e0,
                                         double e1, int depth) const {
  // A steep panel concentrates exp(-E) in a spike narrower than the outer
  // Kronrod node; bisect until the exponent changes by a moderate amount,
  // dropping halves that sit far above the panel's low end.
  constexpr double kMaxDrop = 30.0;
  constexpr double kNegligible = 800.0;
  if (std::abs(e1 - e0) > kMaxDrop && depth < 200) {
    const double tm = 0.5 * (t0 + t1);
    if (tm > t0 && tm < t1) {
      const double em = e0 + local_exponent(x_ref, t0, tm);
      const double low = std::min({e0, em, e1});
      double acc = kNegInf;
      if (std::min(e0, em) - low < kNegligible) {
        acc = log_add_exp(acc, panel_log_integral(x_ref, t0, tm, e0, em, depth + 1));
      }
      if (std::min(em, e1) - low < kNegligible) {
        acc = log_add_exp(acc, panel_log_integral(x_ref, tm, t1, em, e1, depth + 1));
      }
      return acc;
    }
    // Out of resolution: treat E as linear on the panel.
    const double drop = std::abs(e1 - e0);
    return -std::min(e0, e1) + std::log(t1 - t0) + std::log(-std::expm1(-drop)) - std::log(drop);
  }
  const double shift = std::min(0.0, e1 - e0);
  const double integral = integrate(
      [&](double s) { return std::exp(-(local_exponent(x_ref, t0, s) - shift)); }, t0, t1,
      quad_);
  if (!(integral > 0.0)) return kNegInf;
  return -(e0 + shift) + std::log(integral);
}

double ScaleFunction::log_integral_rel(double x_ref, double s_lo, double s_hi) const {
  if (s_lo > s_hi) throw std::invalid_argument("log_integral_rel requires s_lo <= s_hi");
  if (s_lo == s_hi) return kNegInf;
  if (!model_.in_domain(x_ref + s_lo) || !model_.in_domain(x_ref)) {
    throw DomainError("integration range leaves the state space");
  }
  const double width = s_hi - s_lo;
  const auto panels =
      static_cast<std::size_t>(std::clamp(std::ceil(width), 8.0, 4096.0));
  double e = local_exponent(x_ref, 0.0, s_lo);
  double acc = kNegInf;
  double t0 = s_lo;
  for (std::size_t i = 1; i <= panels; ++i) {
    const double t1 = i == panels ? s_hi : s_lo + width * static_cast<double>(i) /
                                                     static_cast<double>(panels);
    const double e1 = e + local_exponent(x_ref, t0, t1);
    acc = log_add_exp(acc, panel_log_integral(x_ref, t0, t1, e, e1));
    t0 = t1;
    e = e1;
  }
  return acc;
}

double ScaleFunction::log_tail_integral_rel(double x_ref, double s_lo) const {
  if (!model_.in_domain(x_ref + s_lo) || !model_.in_domain(x_ref)) {
    throw DomainError("integration range leaves the state space");
  }
  constexpr int kMaxPanels = 400;
  constexpr double kNegligible = 40.0;  // e^-40 relative to the running sum
  double e = local_exponent(x_ref, 0.0, s_lo);
  double acc = kNegInf;
  double t0 = s_lo;
  double width = 1.0;
  int quiet = 0;
  for (int i = 0; i < kMaxPanels; ++i) {
    const double t1 = t0 + width;
    if (!std::isfinite(x_ref + t1)) break;
    const double e1 = e + local_exponent(x_ref, t0, t1);
    const double piece = panel_log_integral(x_ref, t0, t1, e, e1);
    acc = log_add_exp(acc, piece);
    if (e1 > e && piece < acc - kNegligible) {
      if (++quiet >= 3) return acc;
    } else {
      quiet = 0;
    }
    t0 = t1;
    e = e1;
    width *= 2.0;
  }
  throw QuadratureError("tail integral of exp(-B) does not converge: drift is not "
                        "eventually positive enough");
}

double ScaleFunction::scale_value(double x) const {
  if (!model_.in_domain(x)) throw DomainError("scale_value requested outside the state space");
  if (x == base_) return 0.0;
  const bool above = x > base_;
  const double log_mag =
      above ? log_integral_rel(base_, 0.0, x - base_) : log_integral_rel(base_, x - base_, 0.0);
  if (log_mag > kLogMax) {
    throw OverflowPolicyError("|u(x)| overflows double precision; use log-space increments");
  }
  const double mag = std::exp(log_mag);
  return above ? mag : -mag;
}

double ScaleFunction::scale_derivative(double x) const {
  const double b = exponent(x);
  if (-b > kLogMax) throw OverflowPolicyError("u'(x) = exp(-B(x)) overflows");
  return std::exp(-b);
}

double ScaleFunction::scale_increment_log(double x, double c) const {
  if (!(c > 0.0)) throw std::invalid_argument("crossing depth c must be positive");
  return -exponent(x) + log_integral_rel(x, -c, 0.0);
}

double ScaleFunction::log_increment(double lo, double hi) const {
  if (!(lo < hi)) throw std::invalid_argument("log_increment requires lo < hi");
  return -exponent(lo) + log_integral_rel(lo, 0.0, hi - lo);
}

double exponent(const ScaleFunction& sf, double x) { return sf.exponent(x); }
double scale_value(const ScaleFunction& sf, double x) { return sf.scale_value(x); }
double scale_increment_log(const ScaleFunction& sf, double x, double c) {
  return sf.scale_increment_log(x, c);
}

}  // namespace downcross
