#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

namespace downcross {

namespace {

void check_depth(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("crossing depth c must be positive and finite");
  }
}

// log(1 - exp(v)) for v <= 0.
double log1m_exp(double v) {
  if (v > -0.6931471805599453) return std::log(-std::expm1(v));
  return std::log1p(-std::exp(v));
}

}  // namespace

double log_hazard(const ScaleFunction& sf, double c, double x) {
  check_depth(c);
  return -sf.log_integral_rel(x, -c, 0.0);
}

double hazard(const ScaleFunction& sf, double c, double x) {
  return std::exp(log_hazard(sf, c, x));
}

HazardCurve::HazardCurve(ScaleFunction sf, double depth) : sf_(std::move(sf)), depth_(depth) {
  check_depth(depth);
}

double HazardCurve::integral(double x1, double x2) const {
  if (x1 == x2) return 0.0;
  if (x1 > x2) return -integral(x2, x1);
  QuadratureOptions q = sf_.quadrature();
  q.abs_tol = 1e-14;
  q.rel_tol = std::max(q.rel_tol, 1e-10);

  double total = 0.0;
  if (x1 > 0.0 && x2 > 4.0 * x1) {
    // Wide range: integrate h(e^L) e^L over L so the decay is resolved evenly.
    const double l1 = std::log(x1);
    const double l2 = std::log(x2);
    const int panels = static_cast<int>(std::clamp(std::ceil(l2 - l1), 1.0, 256.0));
    auto f = [&](double l) {
      const double x = std::clamp(std::exp(l), x1, x2);
      return std::exp(log_value(x) + l);
    };
    for (int i = 0; i < panels; ++i) {
      const double a = l1 + (l2 - l1) * i / panels;
      const double b = i + 1 == panels ? l2 : l1 + (l2 - l1) * (i + 1) / panels;
      total += integrate(f, a, b, q);
    }
    return total;
  }
  const int panels =
      static_cast<int>(std::clamp(std::ceil((x2 - x1) / depth_), 1.0, 256.0));
  auto f = [&](double x) { return (*this)(x); };
  for (int i = 0; i < panels; ++i) {
    const double a = x1 + (x2 - x1) * i / panels;
    const double b = i + 1 == panels ? x2 : x1 + (x2 - x1) * (i + 1) / panels;
    total += integrate(f, a, b, q);
  }
  return total;
}

const std::vector<std::pair<double, double>>& HazardCurve::sample(std::span<const double> xs) {
  samples_.clear();
  samples_.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0 && !(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("hazard sample grid must be strictly increasing");
    }
    samples_.emplace_back(xs[i], (*this)(xs[i]));
  }
  return samples_;
}

OnsetLaw::OnsetLaw(HazardCurve hazard, double start_x)
    : hazard_(std::move(hazard)), start_(start_x) {
  if (!hazard_.scale().model().in_domain(start_x - hazard_.depth())) {
    throw DomainError("onset law start minus c lies outside the state space");
  }
}

double OnsetLaw::cumulative_hazard(double gamma) const {
  if (!(gamma >= 0.0)) throw std::invalid_argument("onset offset gamma must be >= 0");
  return hazard_.integral(start_, start_ + gamma);
}

double OnsetLaw::survival(double gamma) const { return std::exp(-cumulative_hazard(gamma)); }

std::vector<double> OnsetLaw::survival_curve(std::span<const double> gammas) const {
  std::vector<double> out;
  out.reserve(gammas.size());
  double prev = 0.0;
  double acc = 0.0;
  for (double g : gammas) {
    if (!(g >= prev)) {
      throw std::invalid_argument("survival grid must be non-negative and non-decreasing");
    }
    acc += hazard_.integral(start_ + prev, start_ + g);
    out.push_back(std::exp(-acc));
    prev = g;
  }
  return out;
}

double onset_survival(const OnsetLaw& law, double gamma) { return law.survival(gamma); }

SurvivalBracket onset_survival_product_oracle(const OnsetLaw& law, double gamma, int n) {
  if (n < 1) throw std::invalid_argument("product oracle needs n >= 1");
  if (!(gamma >= 0.0)) throw std::invalid_argument("onset offset gamma must be >= 0");
  if (gamma == 0.0) return {1.0, 1.0};
  const ScaleFunction& sf = law.hazard().scale();
  const double c = law.depth();
  const double step = gamma / n;
  double log_lower = 0.0;
  double log_upper = 0.0;
  bool lower_zero = step >= c;
  for (int k = 0; k < n; ++k) {
    const double xk = law.start() + step * k;
    const double log_j = sf.log_integral_rel(xk, 0.0, step);
    log_upper += log1m_exp(log_j - sf.log_integral_rel(xk, -c, step));
    if (!lower_zero) {
      log_lower += log1m_exp(log_j - sf.log_integral_rel(xk, step - c, step));
    }
  }
  return {lower_zero ? 0.0 : std::exp(log_lower), std::exp(log_upper)};
}

double hitting_probability(const ScaleFunction& sf, double w, double y, double z) {
  if (!(y < z) || !(y <= w && w <= z)) {
    throw DomainError("hitting probability needs y <= w <= z with y < z");
  }
  if (!sf.model().in_domain(y)) throw DomainError("lower level lies outside the state space");
  if (w == y) return 0.0;
  if (w == z) return 1.0;
  const double r = sf.log_integral_rel(y, 0.0, w - y) - sf.log_integral_rel(y, 0.0, z - y);
  return std::clamp(std::exp(r), 0.0, 1.0);
}

double return_probability(const ScaleFunction& sf, double from, double to) {
  if (!(to < from)) throw DomainError("return probability needs to < from");
  const double r = sf.log_tail_integral_rel(to, from - to) - sf.log_tail_integral_rel(to, 0.0);
  return std::clamp(std::exp(r), 0.0, 1.0);
}

}  // namespace downcross
