#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

namespace downcross {

// With w(s) = exp(-(B(x+s) - B(x))) and Q(s) = int_{x+s}^{x} 2q/a on [-c, 0],
// the value is int w Q / (int w)^2 times exp(-2 B(x)) / exp(-2 B(x)) = 1.
// w is scaled by exp(-m), m = max log w, to stay in range.
double hazard_gateaux_derivative(const ScaleFunction& sf, double c, double x,
                                 const std::function<double(double)>& q) {
  if (!(c > 0.0)) throw std::invalid_argument("crossing depth c must be positive");
  const DiffusionModel& model = sf.model();
  if (!model.in_domain(x - c)) throw DomainError("[x - c, x] leaves the state space");

  auto q_density = [&](double y) {
    const double v = q(y);
    if (!(v >= 0.0)) throw DomainError("drift perturbation q must be nonnegative");
    return 2.0 * v / model.diffusion(y);
  };
  const QuadratureOptions& opt = sf.quadrature();

  const double m = std::max(0.0, sf.local_exponent(x, -c, 0.0));
  constexpr int kPanels = 8;
  double num = 0.0;
  double den = 0.0;
  for (int i = 0; i < kPanels; ++i) {
    const double s0 = -c + c * i / kPanels;
    const double s1 = i + 1 == kPanels ? 0.0 : -c + c * (i + 1) / kPanels;
    auto w = [&](double s) { return std::exp(sf.local_exponent(x, s, 0.0) - m); };
    den += integrate(w, s0, s1, opt);
    num += integrate(
        [&](double s) {
          const double big_q =
              integrate([&](double t) { return q_density(x + t); }, s, 0.0, opt);
          return w(s) * big_q;
        },
        s0, s1, opt);
  }
  if (!(den > 0.0)) throw QuadratureError("hazard denominator vanished");
  return std::max(0.0, num) / den / den * std::exp(-m);
}

}  // namespace downcross
