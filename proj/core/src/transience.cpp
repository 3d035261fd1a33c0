#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "downcross/errors.hpp"
#include "downcross/scale.hpp"

namespace downcross {

namespace {

// Least-squares slope of ys against xs over the last `tail` samples.
double tail_slope(const std::vector<std::pair<double, double>>& pts, std::size_t tail) {
  const std::size_t n = pts.size();
  const std::size_t k = std::min(n, tail);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = n - k; i < n; ++i) {
    const double x = std::log(pts[i].first);
    const double y = pts[i].second;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double kk = static_cast<double>(k);
  return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

// Samples -B at distances d_j = first * ratio^j beyond the base in direction
// `dir` (+1 or -1). B accumulates panel by panel so it is exactly additive.
// Stops early at the first non-finite value or quadrature failure.
std::vector<std::pair<double, double>> probe_unbounded(const ScaleFunction& sf, double dir,
                                                       const TransienceOptions& o) {
  std::vector<std::pair<double, double>> out;
  const double base = sf.base_point();
  double prev_x = base;
  double b = 0.0;
  double d = o.first_distance;
  for (int j = 0; j < o.probes; ++j, d *= o.ratio) {
    const double x = base + dir * d;
    try {
      b += sf.exponent_between(prev_x, x);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(b)) break;
    out.emplace_back(d, -b);
    prev_x = x;
  }
  return out;
}

// Samples -B at distances d_j = (base - lower) / ratio^j above a finite lower
// end of the state space.
std::vector<std::pair<double, double>> probe_towards_boundary(const ScaleFunction& sf,
                                                              double lower,
                                                              const TransienceOptions& o) {
  std::vector<std::pair<double, double>> out;
  const double base = sf.base_point();
  double prev_x = base;
  double b = 0.0;
  double d = (base - lower) / o.ratio;
  for (int j = 0; j < o.probes; ++j, d /= o.ratio) {
    const double x = lower + d;
    if (!(x > lower)) break;
    try {
      b += sf.exponent_between(prev_x, x);
    } catch (const Error&) {
      break;
    }
    if (!std::isfinite(b)) break;
    out.emplace_back(d, -b);
    prev_x = x;
  }
  return out;
}

}  // namespace

TransienceVerdict classify_transience(const ScaleFunction& sf, const TransienceOptions& o) {
  TransienceVerdict v;
  const auto min_points = static_cast<std::size_t>(std::max(3, o.fit_points / 2));

  // Right end: int^inf d^(-alpha) converges iff alpha > 1.
  v.right.samples = probe_unbounded(sf, +1.0, o);
  if (v.right.samples.size() >= min_points) {
    const double alpha = -tail_slope(v.right.samples, o.fit_points);
    v.right.fitted_exponent = alpha;
    if (alpha > 1.0 + o.margin) {
      v.right.behavior = TailBehavior::Converges;
    } else if (alpha < 1.0 - o.margin) {
      v.right.behavior = TailBehavior::Diverges;
    }
  }

  const double lower = sf.model().domain_lower();
  if (std::isinf(lower)) {
    // int_{-inf} d^(-alpha): same rule as the right end.
    v.left.samples = probe_unbounded(sf, -1.0, o);
    if (v.left.samples.size() >= min_points) {
      const double alpha = -tail_slope(v.left.samples, o.fit_points);
      v.left.fitted_exponent = alpha;
      if (alpha > 1.0 + o.margin) {
        v.left.behavior = TailBehavior::Converges;
      } else if (alpha < 1.0 - o.margin) {
        v.left.behavior = TailBehavior::Diverges;
      }
    }
  } else {
    // int_0 d^(-alpha) near a finite end diverges iff alpha >= 1.
    v.left.samples = probe_towards_boundary(sf, lower, o);
    if (v.left.samples.size() >= min_points) {
      const double alpha = -tail_slope(v.left.samples, o.fit_points);
      v.left.fitted_exponent = alpha;
      if (alpha > 1.0 + o.margin) {
        v.left.behavior = TailBehavior::Diverges;
      } else if (alpha < 1.0 - o.margin) {
        v.left.behavior = TailBehavior::Converges;
      }
    }
  }

  using TB = TailBehavior;
  if (v.left.behavior == TB::Diverges && v.right.behavior == TB::Converges) {
    v.classification = Transience::TransientToPlusInfinity;
  } else if (v.left.behavior == TB::Converges && v.right.behavior == TB::Diverges) {
    v.classification = Transience::TransientToMinusInfinity;
  } else if (v.left.behavior == TB::Diverges && v.right.behavior == TB::Diverges) {
    v.classification = Transience::Recurrent;
  } else {
    v.classification = Transience::Indeterminate;
  }
  return v;
}

const char* to_string(Transience t) {
  switch (t) {
    case Transience::TransientToPlusInfinity: return "TransientToPlusInfinity";
    case Transience::TransientToMinusInfinity: return "TransientToMinusInfinity";
    case Transience::Recurrent: return "Recurrent";
    case Transience::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

const char* to_string(TailBehavior b) {
  switch (b) {
    case TailBehavior::Converges: return "Converges";
    case TailBehavior::Diverges: return "Diverges";
    case TailBehavior::Undecided: return "Undecided";
  }
  return "Undecided";
}

}  // namespace downcross
