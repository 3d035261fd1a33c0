#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "downcross/errors.hpp"

namespace downcross {

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

namespace detail {

// 15-point Kronrod abscissae (positive half, descending) with the embedded
// 7-point Gauss rule on the odd-indexed nodes.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a;
  double b;
  double value;
  double error;
  double resabs;
  bool frozen;
};

inline void check_finite(double v) {
  if (!std::isfinite(v)) {
    throw QuadratureError("integrand returned a non-finite value");
  }
}

// One Gauss-Kronrod 7/15 panel with the QUADPACK error heuristic.
template <class F>
Segment gk15(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);
  const double dhlgth = std::abs(hlgth);

  double fv1[7];
  double fv2[7];
  const double fc = f(centr);
  check_finite(fc);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    check_finite(f1);
    check_finite(f2);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = f(centr - absc);
    const double f2 = f(centr + absc);
    check_finite(f1);
    check_finite(f2);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  Segment s{a, b, resk * hlgth, std::abs((resk - resg) * hlgth),
            resabs * dhlgth, false};
  resasc *= dhlgth;
  if (resasc != 0.0 && s.error != 0.0) {
    s.error = resasc * std::min(1.0, std::pow(200.0 * s.error / resasc, 1.5));
  }
  if (s.resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    s.error = std::max(50.0 * eps * s.resabs, s.error);
  }
  return s;
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature on a finite interval.
///
/// The interval with the largest error estimate is bisected until the summed
/// estimate drops below max(abs_tol, rel_tol * |I|), or below the roundoff
/// floor of the panels. Never throws for lack of convergence; see integrate().
template <class F>
QuadratureResult gauss_kronrod(F&& f, double a, double b,
                               const QuadratureOptions& opt = {}) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  QuadratureResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  if (a > b) {
    out = gauss_kronrod(f, b, a, opt);
    out.value = -out.value;
    return out;
  }
  const auto first = detail::gk15(f, a, b);
  out.evaluations = 15;
  out.intervals = 1;
  if (first.error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(first.value)) ||
      first.error <= 100.0 * eps * first.resabs) {
    out.value = first.value;
    out.abs_error = first.error;
    out.converged = true;
    return out;
  }
  std::vector<detail::Segment> segs;
  segs.reserve(64);
  segs.push_back(first);

  auto totals = [&](double& value, double& err, double& resabs,
                    double& frozen_err) {
    value = err = resabs = frozen_err = 0.0;
    for (const auto& s : segs) {
      value += s.value;
      err += s.error;
      resabs += s.resabs;
      if (s.frozen) frozen_err += s.error;
    }
  };

  double value = 0.0, err = 0.0, resabs = 0.0, frozen_err = 0.0;
  for (;;) {
    totals(value, err, resabs, frozen_err);
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
    if (err <= tol || err <= 100.0 * eps * resabs) {
      out.converged = true;
      break;
    }
    if (segs.size() >= opt.max_intervals || frozen_err >= err) break;

    auto worst = segs.end();
    for (auto it = segs.begin(); it != segs.end(); ++it) {
      if (!it->frozen && (worst == segs.end() || it->error > worst->error)) {
        worst = it;
      }
    }
    const double lo = worst->a;
    const double hi = worst->b;
    const double mid = 0.5 * (lo + hi);
    if (!(lo < mid && mid < hi) ||
        std::abs(hi - lo) <= 8.0 * eps * std::max(std::abs(lo), std::abs(hi))) {
      worst->frozen = true;
      continue;
    }
    const auto left = detail::gk15(f, lo, mid);
    const auto right = detail::gk15(f, mid, hi);
    out.evaluations += 30;
    *worst = left;
    segs.push_back(right);
  }
  out.value = value;
  out.abs_error = err;
  out.intervals = segs.size();
  return out;
}

/// gauss_kronrod() that throws QuadratureError when the tolerance is missed.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
  const auto r = gauss_kronrod(f, a, b, opt);
  if (!r.converged) {
    throw QuadratureError("quadrature on [" + std::to_string(a) + ", " +
                          std::to_string(b) + "] did not reach tolerance (error " +
                          std::to_string(r.abs_error) + " after " +
                          std::to_string(r.intervals) + " intervals)");
  }
  return r.value;
}

/// Numerically stable log(exp(a) + exp(b)).
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::abs(a - b)));
}

}  // namespace downcross
