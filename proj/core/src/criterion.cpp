#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

namespace downcross {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

TailFit fit_tail(const std::vector<std::pair<double, double>>& log_probes, std::size_t first) {
  const auto n = static_cast<Eigen::Index>(log_probes.size() - first);
  Eigen::MatrixXd A(n, 5);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double L = log_probes[first + static_cast<std::size_t>(i)].first;
    const double l = std::log(L);
    A(i, 0) = 1.0;
    A(i, 1) = -L;
    A(i, 2) = -l;
    A(i, 3) = 1.0 / L;
    A(i, 4) = l / L;
    y(i) = log_probes[first + static_cast<std::size_t>(i)].second;
  }
  const Eigen::VectorXd beta = A.colPivHouseholderQr().solve(y);
  TailFit fit;
  fit.log_K = beta(0);
  fit.K = std::exp(beta(0));
  fit.p = beta(1);
  fit.s = beta(2);
  fit.k1 = beta(3);
  fit.k2 = beta(4);
  fit.rms_residual = std::sqrt((A * beta - y).squaredNorm() / static_cast<double>(n));
  fit.points = static_cast<std::size_t>(n);
  return fit;
}

std::string fmt(const char* label, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s=%.6g", label, v);
  return buf;
}

}  // namespace

double TailFit::log_model(double x) const {
  const double L = std::log(x);
  const double l = std::log(L);
  return log_K - p * L - s * l + k1 / L + k2 * l / L;
}

Verdict classify_downcrossing(const ScaleFunction& sf, double c, const ClassifierOptions& o) {
  if (!(c > 0.0)) throw std::invalid_argument("crossing depth c must be positive");
  if (o.probes < 8) throw std::invalid_argument("classifier needs at least 8 probes");
  const auto tv = classify_transience(sf, o.transience);
  if (tv.classification != Transience::TransientToPlusInfinity) {
    throw NotTransientError(std::string("down-crossing criterion needs a diffusion transient "
                                        "to +infinity; got ") +
                            to_string(tv.classification));
  }

  Verdict v;
  const double x0 =
      o.first_probe.value_or(std::max(10.0, sf.model().drift_family().asymptotic_start() + c));
  if (!(x0 > 1.0) || !(o.probe_limit > x0)) {
    throw std::invalid_argument("classifier needs 1 < first probe < probe limit");
  }
  v.probe_start = x0;
  v.probe_limit = o.probe_limit;

  // Probes geometric in L = log x.
  const double l0 = std::log(x0);
  const double l1 = std::log(o.probe_limit);
  const double ratio = std::pow(l1 / l0, 1.0 / (o.probes - 1));
  double L = l0;
  for (int j = 0; j < o.probes; ++j, L *= ratio) {
    const double Lj = j + 1 == o.probes ? l1 : L;
    const double x = std::exp(Lj);
    const double lh = log_hazard(sf, c, x);
    v.log_probes.emplace_back(Lj, lh);
    v.probes.emplace_back(x, std::exp(lh));
  }

  const auto used = std::clamp(static_cast<std::size_t>(std::ceil(o.fit_fraction * o.probes)),
                               std::size_t{6}, v.log_probes.size());
  v.fit = fit_tail(v.log_probes, v.log_probes.size() - used);
  v.notes.push_back(fmt("p", v.fit.p) + " " + fmt("s", v.fit.s) + " " +
                    fmt("rms", v.fit.rms_residual) + " over " + std::to_string(used) +
                    " probes");

  const double dp = v.fit.p - 1.0;
  if (dp > o.p_margin) {
    v.classification = DowncrossClass::StopsDownCrossing;
    v.notes.emplace_back("hazard decays faster than 1/x");
  } else if (dp < -o.p_margin) {
    v.classification = DowncrossClass::DownCrossesForever;
    v.notes.emplace_back("hazard decays slower than 1/x");
  } else if (std::abs(dp) <= o.p_resolution) {
    if (v.fit.s <= 1.0 + o.s_resolution) {
      v.classification = DowncrossClass::DownCrossesForever;
      v.notes.emplace_back("p = 1 and s <= 1: integral diverges");
    } else if (v.fit.s > 1.0 + o.s_margin) {
      v.classification = DowncrossClass::StopsDownCrossing;
      v.notes.emplace_back("p = 1 and s > 1: integral converges");
    } else {
      v.notes.emplace_back("p = 1 and s within the margin above 1");
    }
  } else {
    v.notes.emplace_back("p within the margin of 1 but not resolved to 1");
  }

  if (o.compute_partial_integral) {
    v.tail_integral_partial = HazardCurve(sf, c).integral(x0, o.probe_limit);
  }
  return v;
}

DowncrossProbability ever_downcross_probability(const OnsetLaw& law, const ClassifierOptions& o) {
  DowncrossProbability out;
  ClassifierOptions co = o;
  co.compute_partial_integral = false;
  if (!co.first_probe) {
    const double c = law.depth();
    const double base =
        std::max(10.0, law.hazard().scale().model().drift_family().asymptotic_start() + c);
    co.first_probe = std::max(base, law.start());
  }
  // A recurrent diffusion, or one drifting to -inf, falls by c surely.
  const auto tv = classify_transience(law.hazard().scale(), co.transience);
  if (tv.classification == Transience::Recurrent ||
      tv.classification == Transience::TransientToMinusInfinity) {
    out.divergent = true;
    out.partial_integral = std::numeric_limits<double>::infinity();
    out.verdict.classification = DowncrossClass::DownCrossesForever;
    out.verdict.notes.emplace_back(std::string("diffusion is ") + to_string(tv.classification));
    return out;
  }
  out.verdict = classify_downcrossing(law.hazard().scale(), law.depth(), co);
  switch (out.verdict.classification) {
    case DowncrossClass::DownCrossesForever:
      out.divergent = true;
      out.probability = 1.0;
      out.partial_integral = std::numeric_limits<double>::infinity();
      return out;
    case DowncrossClass::Indeterminate:
      throw IndeterminateTail("tail fit is too close to the convergence boundary: " +
                              out.verdict.notes.front());
    case DowncrossClass::StopsDownCrossing:
      break;
  }
  if (!(law.start() < co.probe_limit)) {
    throw std::invalid_argument("onset law start lies beyond the probe limit");
  }
  out.partial_integral = law.hazard().integral(law.start(), co.probe_limit);
  out.verdict.tail_integral_partial = out.partial_integral;

  // Fitted model beyond the probe limit, in l = log log x with
  // l = l_max + t / (1 - t); h dx = K x^(1-p) L^(1-s) exp(corr) dl.
  TailFit fit = out.verdict.fit;
  const bool unit_power = std::abs(fit.p - 1.0) <= co.p_resolution;
  const double lmax = std::log(std::log(co.probe_limit));
  auto f = [&](double t) {
    const double l = lmax + t / (1.0 - t);
    const double L = std::exp(l);
    double lg = fit.log_K + (1.0 - fit.s) * l - 2.0 * std::log1p(-t);
    if (!unit_power) lg += (1.0 - fit.p) * L;
    if (std::isfinite(L)) lg += fit.k1 / L + fit.k2 * l / L;
    return lg == kNegInf || std::isnan(lg) ? 0.0 : std::exp(lg);
  };
  QuadratureOptions q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-8;
  q.max_intervals = 4000;
  out.extrapolated_integral = integrate(f, 0.0, 1.0, q);
  const double total = out.partial_integral + out.extrapolated_integral;
  out.extrapolated_fraction = total > 0.0 ? out.extrapolated_integral / total : 0.0;
  out.probability = -std::expm1(-total);
  return out;
}

const char* to_string(DowncrossClass c) {
  switch (c) {
    case DowncrossClass::StopsDownCrossing: return "StopsDownCrossing";
    case DowncrossClass::DownCrossesForever: return "DownCrossesForever";
    case DowncrossClass::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

const char* to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::SummableIO_zero: return "SummableIO_zero";
    case SeriesVerdict::Divergent_IO_one: return "Divergent_IO_one";
    case SeriesVerdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

}  // namespace downcross
