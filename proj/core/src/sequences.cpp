#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

#include "downcross/analysis.hpp"
#include "downcross/errors.hpp"

namespace downcross {

namespace {

void accumulate(SequenceSeries& out) {
  out.partial_sums.reserve(out.terms.size());
  double acc = 0.0;
  for (double p : out.terms) {
    acc += p;
    out.partial_sums.push_back(acc);
  }
}

std::string exponent_note(double alpha) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "p_n ~ n^-%.6g", alpha);
  return buf;
}

}  // namespace

SequenceSeries bessel_sequence_series(double k, double rho, int n_max) {
  if (!(k > 2.0)) throw DomainError("Bessel dimension must exceed 2 for transience to +inf");
  if (!(rho > 0.0)) throw std::invalid_argument("rho must be positive");
  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");

  SequenceSeries out;
  out.terms.reserve(static_cast<std::size_t>(n_max - 1));
  // log d_m = rho log m!, p_n = exp(-(k-2)(log d_n - log d_{n-1})).
  for (int n = 2; n <= n_max; ++n) {
    const double log_ratio = rho * (std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(n)));
    out.terms.push_back(std::exp((2.0 - k) * log_ratio));
  }
  accumulate(out);
  out.decay_exponent = rho * (k - 2.0);
  out.verdict = out.decay_exponent > 1.0 + 1e-12 ? SeriesVerdict::SummableIO_zero
                                                 : SeriesVerdict::Divergent_IO_one;
  out.notes.push_back(exponent_note(out.decay_exponent));
  return out;
}

SequenceSeries logdrift_downcross_sequence_check(double c, double spacing, int n_max,
                                                 const SequenceCheckOptions& o) {
  if (!(c > 0.0)) throw std::invalid_argument("c must be positive");
  if (!(spacing > 0.0)) throw std::invalid_argument("level spacing must be positive");
  if (n_max < 2) throw std::invalid_argument("n_max must be at least 2");
  if (o.fit_samples < 3 || !(o.fit_n_min >= 2.0) || !(o.fit_n_max > o.fit_n_min)) {
    throw std::invalid_argument("invalid decay-fit grid");
  }

  const ScaleFunction sf(DiffusionModel(DriftFamily::logloglog(c, 0.0, o.x_cut)), o.scale);
  // Having reached d_n, the path returns to d_{n-1} with probability
  // int_{d_n}^inf u' / int_{d_{n-1}}^inf u'.
  auto term = [&](double n) {
    const double lo = spacing * (n - 1.0);
    return std::exp(sf.log_tail_integral_rel(lo, spacing) - sf.log_tail_integral_rel(lo, 0.0));
  };

  SequenceSeries out;
  out.terms.reserve(static_cast<std::size_t>(n_max - 1));
  for (int n = 2; n <= n_max; ++n) out.terms.push_back(term(n));
  accumulate(out);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double r = std::pow(o.fit_n_max / o.fit_n_min, 1.0 / (o.fit_samples - 1));
  double n = o.fit_n_min;
  for (int i = 0; i < o.fit_samples; ++i, n *= r) {
    const double nn = std::round(n);
    const double x = std::log(nn);
    const double y = std::log(term(nn));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = o.fit_samples;
  out.decay_exponent = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
  if (out.decay_exponent <= 1.0 + o.resolution) {
    out.verdict = SeriesVerdict::Divergent_IO_one;
  } else if (out.decay_exponent > 1.0 + o.margin) {
    out.verdict = SeriesVerdict::SummableIO_zero;
  } else {
    out.verdict = SeriesVerdict::Indeterminate;
  }
  out.notes.push_back(exponent_note(out.decay_exponent));
  return out;
}

}  // namespace downcross
