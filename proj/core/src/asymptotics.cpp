#include <cmath>
#include <numbers>
#include <stdexcept>

#include "downcross/analysis.hpp"

namespace downcross {

namespace {

ScaleFunction logloglog_scale(double c, double gamma) {
  return ScaleFunction(DiffusionModel(DriftFamily::logloglog(c, gamma)));
}

}  // namespace

double asymptotic_hazard_ratio(const ScaleFunction& sf, double c, double gamma, double x) {
  if (!(x > std::numbers::e)) throw std::invalid_argument("asymptotic ratio needs x > e");
  const double L = std::log(x);
  return std::exp(log_hazard(sf, c, x) + std::log(c) + L + (2.0 * gamma - 1.0) * std::log(L));
}

double asymptotic_hazard_ratio(double c, double gamma, double x) {
  return asymptotic_hazard_ratio(logloglog_scale(c, gamma), c, gamma, x);
}

AsymptoticSweep asymptotic_hazard_sweep(double c, double gamma, std::span<const double> xs,
                                        double tolerance) {
  if (xs.size() < 2) throw std::invalid_argument("sweep needs at least two points");
  const ScaleFunction sf = logloglog_scale(c, gamma);
  AsymptoticSweep out;
  for (double x : xs) out.ratios.emplace_back(x, asymptotic_hazard_ratio(sf, c, gamma, x));
  const double last = out.ratios.back().second;
  const double prev = out.ratios[out.ratios.size() - 2].second;
  out.last_relative_change = std::abs(last / prev - 1.0);
  out.converged = out.last_relative_change < tolerance;
  out.limit = last;
  out.log_distance_inverse_c = std::abs(std::log(last * c));
  out.log_distance_inverse_c_e2 = std::abs(std::log(last * c) + 2.0);
  out.nearest = out.log_distance_inverse_c <= out.log_distance_inverse_c_e2 ? "1/c" : "1/(c e^2)";
  return out;
}

}  // namespace downcross
