#include "downcross/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "downcross/errors.hpp"

namespace downcross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_data(const EmpiricalSurvival& emp, std::size_t min_uncensored) {
  if (emp.uncensored() < min_uncensored) {
    throw InsufficientData("need at least " + std::to_string(min_uncensored) +
                           " uncensored samples, have " + std::to_string(emp.uncensored()));
  }
}

}  // namespace

EmpiricalSurvival::EmpiricalSurvival(std::vector<double> offsets,
                                     std::vector<double> censor_levels)
    : offsets_(std::move(offsets)), censored_(censor_levels.size()), frontier_(kInf) {
  for (double g : offsets_) {
    if (std::isnan(g)) throw std::invalid_argument("onset offset is NaN");
  }
  std::sort(offsets_.begin(), offsets_.end());
  for (double c : censor_levels) frontier_ = std::min(frontier_, c);
}

EmpiricalSurvival EmpiricalSurvival::from_onsets(std::span<const std::optional<double>> onsets,
                                                 double x0,
                                                 std::span<const double> censor_levels) {
  if (!censor_levels.empty() && censor_levels.size() != onsets.size()) {
    throw std::invalid_argument("censor levels must match onsets one to one");
  }
  std::vector<double> offsets;
  std::vector<double> censored;
  for (std::size_t i = 0; i < onsets.size(); ++i) {
    if (onsets[i]) {
      offsets.push_back(*onsets[i] - x0);
    } else {
      censored.push_back(censor_levels.empty() ? kInf : censor_levels[i]);
    }
  }
  return EmpiricalSurvival(std::move(offsets), std::move(censored));
}

double EmpiricalSurvival::operator()(double gamma) const {
  const std::size_t n = size();
  if (n == 0) return 1.0;
  const auto above = offsets_.end() - std::upper_bound(offsets_.begin(), offsets_.end(), gamma);
  return static_cast<double>(static_cast<std::size_t>(above) + censored_) /
         static_cast<double>(n);
}

double ks_distance(const EmpiricalSurvival& emp, const std::function<double(double)>& survival,
                   std::span<const double> grid, std::size_t min_uncensored) {
  require_data(emp, min_uncensored);
  double d = 0.0;
  std::size_t used = 0;
  for (double g : grid) {
    if (!(g < emp.censor_frontier())) continue;
    d = std::max(d, std::abs(emp(g) - survival(g)));
    ++used;
  }
  if (used == 0) throw InsufficientData("no grid point lies below the censoring frontier");
  return d;
}

double ks_distance(const EmpiricalSurvival& emp, const OnsetLaw& law,
                   std::span<const double> grid, std::size_t min_uncensored) {
  require_data(emp, min_uncensored);
  std::vector<double> g;
  for (double v : grid) {
    if (v < emp.censor_frontier()) g.push_back(v);
  }
  if (g.empty()) throw InsufficientData("no grid point lies below the censoring frontier");
  std::sort(g.begin(), g.end());
  std::vector<double> nonneg;
  for (double v : g) nonneg.push_back(std::max(0.0, v));
  const auto s = law.survival_curve(nonneg);
  double d = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double exact = g[i] < 0.0 ? 1.0 : s[i];
    d = std::max(d, std::abs(emp(g[i]) - exact));
  }
  return d;
}

double ks_distance_exact(const EmpiricalSurvival& emp,
                         const std::function<double(double)>& survival,
                         std::size_t min_uncensored) {
  require_data(emp, min_uncensored);
  const auto& xs = emp.offsets();
  const double n = static_cast<double>(emp.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] < emp.censor_frontier())) break;
    if (i > 0 && xs[i] == xs[i - 1]) continue;
    const double s = survival(xs[i]);
    // Just before the jump: #{> x_i} + #{= x_i}; at the jump: #{> x_i}.
    const auto first = std::lower_bound(xs.begin(), xs.end(), xs[i]);
    const auto last = std::upper_bound(xs.begin(), xs.end(), xs[i]);
    const double after = static_cast<double>(xs.end() - last) + static_cast<double>(emp.censored());
    const double before = after + static_cast<double>(last - first);
    d = std::max({d, std::abs(after / n - s), std::abs(before / n - s)});
  }
  return d;
}

double dkw_bound(std::size_t n, double alpha) {
  if (n == 0) throw std::invalid_argument("dkw_bound needs n >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) throw std::invalid_argument("wilson_interval needs n >= 1");
  if (successes > n) throw std::invalid_argument("successes exceed trials");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace downcross
