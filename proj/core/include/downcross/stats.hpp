#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "downcross/analysis.hpp"

namespace downcross {

/// Empirical survival of onset offsets gamma_i = l_c^(i) - x0 with right
/// censoring. A censored path only tells us its offset exceeds its censoring
/// level, so the estimate is defined below the smallest censoring level.
class EmpiricalSurvival {
 public:
  EmpiricalSurvival() = default;
  /// `offsets` are observed onset offsets, `censor_levels` the offsets below
  /// which censored paths are known not to have had their onset.
  EmpiricalSurvival(std::vector<double> offsets, std::vector<double> censor_levels = {});

  /// Builds offsets from sampled onset locations (nullopt = censored at the
  /// matching entry of censor_levels, or at +inf if that is empty).
  static EmpiricalSurvival from_onsets(std::span<const std::optional<double>> onsets, double x0,
                                       std::span<const double> censor_levels = {});

  /// S^(gamma) = #{i : gamma_i > gamma} / n, censored paths counted as
  /// survivors. Right-continuous and non-increasing.
  double operator()(double gamma) const;

  std::size_t size() const { return offsets_.size() + censored_; }
  std::size_t uncensored() const { return offsets_.size(); }
  std::size_t censored() const { return censored_; }
  /// Smallest censoring level (+inf without censoring).
  double censor_frontier() const { return frontier_; }
  const std::vector<double>& offsets() const { return offsets_; }

 private:
  std::vector<double> offsets_;  // sorted
  std::size_t censored_ = 0;
  double frontier_ = std::numeric_limits<double>::infinity();
};

/// sup over the grid (restricted to gamma < censor frontier) of
/// |S^(gamma) - S(gamma)|. Throws InsufficientData with fewer than
/// `min_uncensored` observed offsets.
double ks_distance(const EmpiricalSurvival& emp, const std::function<double(double)>& survival,
                   std::span<const double> grid, std::size_t min_uncensored = 100);
double ks_distance(const EmpiricalSurvival& emp, const OnsetLaw& law,
                   std::span<const double> grid, std::size_t min_uncensored = 100);

/// Exact sup |S^ - S| for a continuous S, checking both sides of every jump
/// below the frontier.
double ks_distance_exact(const EmpiricalSurvival& emp,
                         const std::function<double(double)>& survival,
                         std::size_t min_uncensored = 100);

/// Dvoretzky-Kiefer-Wolfowitz band sqrt(ln(2/alpha) / (2n)).
double dkw_bound(std::size_t n, double alpha);

struct Interval {
  double lower = 0.0;
  double upper = 1.0;
  double half_width() const { return 0.5 * (upper - lower); }
};

/// Wilson score interval for a binomial proportion; z = 1.959964 gives 95%.
Interval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

}  // namespace downcross
