#pragma once

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace downcross {

/// Parametric drift b(x). Immutable; copies share their parameters.
class DriftFamily {
 public:
  struct Zero {};
  struct Constant {
    double beta;
  };
  /// b(x) = log(x)/(2c) + (gamma/c) log log x for x >= x_cut, and the clamp
  /// value (default b(x_cut)) below the cut.
  struct LogLogLog {
    double c;
    double gamma;
    double x_cut;
    std::optional<double> clamp;
  };
  /// b(x) = (k-1)/(2x) on (0, inf).
  struct Bessel {
    double k;
  };
  /// Piecewise-linear through strictly increasing x, constant beyond the ends.
  struct Tabulated {
    std::vector<std::pair<double, double>> points;
  };
  struct Sum {
    std::vector<DriftFamily> terms;
  };
  /// Arbitrary callable; not serializable, for programmatic use.
  struct Custom {
    std::function<double(double)> fn;
    std::string label;
    double domain_lower = -std::numeric_limits<double>::infinity();
  };
  using Spec =
      std::variant<Zero, Constant, LogLogLog, Bessel, Tabulated, Sum, Custom>;

  static constexpr double kDefaultCut = std::numbers::e * std::numbers::e;

  static DriftFamily zero();
  static DriftFamily constant(double beta);
  static DriftFamily logloglog(double c, double gamma, double x_cut = kDefaultCut,
                               std::optional<double> clamp = std::nullopt);
  static DriftFamily bessel(double k);
  static DriftFamily tabulated(std::vector<std::pair<double, double>> points);
  static DriftFamily sum(std::vector<DriftFamily> terms);
  static DriftFamily custom(std::function<double(double)> fn, std::string label,
                            double domain_lower =
                                -std::numeric_limits<double>::infinity());

  /// b(x); no domain check (DiffusionModel does that).
  double operator()(double x) const;

  /// Lower end of the state space; -inf when unbounded.
  double domain_lower() const;

  /// Point beyond which the family is in its asymptotic regime (the cut for
  /// LogLogLog, last knot for Tabulated); 0 otherwise.
  double asymptotic_start() const;

  /// Points where b is continuous but not smooth (the cut, tabulated knots),
  /// sorted. Quadrature splits there.
  std::vector<double> kinks() const;

  std::string name() const;
  std::map<std::string, double> params() const;
  const Spec& spec() const { return *spec_; }

 private:
  explicit DriftFamily(Spec s);
  std::shared_ptr<const Spec> spec_;
};

/// Diffusion coefficient a(x) > 0.
class DiffusionCoefficient {
 public:
  static DiffusionCoefficient unit();
  static DiffusionCoefficient constant(double value);
  static DiffusionCoefficient custom(std::function<double(double)> fn,
                                     std::string label);

  /// a(x), unchecked.
  double operator()(double x) const;
  bool is_constant() const { return !fn_; }
  double constant_value() const { return value_; }
  const std::string& label() const { return label_; }

 private:
  double value_ = 1.0;
  std::function<double(double)> fn_;
  std::string label_ = "unit";
};

/// The generator L = (1/2) a(x) d^2/dx^2 + b(x) d/dx as a pair of evaluators
/// with domain metadata. Immutable and safe to share across threads.
class DiffusionModel {
 public:
  explicit DiffusionModel(DriftFamily drift,
                          DiffusionCoefficient diffusion = DiffusionCoefficient::unit(),
                          std::string name = {});

  /// b(x). Throws DomainError outside the state space.
  double drift(double x) const;
  /// a(x). Throws DomainError outside the state space and PositivityError if
  /// a(x) <= 0 (or NaN).
  double diffusion(double x) const;
  /// 2 b(x) / a(x), the integrand of the scale exponent.
  double exponent_density(double x) const;

  /// Open lower end of the state space (-inf when unbounded).
  double domain_lower() const { return drift_.domain_lower(); }
  const std::vector<double>& kinks() const { return kinks_; }
  bool in_domain(double x) const;

  const DriftFamily& drift_family() const { return drift_; }
  const DiffusionCoefficient& diffusion_coefficient() const { return diffusion_; }
  const std::string& name() const { return name_; }
  std::map<std::string, double> family_params() const { return drift_.params(); }

 private:
  void check_domain(double x) const;

  DriftFamily drift_;
  DiffusionCoefficient diffusion_;
  std::string name_;
  std::vector<double> kinks_;
};

double evaluate_drift(const DiffusionModel& model, double x);
double evaluate_diffusion(const DiffusionModel& model, double x);

}  // namespace downcross
