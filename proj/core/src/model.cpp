#include "downcross/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "downcross/errors.hpp"

namespace downcross {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double logloglog_tail(const DriftFamily::LogLogLog& p, double x) {
  const double lx = std::log(x);
  return lx / (2.0 * p.c) + (p.gamma / p.c) * std::log(lx);
}

double tabulated_value(const DriftFamily::Tabulated& t, double x) {
  const auto& pts = t.points;
  if (x <= pts.front().first) return pts.front().second;
  if (x >= pts.back().first) return pts.back().second;
  auto hi = std::upper_bound(pts.begin(), pts.end(), x,
                             [](double v, const auto& p) { return v < p.first; });
  auto lo = hi - 1;
  const double w = (x - lo->first) / (hi->first - lo->first);
  return lo->second + w * (hi->second - lo->second);
}

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

DriftFamily::DriftFamily(Spec s) : spec_(std::make_shared<const Spec>(std::move(s))) {}

DriftFamily DriftFamily::zero() { return DriftFamily(Zero{}); }

DriftFamily DriftFamily::constant(double beta) {
  if (!std::isfinite(beta)) throw std::invalid_argument("constant drift must be finite");
  return DriftFamily(Constant{beta});
}

DriftFamily DriftFamily::logloglog(double c, double gamma, double x_cut,
                                   std::optional<double> clamp) {
  if (!(c > 0.0)) throw std::invalid_argument("logloglog drift requires c > 0");
  if (!(x_cut >= std::numbers::e)) {
    throw std::invalid_argument("logloglog drift requires x_cut >= e");
  }
  if (!std::isfinite(gamma)) throw std::invalid_argument("logloglog gamma must be finite");
  if (clamp && !std::isfinite(*clamp)) {
    throw std::invalid_argument("logloglog clamp must be finite");
  }
  return DriftFamily(LogLogLog{c, gamma, x_cut, clamp});
}

DriftFamily DriftFamily::bessel(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("bessel drift requires k > 0");
  return DriftFamily(Bessel{k});
}

DriftFamily DriftFamily::tabulated(std::vector<std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("tabulated drift needs at least one point");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!std::isfinite(points[i].first) || !std::isfinite(points[i].second)) {
      throw std::invalid_argument("tabulated drift points must be finite");
    }
    if (i > 0 && !(points[i].first > points[i - 1].first)) {
      throw std::invalid_argument("tabulated drift abscissae must be strictly increasing");
    }
  }
  return DriftFamily(Tabulated{std::move(points)});
}

DriftFamily DriftFamily::sum(std::vector<DriftFamily> terms) {
  if (terms.empty()) throw std::invalid_argument("sum drift needs at least one term");
  return DriftFamily(Sum{std::move(terms)});
}

DriftFamily DriftFamily::custom(std::function<double(double)> fn, std::string label,
                                double domain_lower) {
  if (!fn) throw std::invalid_argument("custom drift needs a callable");
  return DriftFamily(Custom{std::move(fn), std::move(label), domain_lower});
}

double DriftFamily::operator()(double x) const {
  return std::visit(
      Overloaded{
          [](const Zero&) { return 0.0; },
          [](const Constant& p) { return p.beta; },
          [x](const LogLogLog& p) {
            if (x >= p.x_cut) return logloglog_tail(p, x);
            return p.clamp ? *p.clamp : logloglog_tail(p, p.x_cut);
          },
          [x](const Bessel& p) { return (p.k - 1.0) / (2.0 * x); },
          [x](const Tabulated& p) { return tabulated_value(p, x); },
          [x](const Sum& p) {
            double acc = 0.0;
            for (const auto& t : p.terms) acc += t(x);
            return acc;
          },
          [x](const Custom& p) { return p.fn(x); },
      },
      *spec_);
}

double DriftFamily::domain_lower() const {
  constexpr double ninf = -std::numeric_limits<double>::infinity();
  return std::visit(Overloaded{
                        [](const Bessel&) { return 0.0; },
                        [](const Sum& p) {
                          double lo = ninf;
                          for (const auto& t : p.terms) lo = std::max(lo, t.domain_lower());
                          return lo;
                        },
                        [](const Custom& p) { return p.domain_lower; },
                        [](const auto&) { return ninf; },
                    },
                    *spec_);
}

double DriftFamily::asymptotic_start() const {
  return std::visit(Overloaded{
                        [](const LogLogLog& p) { return p.x_cut; },
                        [](const Tabulated& p) { return p.points.back().first; },
                        [](const Sum& p) {
                          double s = 0.0;
                          for (const auto& t : p.terms) s = std::max(s, t.asymptotic_start());
                          return s;
                        },
                        [](const auto&) { return 0.0; },
                    },
                    *spec_);
}

std::vector<double> DriftFamily::kinks() const {
  std::vector<double> out = std::visit(
      Overloaded{
          [](const LogLogLog& p) { return std::vector<double>{p.x_cut}; },
          [](const Tabulated& p) {
            std::vector<double> k;
            for (const auto& pt : p.points) k.push_back(pt.first);
            return k;
          },
          [](const Sum& p) {
            std::vector<double> k;
            for (const auto& t : p.terms) {
              const auto tk = t.kinks();
              k.insert(k.end(), tk.begin(), tk.end());
            }
            return k;
          },
          [](const auto&) { return std::vector<double>{}; },
      },
      *spec_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string DriftFamily::name() const {
  return std::visit(
      Overloaded{
          [](const Zero&) { return std::string("zero"); },
          [](const Constant& p) { return "constant(beta=" + fmt_double(p.beta) + ")"; },
          [](const LogLogLog& p) {
            return "logloglog(c=" + fmt_double(p.c) + ", gamma=" + fmt_double(p.gamma) +
                   ", x_cut=" + fmt_double(p.x_cut) + ")";
          },
          [](const Bessel& p) { return "bessel(k=" + fmt_double(p.k) + ")"; },
          [](const Tabulated& p) {
            return "tabulated(" + std::to_string(p.points.size()) + " points)";
          },
          [](const Sum& p) {
            std::string s = "sum(";
            for (std::size_t i = 0; i < p.terms.size(); ++i) {
              if (i) s += ", ";
              s += p.terms[i].name();
            }
            return s + ")";
          },
          [](const Custom& p) { return "custom(" + p.label + ")"; },
      },
      *spec_);
}

std::map<std::string, double> DriftFamily::params() const {
  return std::visit(Overloaded{
                        [](const Constant& p) {
                          return std::map<std::string, double>{{"beta", p.beta}};
                        },
                        [](const LogLogLog& p) {
                          std::map<std::string, double> m{
                              {"c", p.c}, {"gamma", p.gamma}, {"x_cut", p.x_cut}};
                          if (p.clamp) m["clamp"] = *p.clamp;
                          return m;
                        },
                        [](const Bessel& p) {
                          return std::map<std::string, double>{{"k", p.k}};
                        },
                        [](const auto&) { return std::map<std::string, double>{}; },
                    },
                    *spec_);
}

DiffusionCoefficient DiffusionCoefficient::unit() { return {}; }

DiffusionCoefficient DiffusionCoefficient::constant(double value) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw PositivityError("constant diffusion coefficient must be positive and finite");
  }
  DiffusionCoefficient d;
  d.value_ = value;
  d.label_ = "constant(" + fmt_double(value) + ")";
  return d;
}

DiffusionCoefficient DiffusionCoefficient::custom(std::function<double(double)> fn,
                                                  std::string label) {
  if (!fn) throw std::invalid_argument("custom diffusion needs a callable");
  DiffusionCoefficient d;
  d.fn_ = std::move(fn);
  d.label_ = std::move(label);
  return d;
}

double DiffusionCoefficient::operator()(double x) const { return fn_ ? fn_(x) : value_; }

DiffusionModel::DiffusionModel(DriftFamily drift, DiffusionCoefficient diffusion,
                               std::string name)
    : drift_(std::move(drift)), diffusion_(std::move(diffusion)), name_(std::move(name)) {
  if (name_.empty()) name_ = drift_.name();
  kinks_ = drift_.kinks();
}

bool DiffusionModel::in_domain(double x) const {
  const double lo = domain_lower();
  if (std::isnan(x)) return false;
  return std::isinf(lo) ? true : x > lo;
}

void DiffusionModel::check_domain(double x) const {
  if (!in_domain(x)) {
    throw DomainError("x = " + fmt_double(x) + " is outside the state space of " + name_);
  }
}

double DiffusionModel::drift(double x) const {
  check_domain(x);
  return drift_(x);
}

double DiffusionModel::diffusion(double x) const {
  check_domain(x);
  const double a = diffusion_(x);
  if (!(a > 0.0)) {
    throw PositivityError("diffusion coefficient a(" + fmt_double(x) +
                          ") = " + fmt_double(a) + " is not positive");
  }
  return a;
}

double DiffusionModel::exponent_density(double x) const {
  return 2.0 * drift(x) / diffusion(x);
}

double evaluate_drift(const DiffusionModel& model, double x) { return model.drift(x); }

double evaluate_diffusion(const DiffusionModel& model, double x) {
  return model.diffusion(x);
}

}  // namespace downcross
