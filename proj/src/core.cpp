#include "fdde/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fdde {

CoefficientClass classify_coefficients(double a, double b) noexcept {
  if (satisfies_stability_criterion(a, b)) return CoefficientClass::StableCriterion;
  if (a + b >= 0.0) return CoefficientClass::NonnegativeSum;
  return CoefficientClass::Inconclusive;
}

const char* to_string(CoefficientClass c) noexcept {
  switch (c) {
    case CoefficientClass::StableCriterion: return "StableCriterion";
    case CoefficientClass::NonnegativeSum: return "NonnegativeSum";
    case CoefficientClass::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

ValidationReport validate_params(const ProblemParams& p) {
  ValidationReport report;
  if (!(p.alpha > 0.0 && p.alpha < 1.0)) {
    std::ostringstream os;
    os << "alpha out of (0,1): " << p.alpha;
    report.violations.push_back(os.str());
  }
  if (!(p.tau > 0.0) || !std::isfinite(p.tau)) {
    std::ostringstream os;
    os << "tau must be positive and finite: " << p.tau;
    report.violations.push_back(os.str());
  }
  if (!std::isfinite(p.a)) report.violations.emplace_back("a must be finite");
  if (!std::isfinite(p.b)) report.violations.emplace_back("b must be finite");
  report.coefficient_class = classify_coefficients(p.a, p.b);
  return report;
}

void require_valid(const ProblemParams& p) {
  const auto report = validate_params(p);
  if (report.valid()) return;
  std::string msg = "invalid problem parameters:";
  for (const auto& v : report.violations) msg += " " + v + ";";
  throw DomainError(msg);
}

// ---------------------------------------------------------------------------

Nonlinearity::Nonlinearity() : fn_([](double, double) { return 0.0; }), name_("zero"), zero_(true) {}

Nonlinearity::Nonlinearity(Function f, std::string name) : fn_(std::move(f)), name_(std::move(name)) {}

Nonlinearity Nonlinearity::zero() { return Nonlinearity(); }

Nonlinearity Nonlinearity::example51() {
  return Nonlinearity([](double x, double y) { return x * x + y * y * y; }, "example51");
}

Nonlinearity Nonlinearity::polynomial(std::vector<PolynomialTerm> terms) {
  for (const auto& term : terms) {
    if (term.x_power < 0 || term.y_power < 0) throw DomainError("polynomial powers must be nonnegative");
  }
  auto fn = [terms](double x, double y) {
    double sum = 0.0;
    for (const auto& term : terms) {
      sum += term.coeff * std::pow(x, term.x_power) * std::pow(y, term.y_power);
    }
    return sum;
  };
  return Nonlinearity(std::move(fn), "polynomial");
}

void Nonlinearity::require_trivial_solution() const {
  const double f00 = fn_(0.0, 0.0);
  if (f00 != 0.0) {
    std::ostringstream os;
    os << "nonlinearity '" << name_ << "' has f(0,0) = " << f00 << ", the trivial solution does not exist";
    throw HypothesisViolated(os.str());
  }
}

// ---------------------------------------------------------------------------

namespace {

void check_tau(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("history: tau must be positive and finite");
}

// Accept round-off when t is produced by grid arithmetic.
double domain_slack(double tau) { return 1e-12 * tau; }

}  // namespace

HistoryFunction::HistoryFunction(double tau, Function fn, std::vector<double> table)
    : tau_(tau), fn_(std::move(fn)), table_(std::move(table)) {}

HistoryFunction HistoryFunction::constant(double tau, double c) {
  check_tau(tau);
  return HistoryFunction(tau, [c](double) { return c; }, {});
}

HistoryFunction HistoryFunction::affine(double tau, double slope, double intercept) {
  check_tau(tau);
  return HistoryFunction(tau, [slope, intercept](double t) { return slope * t + intercept; }, {});
}

HistoryFunction HistoryFunction::from_closure(double tau, Function phi) {
  check_tau(tau);
  if (!phi) throw DomainError("history: empty closure");
  return HistoryFunction(tau, std::move(phi), {});
}

HistoryFunction HistoryFunction::from_table(double tau, std::vector<double> samples) {
  check_tau(tau);
  if (samples.size() < 2) throw DomainError("history: a table needs at least two nodes");
  for (double v : samples) {
    if (!std::isfinite(v)) throw DomainError("history: table values must be finite");
  }
  return HistoryFunction(tau, {}, std::move(samples));
}

double HistoryFunction::operator()(double t) const {
  if (t < -tau_ - domain_slack(tau_) || t > domain_slack(tau_)) {
    std::ostringstream os;
    os << "history evaluated at t = " << t << " outside [-tau, 0]";
    throw DomainError(os.str());
  }
  t = std::clamp(t, -tau_, 0.0);
  if (table_.empty()) return fn_(t);

  const double spacing = tau_ / static_cast<double>(table_.size() - 1);
  const double pos = (t + tau_) / spacing;
  const auto i = std::min(static_cast<std::size_t>(pos), table_.size() - 2);
  const double w = pos - static_cast<double>(i);
  return (1.0 - w) * table_[i] + w * table_[i + 1];
}

double HistoryFunction::extended(double t) const {
  if (t > domain_slack(tau_)) return 0.0;
  return (*this)(t);
}

std::optional<double> HistoryFunction::table_spacing() const {
  if (table_.empty()) return std::nullopt;
  return tau_ / static_cast<double>(table_.size() - 1);
}

double HistoryFunction::sup_norm(std::size_t samples) const {
  if (!table_.empty()) {
    double m = 0.0;
    for (double v : table_) m = std::max(m, std::abs(v));
    return m;
  }
  samples = std::max<std::size_t>(samples, 2);
  double m = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = -tau_ + tau_ * static_cast<double>(i) / static_cast<double>(samples - 1);
    m = std::max(m, std::abs(fn_(t)));
  }
  return m;
}

double extend_history(const HistoryFunction& phi, double t) { return phi.extended(t); }

// ---------------------------------------------------------------------------

const char* to_string(Scheme s) noexcept {
  switch (s) {
    case Scheme::ABM: return "ABM";
    case Scheme::Picard: return "Picard";
    case Scheme::VarConst: return "VarConst";
  }
  return "ABM";
}

double Trajectory::at(double t) const {
  if (x.empty()) throw DomainError("empty trajectory");
  const double pos = (t - t0()) / h;
  const double last = static_cast<double>(x.size() - 1);
  if (pos < -1e-9 || pos > last + 1e-9) {
    std::ostringstream os;
    os << "trajectory evaluated at t = " << t << " outside [" << t0() << ", " << t_end() << "]";
    throw DomainError(os.str());
  }
  const double p = std::clamp(pos, 0.0, last);
  const auto i = std::min(static_cast<std::size_t>(p), x.size() >= 2 ? x.size() - 2 : 0);
  if (x.size() == 1) return x[0];
  const double w = p - static_cast<double>(i);
  return (1.0 - w) * x[i] + w * x[i + 1];
}

}  // namespace fdde
