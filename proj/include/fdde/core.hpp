#pragma once

// Shared domain types for the scalar Caputo delay equation
//
//     D^alpha x(t) = a x(t) + b x(t - tau) + f(x(t), x(t - tau)),   t > 0,
//     x(t) = phi(t),                                                t in [-tau, 0].

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fdde {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation (t < -tau, t <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class BracketingFailed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class BoundaryDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ContourDegenerate : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class TailEstimateFailed : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class PicardDiverged : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class SolutionBlowup : public NumericalError {
 public:
  SolutionBlowup(double t, const std::string& what) : NumericalError(what), time_(t) {}
  [[nodiscard]] double time() const noexcept { return time_; }

 private:
  double time_;
};

/// f(0, 0) != 0 where the trivial solution is required.
class HypothesisViolated : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Problem parameters
// ---------------------------------------------------------------------------

struct ProblemParams {
  double alpha = 0.5;  // Caputo order, 0 < alpha < 1
  double a = 0.0;      // instantaneous coefficient
  double b = 0.0;      // delayed coefficient
  double tau = 1.0;    // delay > 0
};

/// a <= b < -a: no characteristic root with nonnegative real part.
[[nodiscard]] constexpr bool satisfies_stability_criterion(double a, double b) noexcept {
  return a <= b && b < -a;
}

enum class CoefficientClass { StableCriterion, NonnegativeSum, Inconclusive };

[[nodiscard]] CoefficientClass classify_coefficients(double a, double b) noexcept;
[[nodiscard]] const char* to_string(CoefficientClass c) noexcept;

struct ValidationReport {
  std::vector<std::string> violations;
  CoefficientClass coefficient_class = CoefficientClass::Inconclusive;

  [[nodiscard]] bool valid() const noexcept { return violations.empty(); }
};

[[nodiscard]] ValidationReport validate_params(const ProblemParams& p);

/// Throws DomainError listing every violation when the parameters are invalid.
void require_valid(const ProblemParams& p);

// ---------------------------------------------------------------------------
// Nonlinearity f(x, y), evaluated as f(x(t), x(t - tau))
// ---------------------------------------------------------------------------

struct PolynomialTerm {
  double coeff = 0.0;
  int x_power = 0;
  int y_power = 0;
};

class Nonlinearity {
 public:
  using Function = std::function<double(double, double)>;

  /// The zero function.
  Nonlinearity();
  Nonlinearity(Function f, std::string name);

  static Nonlinearity zero();
  /// f(x, y) = x^2 + y^3.
  static Nonlinearity example51();
  /// f(x, y) = sum c x^i y^j.
  static Nonlinearity polynomial(std::vector<PolynomialTerm> terms);

  [[nodiscard]] double operator()(double x, double y) const { return fn_(x, y); }
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  /// True only when f is known to vanish identically (built from zero()).
  [[nodiscard]] bool is_zero() const noexcept { return zero_; }

  /// Throws HypothesisViolated unless f(0, 0) == 0.
  void require_trivial_solution() const;

 private:
  Function fn_;
  std::string name_;
  bool zero_ = false;
};

// ---------------------------------------------------------------------------
// Initial function phi on [-tau, 0] and its zero extension
// ---------------------------------------------------------------------------

class HistoryFunction {
 public:
  using Function = std::function<double(double)>;

  static HistoryFunction constant(double tau, double c);
  /// phi(t) = slope * t + intercept.
  static HistoryFunction affine(double tau, double slope, double intercept);
  static HistoryFunction from_closure(double tau, Function phi);
  /// Piecewise-linear table on equally spaced nodes -tau, -tau + h, ..., 0 with h = tau / (n - 1).
  static HistoryFunction from_table(double tau, std::vector<double> samples);

  [[nodiscard]] double tau() const noexcept { return tau_; }

  /// phi(t) for t in [-tau, 0]; DomainError elsewhere.
  [[nodiscard]] double operator()(double t) const;
  /// phi(t) on [-tau, 0], 0 for t > 0; DomainError for t < -tau.
  [[nodiscard]] double extended(double t) const;

  /// Node spacing of a table representation.
  [[nodiscard]] std::optional<double> table_spacing() const;
  /// max |phi| over a uniform sample (exact for tables and affine functions).
  [[nodiscard]] double sup_norm(std::size_t samples = 1025) const;

 private:
  HistoryFunction(double tau, Function fn, std::vector<double> table);

  double tau_;
  Function fn_;
  std::vector<double> table_;
};

[[nodiscard]] double extend_history(const HistoryFunction& phi, double t);

// ---------------------------------------------------------------------------
// Sampled solution on the uniform grid t_k = (k - m) h, tau = m h
// ---------------------------------------------------------------------------

enum class Scheme { ABM, Picard, VarConst };

[[nodiscard]] const char* to_string(Scheme s) noexcept;

struct Trajectory {
  double tau = 1.0;
  double h = 1.0;
  std::size_t delay_steps = 1;  // m
  Scheme scheme = Scheme::ABM;
  std::vector<double> x;        // x[k] ~ x(t_k), k = 0 is t = -tau
  int iterations = 0;           // Picard sweeps; 0 for time-stepping schemes

  [[nodiscard]] double t0() const noexcept { return -tau; }
  [[nodiscard]] double time(std::size_t k) const noexcept {
    return (static_cast<double>(k) - static_cast<double>(delay_steps)) * h;
  }
  [[nodiscard]] std::size_t size() const noexcept { return x.size(); }
  [[nodiscard]] double t_end() const noexcept { return time(x.size() - 1); }
  /// Index of t = 0.
  [[nodiscard]] std::size_t origin() const noexcept { return delay_steps; }
  /// Piecewise-linear interpolation on [-tau, t_end].
  [[nodiscard]] double at(double t) const;
};

}  // namespace fdde
