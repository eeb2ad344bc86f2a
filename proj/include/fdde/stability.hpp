#pragma once

// Small-data stability certificate for the nonlinear delay equation: Lipschitz
// modulus of f near the origin, kernel constants, contraction factor q and the
// admissible initial-data radius delta. Plus empirical attractivity checks.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdde/core.hpp"
#include "fdde/kernel.hpp"
#include "fdde/solver.hpp"

namespace fdde {

struct LipschitzOptions {
  int grid_points = 33;       // per axis of the box [-rho, rho]^2
  int random_pairs = 10000;   // seeded refinement pairs
  std::uint64_t seed = 20240601;
};

/// Lower estimate of
///   l_f(rho) = sup |f(x, y) - f(x', y')| / max(|x - x'|, |y - y'|)
/// over x, y, x', y' in [-rho, rho]: all pairs of a uniform grid, then seeded
/// random pairs concentrated around the running maximizer. With a fixed seed the
/// random pairs for n samples are a prefix of those for n + 1, so the estimate is
/// nondecreasing in the sample count. Throws HypothesisViolated if f(0, 0) != 0.
[[nodiscard]] double estimate_lipschitz_modulus(const Nonlinearity& f, double rho, const LipschitzOptions& opt = {});

struct LipschitzModulus {
  std::vector<double> rho_grid;
  std::vector<double> ell_values;  // running maximum over increasing rho
  LipschitzOptions sampling;
};

/// Estimates on every radius, reported as a nondecreasing function of rho.
[[nodiscard]] LipschitzModulus lipschitz_profile(const Nonlinearity& f, std::vector<double> rho_grid,
                                                 const LipschitzOptions& opt = {});

struct KernelConstants {
  double sup_E1 = 0.0;            // sup_t |E_{alpha,1}(t)|
  double l1_Ealpha = 0.0;         // int_0^inf |E_{alpha,alpha}|
  double l1_error = 0.0;
  double compensated_E1 = 0.0;    // max |E_{alpha,1}(t)| t^alpha on the profile grid
  double compensated_Ealpha = 0.0;
  double C_empirical = 0.0;       // max of the three quantities above
};

/// Requires a <= b < -a. sup_E1 on a grid over [0, 100 max(1, tau)] plus the
/// decay-profile tail bound beyond it.
[[nodiscard]] KernelConstants compute_constants(const ProblemParams& p, const ContourSpec& contour = {});

enum class Verdict { CertifiedAsymptoticallyStable, Inconclusive };

[[nodiscard]] const char* to_string(Verdict v) noexcept;

struct StabilityVerdict {
  bool linear_ok = false;
  bool h2_ok = false;
  double epsilon_star = 0.0;
  double ell_epsilon_star = 0.0;
  double q = 0.0;
  double C_empirical = 0.0;
  double delta = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<KernelConstants> constants;
  std::vector<double> epsilon_grid;
  std::vector<double> ell_grid;
};

inline constexpr const char* kVerdictQualifier = "certified modulo numerical constant estimation";

/// Flat key=value record: linear_ok, h2_ok, epsilon_star, q, C_empirical, delta, verdict, qualifier.
void write_verdict(std::ostream& os, const StabilityVerdict& v);

struct CertifyOptions {
  LipschitzOptions lipschitz;
  int epsilon_levels = 21;   // epsilon = 2^-k, k = 0 .. levels - 1
  double h2_tol = 1e-3;      // l_f at the smallest epsilon must fall below this
  ContourSpec contour;
};

/// Certified iff a <= b < -a, l_f vanishes numerically at the origin, and some
/// epsilon on the grid gives q = l_f(epsilon) C_empirical < 1; epsilon_star is the
/// largest such epsilon and delta = (1 - q) epsilon_star / (sup_E1 + |b| l1 + 1).
/// Never claims instability. Throws HypothesisViolated if f(0, 0) != 0.
[[nodiscard]] StabilityVerdict certify(const ProblemParams& p, const Nonlinearity& f, const CertifyOptions& opt = {});

struct AttractivityEntry {
  double tail_sup = 0.0;   // sup |x(t)| for t >= tail_start
  bool decayed = false;
  bool blowup = false;
  double blowup_time = 0.0;
  std::string message;
};

struct AttractivityReport {
  double tail_start = 0.0;
  double tolerance = 0.0;
  std::vector<AttractivityEntry> entries;

  [[nodiscard]] bool all_decayed() const noexcept;
};

/// ABM run per history; decayed when the tail sup over t >= tail_fraction * t_end
/// is below tol. Blowups are recorded per history.
[[nodiscard]] AttractivityReport empirical_attractivity(const ProblemParams& p, const Nonlinearity& f,
                                                        const std::vector<HistoryFunction>& phis,
                                                        const SolveConfig& cfg, double tol = 0.02,
                                                        double tail_fraction = 0.75);

}  // namespace fdde
