#pragma once

// Time-domain solvers for D^alpha x = a x + b x(t - tau) + f(x, x(t - tau)):
// the fractional Adams-Bashforth-Moulton scheme, the variation-of-constants
// formula and a Picard iteration of the map that formula defines.

#include <cstddef>
#include <optional>
#include <ostream>

#include "fdde/core.hpp"
#include "fdde/kernel.hpp"

namespace fdde {

struct SolveConfig {
  double h = 1.0 / 64.0;
  double t_end = 20.0;
  int corrector_iters = 1;  // 1 = PECE
  double picard_tol = 1e-12;
  int picard_max_iters = 200;
  double overflow_guard = 1e12;
  ContourSpec contour;

  /// Throws DomainError unless h > 0, t_end > 0, corrector_iters >= 1 and
  /// tau is an integer multiple of h. Returns m = tau / h.
  std::size_t validate(double tau) const;
  /// Number of steps after t = 0: ceil(t_end / h).
  [[nodiscard]] std::size_t steps() const;
};

/// Fractional ABM predictor-corrector with the full memory sum. The delayed
/// value x(t_k - tau) is read from index k - m. Throws SolutionBlowup when a
/// value is not finite or exceeds overflow_guard in magnitude.
[[nodiscard]] Trajectory solve_abm(const ProblemParams& p, const Nonlinearity& f, const HistoryFunction& phi,
                                   const SolveConfig& cfg);

/// f evaluated along a sampled solution: f(x(s), x(s - tau)) at the grid nodes,
/// interpolated linearly in between.
struct ForcingSamples {
  const Nonlinearity& f;
  const Trajectory& trajectory;
};

/// Variation-of-constants representation
///
///   x(t) = phi(0) E_{alpha,1}(t) + b int_{-tau}^{t-tau} E_{alpha,alpha}(t - tau - s) phi~(s) ds
///          + int_0^t E_{alpha,alpha}(t - s) f(x(s), x(s - tau)) ds.
///
/// Kernels are built once; evaluate() may be called repeatedly.
class VariationOfConstants {
 public:
  VariationOfConstants(const ProblemParams& p, const HistoryFunction& phi, const ContourSpec& contour = {});

  /// Linear part (first two terms) plus, when given, the forcing convolution by
  /// product integration against the samples. DomainError for t <= 0.
  [[nodiscard]] double operator()(double t, const std::optional<ForcingSamples>& forcing = std::nullopt) const;

  [[nodiscard]] double history_term(double t) const;
  [[nodiscard]] double forcing_term(double t, const ForcingSamples& forcing) const;

 private:
  ProblemParams p_;
  const HistoryFunction& phi_;
  DelayedMittagLeffler e1_;
  DelayedMittagLeffler ea_;
  DelayedMittagLeffler r1_;  // antiderivative of ea_
  DelayedMittagLeffler r2_;  // antiderivative of r1_
};

[[nodiscard]] double eval_varconst(const ProblemParams& p, const HistoryFunction& phi,
                                   const std::optional<ForcingSamples>& forcing, double t,
                                   const ContourSpec& contour = {});

/// Fixed-point iteration of the variation-of-constants map on the grid, with
/// piecewise-linear product integration. Starts from xi_0 = phi(0) and stops once
/// two successive iterates differ by less than picard_tol in sup norm;
/// Trajectory::iterations is the index n of the first such pair (xi_n, xi_{n+1}).
/// Throws PicardDiverged after picard_max_iters sweeps or on overflow.
[[nodiscard]] Trajectory solve_picard(const ProblemParams& p, const Nonlinearity& f, const HistoryFunction& phi,
                                      const SolveConfig& cfg);

/// CSV with header t,x,scheme,h, one row per grid node in time order.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace fdde
