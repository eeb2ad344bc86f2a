#pragma once

// Classical two-parameter Mittag-Leffler function
//
//     E_{alpha,beta}(z) = sum_{k>=0} z^k / Gamma(alpha k + beta),   z real.

namespace fdde {

struct MittagLefflerOptions {
  double series_switch = 1.0;    // |z| <= series_switch: power series
  double integral_tol = 1e-14;   // relative tolerance of the integral representation
};

/// Series for |z| <= series_switch; otherwise the real integral representation
/// (0 < alpha < 1), with E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z to bring
/// beta below 1 + alpha. Throws DomainError for beta <= 0, for alpha <= 0, and
/// for alpha >= 1 outside the series range.
[[nodiscard]] double mittag_leffler(double alpha, double beta, double z, const MittagLefflerOptions& opt = {});

/// Partial sum of the power series with at least min_terms terms; stops once
/// terms are decreasing and below rel_tol relative to the sum.
[[nodiscard]] double mittag_leffler_series(double alpha, double beta, double z, double rel_tol = 1e-17,
                                           int min_terms = 4, int max_terms = 100000);

}  // namespace fdde
