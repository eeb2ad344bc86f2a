#pragma once

// Delayed Mittag-Leffler kernels
//
//     E^{a,b,tau}_{alpha,beta}(t) = L^{-1}[ s^(alpha-beta) / (s^alpha - a - b e^(-s tau)) ](t).
//
// Expanding the image in powers of b e^(-s tau) gives the finite sum
//
//     E(t) = sum_{n tau < t} b^n u^(alpha n + beta - 1) E^{n+1}_{alpha, alpha n + beta}(a u^alpha),  u = t - n tau,
//
// and every three-parameter term is the Hankel-type integral
//
//     (1 / 2 pi i) int_gamma sigma^(alpha - beta) e^sigma (sigma^alpha - z)^-(n+1) d sigma
//
// over gamma(mu, theta): the ray arg sigma = -theta, the arc |sigma| = mu, the ray
// arg sigma = theta. Only the upper half is integrated (conjugate symmetry).

#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <ostream>
#include <vector>

#include "fdde/core.hpp"

namespace fdde {

struct ContourSpec {
  double mu = 1.0;                            // arc radius in the scaled variable sigma = (t - n tau) s
  double theta = std::numbers::pi / 2 + 0.3;  // ray angle, pi/2 < theta < pi
  bool adapt_radius = true;                   // raise mu to the saddle and past a real pole
  double truncation_tol = 1e-18;              // ray panels below this fraction of the peak are dropped
  int max_ray_panels = 400;
  double contour_margin = 1e-12;              // minimum |sigma^alpha - z| along an explicit contour

  /// Throws DomainError unless mu > 0 and pi/2 < theta < pi.
  void validate() const;
};

enum class KernelBeta { One, Alpha };

[[nodiscard]] double beta_value(KernelBeta beta, double alpha) noexcept;
[[nodiscard]] const char* to_string(KernelBeta beta) noexcept;

struct KernelQuery {
  ProblemParams p;
  KernelBeta beta = KernelBeta::One;
  double t = 1.0;
};

/// Evaluator for E^{a,b,tau}_{alpha,beta} with arbitrary beta > 0 (beta = alpha + 1 and
/// alpha + 2 give the first and second antiderivatives of the beta = alpha kernel).
/// Node sets are cached per term; instances are safe to share between threads.
class DelayedMittagLeffler {
 public:
  DelayedMittagLeffler(const ProblemParams& p, double beta, ContourSpec contour = {});

  [[nodiscard]] const ProblemParams& params() const noexcept { return p_; }
  [[nodiscard]] double beta() const noexcept { return beta_; }

  /// Value at t >= 0. At t = 0 the right limit is returned (1 for beta = 1, 0 for
  /// beta > 1); DomainError for t < 0 and for t = 0 with beta < 1.
  [[nodiscard]] double operator()(double t) const;

  /// Unsymmetrized quadrature over the whole contour (both halves), divided by
  /// 2 pi i. The imaginary part measures the quadrature's departure from realness.
  [[nodiscard]] std::complex<double> full_contour(double t) const;

  /// Values on a batch of times, evaluated in parallel; the result is independent
  /// of the thread count.
  [[nodiscard]] std::vector<double> evaluate(const std::vector<double>& ts) const;

 private:
  struct NodeSet;
  std::shared_ptr<const NodeSet> nodes_for(int n, double z) const;
  std::complex<double> term_integral(int n, double z, double log_scale, bool full) const;
  std::complex<double> sum_terms(double t, bool full) const;
  double radius_for(int n, double z) const;

  ProblemParams p_;
  double beta_;
  ContourSpec contour_;
  mutable std::mutex mutex_;
  mutable std::vector<std::shared_ptr<const NodeSet>> cache_;  // by term index, for z <= 0
};

/// E^{a,b,tau}_{alpha,beta}(t) for beta in {1, alpha}; DomainError for t <= 0.
[[nodiscard]] double eval_kernel(const KernelQuery& q, const ContourSpec& contour = {});

struct DecayPoint {
  double t = 0.0;
  double kernel_abs = 0.0;
  double compensated = 0.0;  // |E| t^alpha (beta = 1) or |E| t^(alpha+1) (beta = alpha)
};

/// Requires a <= b < -a and every t >= 1.
[[nodiscard]] std::vector<DecayPoint> decay_profile(const ProblemParams& p, KernelBeta beta,
                                                    const std::vector<double>& t_grid,
                                                    const ContourSpec& contour = {});

/// CSV with header t,kernel_abs,compensated.
void write_decay_csv(std::ostream& os, const std::vector<DecayPoint>& profile);

struct L1Norm {
  double value = 0.0;
  double error_estimate = 0.0;
  double split_point = 0.0;
  double tail = 0.0;            // C_emp / (alpha split^alpha)
  double tail_constant = 0.0;   // C_emp
};

/// int_0^inf |E^{a,b,tau}_{alpha,alpha}(s)| ds: adaptive Gauss-Kronrod on [0, split]
/// (one panel per delay interval) plus the tail model C_emp / s^(alpha+1).
/// split_point <= 0 selects 50 tau. Requires a <= b < -a; throws
/// TailEstimateFailed when the compensated tail values grow or are not finite.
[[nodiscard]] L1Norm kernel_l1_norm(const ProblemParams& p, double split_point = 0.0, double quad_tol = 1e-10,
                                    const ContourSpec& contour = {});

/// CSV with header value,error_estimate,split_point.
void write_l1_csv(std::ostream& os, const L1Norm& norm);

}  // namespace fdde
