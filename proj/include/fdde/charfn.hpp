#pragma once

// Characteristic function Q(s) = s^alpha - a - b exp(-s tau): evaluation,
// argument-principle root counting, root location and the algebraic
// stability certificate.

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "fdde/core.hpp"

namespace fdde {

using complex = std::complex<double>;

/// Q(s) on the principal branch of s^alpha (cut along the negative real axis), with 0^alpha = 0.
[[nodiscard]] complex eval_Q(const ProblemParams& p, complex s);
/// Q'(s) = alpha s^(alpha-1) + b tau exp(-s tau).
[[nodiscard]] complex eval_Q_derivative(const ProblemParams& p, complex s);

struct RootSearchOptions {
  double root_residual_tol = 1e-10;
  double boundary_margin = 1e-8;
  int nodes_per_side = 512;
  int max_depth = 40;           // subdivision levels in locate_roots
  int max_segment_splits = 40;  // argument-increment refinement depth per boundary segment
};

struct Rectangle {
  double re_lo = 0.0;
  double re_hi = 1.0;
  double im_lo = -1.0;
  double im_hi = 1.0;

  [[nodiscard]] bool contains(complex z, double slack = 0.0) const noexcept {
    return z.real() >= re_lo - slack && z.real() <= re_hi + slack && z.imag() >= im_lo - slack &&
           z.imag() <= im_hi + slack;
  }
};

class ComplexRegion {
 public:
  enum class Kind { Rectangle, RightHalfPlaneTruncated };

  static ComplexRegion rectangle(double re_lo, double re_hi, double im_lo, double im_hi);
  /// [0, re_hi] x [-im_bound, im_bound].
  static ComplexRegion right_half_plane_truncated(double re_hi, double im_bound);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const Rectangle& bounds() const noexcept { return box_; }

 private:
  ComplexRegion(Kind kind, Rectangle box);
  Kind kind_;
  Rectangle box_;
};

/// Smallest nonnegative real root by bracketing on [0, search_hi] and bisection.
/// Returns nullopt when a + b < 0 and no sign change is found; throws
/// BracketingFailed when a + b >= 0 but Q(search_hi) <= 0.
[[nodiscard]] std::optional<double> find_nonnegative_real_root(const ProblemParams& p, double search_hi,
                                                             const RootSearchOptions& opt = {});

/// Zeros of Q inside the region counted with multiplicity (winding number of Q
/// along the positively oriented boundary). Throws BoundaryDegenerate when |Q|
/// drops below boundary_margin on the boundary, DomainError when the region
/// touches the branch cut.
[[nodiscard]] int count_roots(const ProblemParams& p, const ComplexRegion& region,
                              const RootSearchOptions& opt = {});
[[nodiscard]] int count_roots(const ProblemParams& p, const Rectangle& box, const RootSearchOptions& opt = {});

struct LocatedRoot {
  complex value;
  double residual = 0.0;  // |Q(value)|
  int multiplicity = 1;
};

struct RootReport {
  ComplexRegion region = ComplexRegion::rectangle(0, 1, -1, 1);
  int winding_count = 0;
  std::vector<LocatedRoot> roots;
  bool partial = false;                // subdivision gave up somewhere
  std::vector<Rectangle> unresolved;   // sub-rectangles still holding roots
  std::vector<std::string> warnings;

  [[nodiscard]] int located_count() const noexcept;
};

/// Subdivision + Newton polishing. Only the part of the region with Im >= 0 is
/// searched; conjugates are mirrored.
[[nodiscard]] RootReport locate_roots(const ProblemParams& p, const ComplexRegion& region,
                                      const RootSearchOptions& opt = {});

/// CSV with header re,im,residual,multiplicity.
void write_root_csv(std::ostream& os, const RootReport& report);

/// Witness that the disk {|w - a| <= |b|} (image of Re s >= 0 under a + b e^(-s tau))
/// misses the sector {|arg w| <= alpha pi / 2} (image under s^alpha), except at 0 when a = b.
struct Certificate {
  bool satisfied = false;
  double disk_center = 0.0;
  double disk_radius = 0.0;
  double sector_half_angle = 0.0;
  double separation = 0.0;  // distance between disk and sector
};

[[nodiscard]] Certificate stability_certificate(const ProblemParams& p);

}  // namespace fdde
