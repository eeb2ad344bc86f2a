#include "fdde/charfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fdde/format.hpp"

namespace fdde {

namespace {

constexpr double kPi = std::numbers::pi;

// s^alpha with arg s in (-pi, pi].
complex principal_pow(complex s, double alpha) {
  if (s == complex(0.0, 0.0)) return {0.0, 0.0};
  double arg = std::atan2(s.imag(), s.real());
  if (arg == -kPi) arg = kPi;
  return std::polar(std::pow(std::abs(s), alpha), alpha * arg);
}

void check_box(const Rectangle& box) {
  if (!(box.re_lo < box.re_hi) || !(box.im_lo < box.im_hi) || !std::isfinite(box.re_lo) ||
      !std::isfinite(box.re_hi) || !std::isfinite(box.im_lo) || !std::isfinite(box.im_hi)) {
    throw DomainError("region bounds must be finite with lo < hi");
  }
  if (box.re_lo < 0.0 && box.im_lo <= 0.0 && box.im_hi >= 0.0) {
    throw DomainError("region crosses the branch cut of s^alpha on the negative real axis");
  }
}

class WindingCounter {
 public:
  WindingCounter(const ProblemParams& p, const RootSearchOptions& opt) : p_(p), opt_(opt) {}

  int count(const Rectangle& box) {
    const complex corners[4] = {{box.re_lo, box.im_lo},
                                {box.re_hi, box.im_lo},
                                {box.re_hi, box.im_hi},
                                {box.re_lo, box.im_hi}};
    const int n = std::max(1, opt_.nodes_per_side);
    double total = 0.0;
    for (int side = 0; side < 4; ++side) {
      const complex from = corners[side];
      const complex to = corners[(side + 1) % 4];
      complex z0 = from;
      complex q0 = checked_Q(z0);
      for (int k = 1; k <= n; ++k) {
        const complex z1 = from + (to - from) * (static_cast<double>(k) / n);
        const complex q1 = checked_Q(z1);
        total += increment(z0, q0, z1, q1, 0);
        z0 = z1;
        q0 = q1;
      }
    }
    const double winding = total / (2.0 * kPi);
    const double rounded = std::round(winding);
    if (std::abs(winding - rounded) > 0.25) {
      std::ostringstream os;
      os << "argument principle did not close (winding " << winding << ")";
      throw BoundaryDegenerate(os.str());
    }
    return static_cast<int>(rounded);
  }

 private:
  complex checked_Q(complex z) const {
    const complex q = eval_Q(p_, z);
    if (!(std::abs(q) >= opt_.boundary_margin)) {
      std::ostringstream os;
      os << "|Q| = " << std::abs(q) << " below boundary margin at s = " << z.real() << (z.imag() < 0 ? "" : "+")
         << z.imag() << "i";
      throw BoundaryDegenerate(os.str());
    }
    return q;
  }

  double increment(complex z0, complex q0, complex z1, complex q1, int depth) const {
    const double delta = std::arg(q1 / q0);
    if (std::abs(delta) <= kPi / 2) return delta;
    if (depth >= opt_.max_segment_splits) {
      throw BoundaryDegenerate("argument increment unresolved along the boundary");
    }
    const complex zm = 0.5 * (z0 + z1);
    const complex qm = checked_Q(zm);
    return increment(z0, q0, zm, qm, depth + 1) + increment(zm, qm, z1, q1, depth + 1);
  }

  const ProblemParams& p_;
  const RootSearchOptions& opt_;
};

struct NewtonResult {
  complex root;
  double residual;
};

std::optional<NewtonResult> newton(const ProblemParams& p, complex s, int multiplicity, const Rectangle& box,
                                   double tol) {
  const double wr = box.re_hi - box.re_lo;
  const double wi = box.im_hi - box.im_lo;
  const Rectangle fence{box.re_lo - 0.5 * wr, box.re_hi + 0.5 * wr, box.im_lo - 0.5 * wi, box.im_hi + 0.5 * wi};
  for (int it = 0; it < 100; ++it) {
    const complex q = eval_Q(p, s);
    const double res = std::abs(q);
    if (res <= 1e-3 * tol) return NewtonResult{s, res};
    const complex dq = eval_Q_derivative(p, s);
    if (!std::isfinite(std::abs(dq)) || std::abs(dq) == 0.0) return std::nullopt;
    const complex step = static_cast<double>(multiplicity) * q / dq;
    s -= step;
    if (!fence.contains(s)) return std::nullopt;
    if (s.real() < 0.0 && std::abs(s.imag()) < 1e-300) return std::nullopt;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(s))) {
      const double r = std::abs(eval_Q(p, s));
      if (r <= tol) return NewtonResult{s, r};
      return std::nullopt;
    }
  }
  const double r = std::abs(eval_Q(p, s));
  if (r <= tol) return NewtonResult{s, r};
  return std::nullopt;
}

class RootLocator {
 public:
  RootLocator(const ProblemParams& p, const RootSearchOptions& opt, RootReport& report)
      : p_(p), opt_(opt), report_(report), counter_(p, opt) {}

  void search(const Rectangle& box, int count, int depth) {
    if (count <= 0) return;
    const double wr = box.re_hi - box.re_lo;
    const double wi = box.im_hi - box.im_lo;
    const double scale = std::max({1.0, std::abs(box.re_lo), std::abs(box.re_hi), std::abs(box.im_lo),
                                   std::abs(box.im_hi)});
    const bool tiny = std::max(wr, wi) < 1e-9 * scale;

    if (count == 1 || tiny) {
      const complex center(0.5 * (box.re_lo + box.re_hi), 0.5 * (box.im_lo + box.im_hi));
      if (auto r = newton(p_, center, count, box, opt_.root_residual_tol)) {
        const double slack = 1e-9 * scale;
        if (box.contains(r->root, slack)) {
          found_.push_back(LocatedRoot{r->root, r->residual, count});
          return;
        }
      }
      if (tiny) {
        give_up(box);
        return;
      }
    }
    if (depth >= opt_.max_depth) {
      give_up(box);
      return;
    }

    const bool split_re = wr >= wi;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const double shift = (attempt == 0) ? 0.0 : ((attempt % 2 ? 1.0 : -1.0) * 0.0173 * ((attempt + 1) / 2));
      Rectangle lo = box;
      Rectangle hi = box;
      if (split_re) {
        const double cut = box.re_lo + (0.5 + shift) * wr;
        lo.re_hi = cut;
        hi.re_lo = cut;
      } else {
        const double cut = box.im_lo + (0.5 + shift) * wi;
        lo.im_hi = cut;
        hi.im_lo = cut;
      }
      try {
        const int c_lo = counter_.count(lo);
        const int c_hi = counter_.count(hi);
        if (c_lo + c_hi != count) {
          report_.warnings.push_back("count additivity violated during subdivision; refining further");
        }
        search(lo, c_lo, depth + 1);
        search(hi, c_hi, depth + 1);
        return;
      } catch (const BoundaryDegenerate&) {
        continue;
      }
    }
    give_up(box);
  }

  std::vector<LocatedRoot>& found() { return found_; }

 private:
  void give_up(const Rectangle& box) {
    report_.partial = true;
    report_.unresolved.push_back(box);
  }

  const ProblemParams& p_;
  const RootSearchOptions& opt_;
  RootReport& report_;
  WindingCounter counter_;
  std::vector<LocatedRoot> found_;
};

}  // namespace

complex eval_Q(const ProblemParams& p, complex s) {
  return principal_pow(s, p.alpha) - p.a - p.b * std::exp(-s * p.tau);
}

complex eval_Q_derivative(const ProblemParams& p, complex s) {
  if (s == complex(0.0, 0.0)) return {std::numeric_limits<double>::infinity(), 0.0};
  return p.alpha * principal_pow(s, p.alpha) / s + p.b * p.tau * std::exp(-s * p.tau);
}

ComplexRegion::ComplexRegion(Kind kind, Rectangle box) : kind_(kind), box_(box) {}

ComplexRegion ComplexRegion::rectangle(double re_lo, double re_hi, double im_lo, double im_hi) {
  const Rectangle box{re_lo, re_hi, im_lo, im_hi};
  check_box(box);
  return ComplexRegion(Kind::Rectangle, box);
}

ComplexRegion ComplexRegion::right_half_plane_truncated(double re_hi, double im_bound) {
  const Rectangle box{0.0, re_hi, -im_bound, im_bound};
  check_box(box);
  return ComplexRegion(Kind::RightHalfPlaneTruncated, box);
}

std::optional<double> find_nonnegative_real_root(const ProblemParams& p, double search_hi,
                                                 const RootSearchOptions& opt) {
  require_valid(p);
  if (!(search_hi > 0.0)) throw DomainError("search_hi must be positive");
  auto q = [&](double x) { return eval_Q(p, complex(x, 0.0)).real(); };

  double lo = 0.0;
  double hi = search_hi;
  double q_lo = q(lo);
  if (q_lo == 0.0) return 0.0;

  if (p.a + p.b >= 0.0) {
    if (!(q(hi) > 0.0)) {
      std::ostringstream os;
      os << "Q(" << search_hi << ") = " << q(hi) << " <= 0; enlarge search_hi beyond (|a|+|b|)^(1/alpha) = "
         << std::pow(std::abs(p.a) + std::abs(p.b), 1.0 / p.alpha);
      throw BracketingFailed(os.str());
    }
  } else {
    // Q(0) > 0: look for a sign change on a uniform scan.
    constexpr int kScan = 2048;
    bool bracketed = false;
    double prev_x = 0.0;
    for (int i = 1; i <= kScan; ++i) {
      const double x = search_hi * i / kScan;
      const double qx = q(x);
      if (qx == 0.0) return x;
      if (qx < 0.0) {
        lo = prev_x;
        hi = x;
        q_lo = q(lo);
        bracketed = true;
        break;
      }
      prev_x = x;
    }
    if (!bracketed) return std::nullopt;
  }

  const bool lo_negative = q_lo < 0.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double qm = q(mid);
    if (qm == 0.0) return mid;
    if ((qm < 0.0) == lo_negative) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double root = std::abs(q(lo)) <= std::abs(q(hi)) ? lo : hi;
  if (std::abs(q(root)) > opt.root_residual_tol) {
    std::ostringstream os;
    os << "bisection stalled with |Q| = " << std::abs(q(root));
    throw NumericalError(os.str());
  }
  return root;
}

int count_roots(const ProblemParams& p, const Rectangle& box, const RootSearchOptions& opt) {
  require_valid(p);
  check_box(box);
  WindingCounter counter(p, opt);
  return counter.count(box);
}

int count_roots(const ProblemParams& p, const ComplexRegion& region, const RootSearchOptions& opt) {
  return count_roots(p, region.bounds(), opt);
}

int RootReport::located_count() const noexcept {
  int n = 0;
  for (const auto& r : roots) n += r.multiplicity;
  return n;
}

RootReport locate_roots(const ProblemParams& p, const ComplexRegion& region, const RootSearchOptions& opt) {
  RootReport report;
  report.region = region;
  const Rectangle& box = region.bounds();
  report.winding_count = count_roots(p, box, opt);
  if (report.winding_count == 0) return report;

  // Search the closed upper half (slightly extended below the real axis so
  // real roots are interior) and mirror.
  Rectangle search = box;
  bool conjugate_only = false;
  if (box.im_hi <= 0.0) {
    search = Rectangle{box.re_lo, box.re_hi, -box.im_hi, -box.im_lo};
    conjugate_only = true;
  } else if (box.im_lo < 0.0) {
    const double eta = std::min(1e-3, 1e-3 * (box.im_hi - box.im_lo));
    search = Rectangle{box.re_lo, box.re_hi, std::max(box.im_lo, -eta), std::max(box.im_hi, -box.im_lo)};
  }

  RootLocator locator(p, opt, report);
  int search_count = 0;
  for (int attempt = 0;; ++attempt) {
    try {
      search_count = count_roots(p, search, opt);
      break;
    } catch (const BoundaryDegenerate&) {
      if (attempt >= 6 || search.im_lo >= 0.0) throw;
      search.im_lo *= 0.37;
    }
  }
  locator.search(search, search_count, 0);

  const double snap = 1e-10;
  auto push_unique = [&](LocatedRoot r) {
    for (const auto& q : report.roots) {
      if (std::abs(q.value - r.value) <= 1e-8 * std::max(1.0, std::abs(r.value))) return;
    }
    report.roots.push_back(r);
  };
  for (auto r : locator.found()) {
    if (std::abs(r.value.imag()) <= snap * std::max(1.0, std::abs(r.value))) {
      r.value = complex(r.value.real(), 0.0);
      r.residual = std::abs(eval_Q(p, r.value));
    }
    const LocatedRoot mirrored{std::conj(r.value), std::abs(eval_Q(p, std::conj(r.value))), r.multiplicity};
    if (conjugate_only) {
      if (box.contains(mirrored.value)) push_unique(mirrored);
      continue;
    }
    if (box.contains(r.value)) push_unique(r);
    if (r.value.imag() > 0.0 && box.contains(mirrored.value)) push_unique(mirrored);
  }

  std::sort(report.roots.begin(), report.roots.end(), [](const LocatedRoot& x, const LocatedRoot& y) {
    if (x.value.imag() != y.value.imag()) return x.value.imag() < y.value.imag();
    return x.value.real() < y.value.real();
  });

  for (const auto& r : report.roots) {
    if (r.multiplicity > 3 && std::abs(r.value) > 0.0) {
      std::ostringstream os;
      os << "multiplicity estimate " << r.multiplicity << " at a nonzero root; Q, Q', Q'', Q''' cannot all vanish there";
      report.warnings.push_back(os.str());
    }
  }
  if (report.located_count() != report.winding_count) {
    report.partial = true;
    std::ostringstream os;
    os << "located " << report.located_count() << " of " << report.winding_count << " roots";
    report.warnings.push_back(os.str());
  }
  return report;
}

void write_root_csv(std::ostream& os, const RootReport& report) {
  os << "re,im,residual,multiplicity\n";
  for (const auto& r : report.roots) {
    os << format_number(r.value.real()) << ',' << format_number(r.value.imag()) << ','
       << format_number(r.residual) << ',' << r.multiplicity << '\n';
  }
}

Certificate stability_certificate(const ProblemParams& p) {
  Certificate c;
  c.satisfied = satisfies_stability_criterion(p.a, p.b);
  c.disk_center = p.a;
  c.disk_radius = std::abs(p.b);
  c.sector_half_angle = p.alpha * kPi / 2.0;
  // Distance from the real point a to the sector |arg w| <= psi.
  double dist = 0.0;
  if (p.a < 0.0) {
    const double gap = kPi - c.sector_half_angle;
    dist = gap >= kPi / 2 ? -p.a : -p.a * std::sin(gap);
  }
  c.separation = std::max(0.0, dist - c.disk_radius);
  return c;
}

}  // namespace fdde
