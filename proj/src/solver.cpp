#include "fdde/solver.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>
#include <vector>

#include "fdde/format.hpp"
#include "fdde/parallel.hpp"

namespace fdde {

std::size_t SolveConfig::validate(double tau) const {
  if (!(h > 0.0) || !std::isfinite(h)) throw DomainError("solver: h must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw DomainError("solver: t_end must be positive");
  if (corrector_iters < 1) throw DomainError("solver: corrector_iters must be >= 1");
  if (picard_max_iters < 1 || !(picard_tol > 0.0)) throw DomainError("solver: invalid Picard settings");
  if (!(overflow_guard > 0.0)) throw DomainError("solver: overflow_guard must be positive");
  const double ratio = tau / h;
  const double m = std::round(ratio);
  if (m < 1.0 || std::abs(ratio - m) > 1e-9 * std::max(1.0, ratio)) {
    std::ostringstream os;
    os << "solver: tau = " << tau << " is not an integer multiple of h = " << h;
    throw DomainError(os.str());
  }
  return static_cast<std::size_t>(m);
}

std::size_t SolveConfig::steps() const {
  return static_cast<std::size_t>(std::ceil(t_end / h - 1e-9));
}

namespace {

Trajectory make_trajectory(const ProblemParams& p, const HistoryFunction& phi, const SolveConfig& cfg,
                           Scheme scheme) {
  if (std::abs(phi.tau() - p.tau) > 1e-12 * p.tau) throw DomainError("history delay differs from tau");
  Trajectory traj;
  traj.tau = p.tau;
  traj.h = cfg.h;
  traj.delay_steps = cfg.validate(p.tau);
  traj.scheme = scheme;
  traj.x.assign(traj.delay_steps + cfg.steps() + 1, 0.0);
  for (std::size_t j = 0; j <= traj.delay_steps; ++j) traj.x[j] = phi(traj.time(j));
  traj.x[traj.delay_steps] = phi(0.0);
  return traj;
}

}  // namespace

Trajectory solve_abm(const ProblemParams& p, const Nonlinearity& f, const HistoryFunction& phi,
                     const SolveConfig& cfg) {
  require_valid(p);
  Trajectory traj = make_trajectory(p, phi, cfg, Scheme::ABM);
  const std::size_t m = traj.delay_steps;
  const std::size_t n = cfg.steps();
  const double alpha = p.alpha;
  const double y0 = traj.x[m];

  // y_j = x(t_j) = traj.x[j + m]; its delayed value is traj.x[j].
  std::vector<double> g(n + 1);
  auto rhs = [&](double y, double delayed) { return p.a * y + p.b * delayed + f(y, delayed); };
  g[0] = rhs(y0, traj.x[0]);

  std::vector<double> bw(n + 1);
  std::vector<double> cw(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double di = static_cast<double>(i);
    bw[i] = std::pow(di + 1.0, alpha) - std::pow(di, alpha);
    cw[i] = std::pow(di + 2.0, alpha + 1.0) + std::pow(di, alpha + 1.0) - 2.0 * std::pow(di + 1.0, alpha + 1.0);
  }
  const double pred_scale = std::pow(cfg.h, alpha) / std::tgamma(alpha + 1.0);
  const double corr_scale = std::pow(cfg.h, alpha) / std::tgamma(alpha + 2.0);

  for (std::size_t k = 0; k < n; ++k) {
    double pred_sum = 0.0;
    for (std::size_t j = 0; j <= k; ++j) pred_sum += bw[k - j] * g[j];
    const double dk = static_cast<double>(k);
    double corr_sum = (std::pow(dk, alpha + 1.0) - (dk - alpha) * std::pow(dk + 1.0, alpha)) * g[0];
    for (std::size_t j = 1; j <= k; ++j) corr_sum += cw[k - j] * g[j];

    const double delayed = traj.x[k + 1];
    double y = y0 + pred_scale * pred_sum;
    for (int it = 0; it < cfg.corrector_iters; ++it) {
      y = y0 + corr_scale * (rhs(y, delayed) + corr_sum);
    }
    const double t = static_cast<double>(k + 1) * cfg.h;
    if (!std::isfinite(y) || std::abs(y) > cfg.overflow_guard) {
      std::ostringstream os;
      os << "ABM solution exceeded " << cfg.overflow_guard << " at t = " << t;
      throw SolutionBlowup(t, os.str());
    }
    traj.x[k + 1 + m] = y;
    g[k + 1] = rhs(y, delayed);
  }
  return traj;
}

// ---------------------------------------------------------------------------

VariationOfConstants::VariationOfConstants(const ProblemParams& p, const HistoryFunction& phi,
                                           const ContourSpec& contour)
    : p_(p),
      phi_(phi),
      e1_(p, 1.0, contour),
      ea_(p, p.alpha, contour),
      r1_(p, p.alpha + 1.0, contour),
      r2_(p, p.alpha + 2.0, contour) {
  if (std::abs(phi.tau() - p.tau) > 1e-12 * p.tau) throw DomainError("history delay differs from tau");
}

double VariationOfConstants::history_term(double t) const {
  if (p_.b == 0.0) return 0.0;
  // b int_{max(0, t - tau)}^{t} E_{alpha,alpha}(v) phi(t - tau - v) dv, split where
  // the kernel has its endpoint singularities v = n tau.
  const double lo = std::max(0.0, t - p_.tau);
  std::vector<double> cuts{lo};
  for (int n = 1; n * p_.tau < t; ++n) {
    if (n * p_.tau > lo) cuts.push_back(n * p_.tau);
  }
  cuts.push_back(t);
  const double alpha = p_.alpha;
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c = cuts[i];
    const double len = cuts[i + 1] - c;
    if (!(len > 0.0)) continue;
    auto integrand = [&](double w) {
      if (w <= 0.0) return 0.0;
      const double v = c + len * std::pow(w, 1.0 / alpha);
      if (!(v > 0.0)) return 0.0;
      const double s = std::clamp(t - p_.tau - v, -p_.tau, 0.0);
      return ea_(v) * phi_(s) * len / alpha * std::pow(w, 1.0 / alpha - 1.0);
    };
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 15, 1e-12);
  }
  return p_.b * total;
}

double VariationOfConstants::forcing_term(double t, const ForcingSamples& forcing) const {
  const Trajectory& traj = forcing.trajectory;
  const std::size_t m = traj.delay_steps;
  if (std::abs(traj.tau - p_.tau) > 1e-12 * p_.tau) throw DomainError("forcing trajectory has a different tau");
  if (t > traj.t_end() + 1e-9 * traj.h) throw DomainError("forcing trajectory does not cover t");

  auto g = [&](std::size_t j) { return forcing.f(traj.x[j + m], traj.x[j]); };
  double total = 0.0;
  for (std::size_t j = 0;; ++j) {
    const double c = static_cast<double>(j) * traj.h;
    if (c >= t) break;
    const double d_node = static_cast<double>(j + 1) * traj.h;
    const double d = std::min(d_node, t);
    const double w = d - c;
    const double a = t - d;
    const double bnd = t - c;
    const double i_right = r2_(bnd) - r2_(a) - w * r1_(a);
    const double i_left = w * (r1_(bnd) - r1_(a)) - i_right;
    // Linear interpolant of g on [c, d_node] evaluated through its end values on [c, d].
    const double g_left = g(j);
    const double g_node = g(j + 1);
    const double g_right = g_left + (g_node - g_left) * (w / traj.h);
    total += (g_left * i_left + g_right * i_right) / w;
  }
  return total;
}

double VariationOfConstants::operator()(double t, const std::optional<ForcingSamples>& forcing) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("eval_varconst requires t > 0");
  double value = phi_(0.0) * e1_(t) + history_term(t);
  if (forcing) value += forcing_term(t, *forcing);
  return value;
}

double eval_varconst(const ProblemParams& p, const HistoryFunction& phi, const std::optional<ForcingSamples>& forcing,
                     double t, const ContourSpec& contour) {
  require_valid(p);
  const VariationOfConstants formula(p, phi, contour);
  return formula(t, forcing);
}

// ---------------------------------------------------------------------------

Trajectory solve_picard(const ProblemParams& p, const Nonlinearity& f, const HistoryFunction& phi,
                        const SolveConfig& cfg) {
  require_valid(p);
  Trajectory traj = make_trajectory(p, phi, cfg, Scheme::Picard);
  const std::size_t m = traj.delay_steps;
  const std::size_t n = cfg.steps();
  const double h = cfg.h;

  // Kernels on v_i = i h.
  std::vector<double> grid(n + 1);
  for (std::size_t i = 0; i <= n; ++i) grid[i] = static_cast<double>(i) * h;
  const DelayedMittagLeffler e1(p, 1.0, cfg.contour);
  const DelayedMittagLeffler r1(p, p.alpha + 1.0, cfg.contour);
  const DelayedMittagLeffler r2(p, p.alpha + 2.0, cfg.contour);
  const auto E1 = e1.evaluate(grid);
  const auto R1 = r1.evaluate(grid);
  const auto R2 = r2.evaluate(grid);

  // Product-integration weights over [i h, (i + 1) h] for the left / right node.
  std::vector<double> wl(n);
  std::vector<double> wr(n);
  for (std::size_t i = 0; i < n; ++i) {
    wl[i] = (h * R1[i + 1] - R2[i + 1] + R2[i]) / h;
    wr[i] = (R2[i + 1] - R2[i] - h * R1[i]) / h;
  }

  // Linear part phi(0) E1 + b * history convolution.
  const double phi0 = traj.x[m];
  std::vector<double> linear(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    double hist = 0.0;
    const std::size_t top = std::min(k, m);
    for (std::size_t j = 0; j < top; ++j) {
      hist += wl[k - j - 1] * traj.x[j] + wr[k - j - 1] * traj.x[j + 1];
    }
    linear[k] = phi0 * E1[k] + p.b * hist;
  }

  std::vector<double> xi(n + 1, phi0);
  std::vector<double> next(n + 1);
  std::vector<double> g(n + 1);
  // Delayed value of xi at t_j: history for j <= m, xi[j - m] afterwards.
  auto delayed = [&](const std::vector<double>& v, std::size_t j) { return j < m ? traj.x[j] : v[j - m]; };

  for (int iter = 0; iter < cfg.picard_max_iters; ++iter) {
    for (std::size_t j = 0; j <= n; ++j) g[j] = f(xi[j], delayed(xi, j));
    double diff = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      double conv = 0.0;
      for (std::size_t j = 0; j < k; ++j) conv += wl[k - j - 1] * g[j] + wr[k - j - 1] * g[j + 1];
      next[k] = linear[k] + conv;
      if (!std::isfinite(next[k]) || std::abs(next[k]) > cfg.overflow_guard) {
        std::ostringstream os;
        os << "Picard iterate " << iter + 1 << " overflowed at t = " << grid[k];
        throw PicardDiverged(os.str());
      }
      diff = std::max(diff, std::abs(next[k] - xi[k]));
    }
    xi.swap(next);
    if (diff < cfg.picard_tol) {
      traj.iterations = iter;
      std::copy(xi.begin(), xi.end(), traj.x.begin() + static_cast<std::ptrdiff_t>(m));
      return traj;
    }
  }
  std::ostringstream os;
  os << "Picard iteration did not converge within " << cfg.picard_max_iters << " sweeps";
  throw PicardDiverged(os.str());
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t,x,scheme,h\n";
  const std::string scheme = to_string(traj.scheme);
  const std::string h = format_number(traj.h);
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    os << format_number(traj.time(k)) << ',' << format_number(traj.x[k]) << ',' << scheme << ',' << h << '\n';
  }
}

}  // namespace fdde
