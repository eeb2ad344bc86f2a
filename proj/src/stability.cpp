#include "fdde/stability.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fdde/format.hpp"
#include "fdde/parallel.hpp"

namespace fdde {

namespace {

struct PairMax {
  double value = 0.0;
  double x1 = 0.0, y1 = 0.0, x2 = 0.0, y2 = 0.0;
};

double quotient(const Nonlinearity& f, double x1, double y1, double x2, double y2) {
  const double den = std::max(std::abs(x1 - x2), std::abs(y1 - y2));
  if (!(den > 0.0)) return 0.0;
  const double q = std::abs(f(x1, y1) - f(x2, y2)) / den;
  return std::isfinite(q) ? q : 0.0;
}

}  // namespace

double estimate_lipschitz_modulus(const Nonlinearity& f, double rho, const LipschitzOptions& opt) {
  f.require_trivial_solution();
  if (!(rho > 0.0) || !std::isfinite(rho)) throw DomainError("Lipschitz modulus: rho must be positive");
  if (opt.grid_points < 2 || opt.random_pairs < 0) throw DomainError("Lipschitz modulus: invalid sampling");
  if (f.is_zero()) return 0.0;

  const std::size_t g = static_cast<std::size_t>(opt.grid_points);
  std::vector<double> u(g);
  for (std::size_t i = 0; i < g; ++i) u[i] = -rho + 2.0 * rho * static_cast<double>(i) / static_cast<double>(g - 1);
  const std::size_t nodes = g * g;
  std::vector<double> table(nodes);
  for (std::size_t k = 0; k < nodes; ++k) table[k] = f(u[k / g], u[k % g]);

  // Every unordered pair of grid nodes; per-row maxima reduced in index order.
  std::vector<PairMax> rows(nodes);
  parallel_for(nodes, [&](std::size_t pi) {
    PairMax best;
    const double x1 = u[pi / g];
    const double y1 = u[pi % g];
    for (std::size_t qi = pi + 1; qi < nodes; ++qi) {
      const double x2 = u[qi / g];
      const double y2 = u[qi % g];
      const double den = std::max(std::abs(x1 - x2), std::abs(y1 - y2));
      const double q = std::abs(table[pi] - table[qi]) / den;
      if (std::isfinite(q) && q > best.value) best = {q, x1, y1, x2, y2};
    }
    rows[pi] = best;
  }, 16);
  PairMax best;
  for (const auto& r : rows) {
    if (r.value > best.value) best = r;
  }
  if (best.value == 0.0) best = {0.0, 0.0, 0.0, u[1], u[1]};

  // Seeded refinement: uniform pairs, pairs around the maximizer, and
  // near-diagonal pairs probing the local slope there.
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> sym(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double cell = 2.0 * rho / static_cast<double>(g - 1);
  auto clip = [rho](double v) { return std::clamp(v, -rho, rho); };
  for (int r = 0; r < opt.random_pairs; ++r) {
    const double d[6] = {sym(rng), sym(rng), sym(rng), sym(rng), unit(rng), unit(rng)};
    double x1, y1, x2, y2;
    switch (r % 3) {
      case 0:
        x1 = rho * d[0];
        y1 = rho * d[1];
        x2 = rho * d[2];
        y2 = rho * d[3];
        break;
      case 1: {
        const double s = cell * std::pow(1e-6, d[4]);
        x1 = clip(best.x1 + s * d[0]);
        y1 = clip(best.y1 + s * d[1]);
        x2 = clip(best.x2 + s * d[2]);
        y2 = clip(best.y2 + s * d[3]);
        break;
      }
      default: {
        const double s = cell * d[5];
        x1 = clip(best.x1 + s * d[0]);
        y1 = clip(best.y1 + s * d[1]);
        const double step = rho * std::pow(10.0, -8.0 + 6.0 * d[4]);
        const double norm = std::max({std::abs(d[2]), std::abs(d[3]), 1e-300});
        x2 = clip(x1 + step * d[2] / norm);
        y2 = clip(y1 + step * d[3] / norm);
        break;
      }
    }
    const double q = quotient(f, x1, y1, x2, y2);
    if (q > best.value) best = {q, x1, y1, x2, y2};
  }
  return best.value;
}

LipschitzModulus lipschitz_profile(const Nonlinearity& f, std::vector<double> rho_grid, const LipschitzOptions& opt) {
  std::sort(rho_grid.begin(), rho_grid.end());
  LipschitzModulus out;
  out.rho_grid = rho_grid;
  out.sampling = opt;
  double running = 0.0;
  for (double rho : rho_grid) {
    running = std::max(running, estimate_lipschitz_modulus(f, rho, opt));
    out.ell_values.push_back(running);
  }
  return out;
}

// ---------------------------------------------------------------------------

KernelConstants compute_constants(const ProblemParams& p, const ContourSpec& contour) {
  require_valid(p);
  if (!satisfies_stability_criterion(p.a, p.b)) throw DomainError("compute_constants requires a <= b < -a");
  const double scale = std::max(1.0, p.tau);
  const double t_sup = 100.0 * scale;

  // Dense near the origin and the first delay intervals, coarser later.
  std::vector<double> grid;
  for (int i = 0; i <= 500; ++i) grid.push_back(0.02 * scale * i);
  for (int i = 1; i <= 450; ++i) grid.push_back(10.0 * scale + 0.2 * scale * i);
  const DelayedMittagLeffler e1(p, 1.0, contour);
  const auto values = e1.evaluate(grid);
  double sup = 0.0;
  for (double v : values) sup = std::max(sup, std::abs(v));

  std::vector<double> profile_grid;
  for (int i = 0; i <= 40; ++i) profile_grid.push_back(std::pow(t_sup, i / 40.0));
  const auto prof1 = decay_profile(p, KernelBeta::One, profile_grid, contour);
  const auto profa = decay_profile(p, KernelBeta::Alpha, profile_grid, contour);

  KernelConstants out;
  for (const auto& pt : prof1) out.compensated_E1 = std::max(out.compensated_E1, pt.compensated);
  for (const auto& pt : profa) out.compensated_Ealpha = std::max(out.compensated_Ealpha, pt.compensated);
  // |E_{alpha,1}(t)| <= C t^-alpha beyond the grid.
  out.sup_E1 = std::max(sup, out.compensated_E1 / std::pow(t_sup, p.alpha));

  const L1Norm l1 = kernel_l1_norm(p, 0.0, 1e-10, contour);
  out.l1_Ealpha = l1.value;
  out.l1_error = l1.error_estimate;
  out.C_empirical = std::max({out.compensated_E1, out.compensated_Ealpha, out.l1_Ealpha});
  return out;
}

const char* to_string(Verdict v) noexcept {
  return v == Verdict::CertifiedAsymptoticallyStable ? "CertifiedAsymptoticallyStable" : "Inconclusive";
}

void write_verdict(std::ostream& os, const StabilityVerdict& v) {
  os << "linear_ok=" << (v.linear_ok ? "true" : "false") << '\n';
  os << "h2_ok=" << (v.h2_ok ? "true" : "false") << '\n';
  os << "epsilon_star=" << format_number(v.epsilon_star) << '\n';
  os << "q=" << format_number(v.q) << '\n';
  os << "C_empirical=" << format_number(v.C_empirical) << '\n';
  os << "delta=" << format_number(v.delta) << '\n';
  os << "verdict=" << to_string(v.verdict) << '\n';
  if (v.verdict == Verdict::CertifiedAsymptoticallyStable) os << "qualifier=" << kVerdictQualifier << '\n';
}

StabilityVerdict certify(const ProblemParams& p, const Nonlinearity& f, const CertifyOptions& opt) {
  require_valid(p);
  f.require_trivial_solution();
  if (opt.epsilon_levels < 1) throw DomainError("certify: epsilon_levels must be >= 1");

  StabilityVerdict v;
  v.linear_ok = satisfies_stability_criterion(p.a, p.b);
  for (int k = 0; k < opt.epsilon_levels; ++k) {
    const double eps = std::ldexp(1.0, -k);
    v.epsilon_grid.push_back(eps);
    v.ell_grid.push_back(estimate_lipschitz_modulus(f, eps, opt.lipschitz));
  }
  v.h2_ok = v.ell_grid.back() <= opt.h2_tol;
  if (!v.linear_ok) return v;

  v.constants = compute_constants(p, opt.contour);
  v.C_empirical = v.constants->C_empirical;
  if (!v.h2_ok) return v;

  for (std::size_t k = 0; k < v.epsilon_grid.size(); ++k) {
    const double q = v.ell_grid[k] * v.C_empirical;
    if (q < 1.0) {
      v.epsilon_star = v.epsilon_grid[k];
      v.ell_epsilon_star = v.ell_grid[k];
      v.q = q;
      const double denom = v.constants->sup_E1 + std::abs(p.b) * v.constants->l1_Ealpha + 1.0;
      v.delta = (1.0 - q) * v.epsilon_star / denom;
      v.verdict = Verdict::CertifiedAsymptoticallyStable;
      break;
    }
  }
  return v;
}

// ---------------------------------------------------------------------------

bool AttractivityReport::all_decayed() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const AttractivityEntry& e) { return e.decayed; });
}

AttractivityReport empirical_attractivity(const ProblemParams& p, const Nonlinearity& f,
                                          const std::vector<HistoryFunction>& phis, const SolveConfig& cfg,
                                          double tol, double tail_fraction) {
  require_valid(p);
  cfg.validate(p.tau);
  AttractivityReport report;
  report.tail_start = tail_fraction * cfg.t_end;
  report.tolerance = tol;
  report.entries.resize(phis.size());
  parallel_for(phis.size(), [&](std::size_t i) {
    AttractivityEntry& e = report.entries[i];
    try {
      const Trajectory traj = solve_abm(p, f, phis[i], cfg);
      for (std::size_t k = traj.origin(); k < traj.size(); ++k) {
        if (traj.time(k) >= report.tail_start - 1e-12) e.tail_sup = std::max(e.tail_sup, std::abs(traj.x[k]));
      }
      e.decayed = e.tail_sup < tol;
    } catch (const SolutionBlowup& err) {
      e.blowup = true;
      e.blowup_time = err.time();
      e.message = err.what();
      e.decayed = false;
    }
  });
  return report;
}

}  // namespace fdde
