#include "fdde/kernel.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "fdde/format.hpp"
#include "fdde/parallel.hpp"

namespace fdde {

namespace {

using cplx = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr int kPanelNodes = 32;

using Gauss = boost::math::quadrature::gauss<double, kPanelNodes>;

// Gauss-Legendre nodes and weights on [-1, 1], expanded from Boost's half table.
struct PanelRule {
  std::vector<double> x;
  std::vector<double> w;
  PanelRule() {
    const auto& abscissa = Gauss::abscissa();
    const auto& weights = Gauss::weights();
    for (std::size_t i = abscissa.size(); i-- > 0;) {
      if (abscissa[i] == 0.0) continue;
      x.push_back(-abscissa[i]);
      w.push_back(weights[i]);
    }
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      x.push_back(abscissa[i]);
      w.push_back(weights[i]);
    }
  }
};

const PanelRule& panel_rule() {
  static const PanelRule rule;
  return rule;
}

}  // namespace

struct DelayedMittagLeffler::NodeSet {
  struct Node {
    cplx sigma;
    cplx log_sigma;
    cplx sigma_alpha;
    cplx wd;  // quadrature weight times d sigma / d parameter
  };
  double mu = 0.0;
  std::vector<Node> nodes;
  std::size_t arc_nodes = 0;
};

void ContourSpec::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw DomainError("contour: mu must be positive");
  if (!(theta > kPi / 2 && theta < kPi)) throw DomainError("contour: theta must lie in (pi/2, pi)");
  if (!(truncation_tol > 0.0) || max_ray_panels < 1) throw DomainError("contour: invalid truncation settings");
}

double beta_value(KernelBeta beta, double alpha) noexcept { return beta == KernelBeta::One ? 1.0 : alpha; }

const char* to_string(KernelBeta beta) noexcept { return beta == KernelBeta::One ? "1" : "alpha"; }

DelayedMittagLeffler::DelayedMittagLeffler(const ProblemParams& p, double beta, ContourSpec contour)
    : p_(p), beta_(beta), contour_(contour) {
  require_valid(p_);
  contour_.validate();
  if (!(beta_ > 0.0) || !std::isfinite(beta_)) throw DomainError("kernel: beta must be positive");
}

double DelayedMittagLeffler::radius_for(int n, double z) const {
  if (!contour_.adapt_radius) return contour_.mu;
  const double saddle = std::max(contour_.mu, p_.alpha * n + beta_);
  if (z <= 0.0) return saddle;
  const double pole = std::pow(z, 1.0 / p_.alpha);
  return pole + std::max(1.0, saddle);
}

std::shared_ptr<const DelayedMittagLeffler::NodeSet> DelayedMittagLeffler::nodes_for(int n, double z) const {
  if (z <= 0.0) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (static_cast<std::size_t>(n) < cache_.size() && cache_[n]) return cache_[n];
  }

  const double mu = radius_for(n, z);
  const double theta = contour_.theta;
  const double alpha = p_.alpha;
  const auto& rule = panel_rule();
  auto set = std::make_shared<NodeSet>();
  set->mu = mu;

  auto push = [&](cplx sigma, cplx wd) {
    const cplx ls = std::log(sigma);
    set->nodes.push_back({sigma, ls, std::exp(alpha * ls), wd});
  };

  // Arc sigma = mu e^{i phi}, phi in [0, theta].
  double panel_len = std::max(2.0, 2.0 * std::sqrt(mu));
  if (z > 0.0) {
    const double gap = mu - std::pow(z, 1.0 / alpha);
    panel_len = std::min(panel_len, std::max(gap, 1e-3));
  }
  const int arc_panels = std::max(1, static_cast<int>(std::ceil(mu * theta / panel_len)));
  const double dphi = theta / arc_panels;
  for (int k = 0; k < arc_panels; ++k) {
    const double mid = (k + 0.5) * dphi;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      const double phi = mid + 0.5 * dphi * rule.x[j];
      const cplx sigma = std::polar(mu, phi);
      push(sigma, cplx(0.0, 1.0) * sigma * (0.5 * dphi * rule.w[j]));
    }
  }
  set->arc_nodes = set->nodes.size();

  // Ray sigma = r e^{i theta}, r >= mu, long enough for e^{r cos theta} to fall by e^-92.
  const cplx dir = std::polar(1.0, theta);
  const double ray_len = 16.0 / (std::abs(std::cos(theta)) + std::sin(theta));
  const int ray_panels =
      std::min(contour_.max_ray_panels,
               std::max(1, static_cast<int>(std::ceil(92.0 / std::abs(std::cos(theta)) / ray_len))));
  for (int k = 0; k < ray_panels; ++k) {
    const double mid = mu + (k + 0.5) * ray_len;
    for (std::size_t j = 0; j < rule.x.size(); ++j) {
      const double r = mid + 0.5 * ray_len * rule.x[j];
      push(r * dir, dir * (0.5 * ray_len * rule.w[j]));
    }
  }

  if (z <= 0.0) {
    std::lock_guard<std::mutex> lock(mutex_);
    if (cache_.size() <= static_cast<std::size_t>(n)) cache_.resize(n + 1);
    if (!cache_[n]) cache_[n] = set;
    return cache_[n];
  }
  return set;
}

cplx DelayedMittagLeffler::term_integral(int n, double z, double log_scale, bool full) const {
  const auto set = nodes_for(n, z);
  if (z > 0.0 && !contour_.adapt_radius) {
    const double pole = std::pow(z, 1.0 / p_.alpha);
    if (set->mu <= pole) {
      std::ostringstream os;
      os << "contour arc radius " << set->mu << " leaves the pole " << pole << " to its right";
      throw ContourDegenerate(os.str());
    }
  }
  const double expo = p_.alpha - beta_;
  const double order = n + 1.0;
  const auto& nodes = set->nodes;

  auto value = [&](const NodeSet::Node& nd, bool conjugate) {
    const cplx sa = conjugate ? std::conj(nd.sigma_alpha) : nd.sigma_alpha;
    const cplx diff = sa - z;
    if (std::abs(diff) < contour_.contour_margin) {
      throw ContourDegenerate("contour passes within contour_margin of a pole");
    }
    const cplx ls = conjugate ? std::conj(nd.log_sigma) : nd.log_sigma;
    const cplx s = conjugate ? std::conj(nd.sigma) : nd.sigma;
    return std::exp(expo * ls + s - order * std::log(diff) + log_scale);
  };

  cplx upper = 0.0;
  cplx lower = 0.0;
  double peak = 0.0;
  for (std::size_t start = 0; start < nodes.size(); start += kPanelNodes) {
    cplx panel = 0.0;
    cplx panel_lower = 0.0;
    double panel_peak = 0.0;
    for (std::size_t j = start; j < start + kPanelNodes; ++j) {
      const cplx f = value(nodes[j], false);
      const cplx c = f * nodes[j].wd;
      panel += c;
      panel_peak = std::max(panel_peak, std::abs(c));
      if (full) panel_lower -= value(nodes[j], true) * std::conj(nodes[j].wd);
    }
    upper += panel;
    lower += panel_lower;
    peak = std::max(peak, panel_peak);
    if (start >= set->arc_nodes && panel_peak < contour_.truncation_tol * peak) break;
  }
  if (full) return (upper + lower) / cplx(0.0, 2.0 * kPi);
  return cplx(upper.imag() / kPi, 0.0);
}

double DelayedMittagLeffler::operator()(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    std::ostringstream os;
    os << "kernel evaluated at t = " << t;
    throw DomainError(os.str());
  }
  if (t == 0.0) {
    if (beta_ == 1.0) return 1.0;
    if (beta_ > 1.0) return 0.0;
    throw DomainError("kernel with beta < 1 is singular at t = 0");
  }
  return sum_terms(t, false).real();
}

cplx DelayedMittagLeffler::full_contour(double t) const {
  if (!(t > 0.0) || !std::isfinite(t)) throw DomainError("kernel requires t > 0");
  return sum_terms(t, true);
}

cplx DelayedMittagLeffler::sum_terms(double t, bool full) const {
  const double log_b = p_.b != 0.0 ? std::log(std::abs(p_.b)) : 0.0;
  cplx sum = 0.0;
  for (int n = 0; n * p_.tau < t; ++n) {
    if (n > 0 && p_.b == 0.0) break;
    const double u = t - n * p_.tau;
    const double z = p_.a * std::pow(u, p_.alpha);
    const double log_scale = n * log_b + (p_.alpha * n + beta_ - 1.0) * std::log(u);
    const cplx term = term_integral(n, z, log_scale, full);
    sum += (p_.b < 0.0 && (n % 2 == 1)) ? -term : term;
  }
  return sum;
}

std::vector<double> DelayedMittagLeffler::evaluate(const std::vector<double>& ts) const {
  std::vector<double> out(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) { out[i] = (*this)(ts[i]); }, 8);
  return out;
}

double eval_kernel(const KernelQuery& q, const ContourSpec& contour) {
  if (!(q.t > 0.0)) throw DomainError("eval_kernel requires t > 0");
  const DelayedMittagLeffler kernel(q.p, beta_value(q.beta, q.p.alpha), contour);
  return kernel(q.t);
}

std::vector<DecayPoint> decay_profile(const ProblemParams& p, KernelBeta beta, const std::vector<double>& t_grid,
                                      const ContourSpec& contour) {
  require_valid(p);
  if (!satisfies_stability_criterion(p.a, p.b)) throw DomainError("decay_profile requires a <= b < -a");
  for (double t : t_grid) {
    if (!(t >= 1.0)) throw DomainError("decay_profile grid must lie in [1, inf)");
  }
  const DelayedMittagLeffler kernel(p, beta_value(beta, p.alpha), contour);
  const double rate = beta == KernelBeta::One ? p.alpha : p.alpha + 1.0;
  const auto values = kernel.evaluate(t_grid);
  std::vector<DecayPoint> out;
  out.reserve(t_grid.size());
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    const double mag = std::abs(values[i]);
    out.push_back({t_grid[i], mag, mag * std::pow(t_grid[i], rate)});
  }
  return out;
}

void write_decay_csv(std::ostream& os, const std::vector<DecayPoint>& profile) {
  os << "t,kernel_abs,compensated\n";
  for (const auto& pt : profile) {
    os << format_number(pt.t) << ',' << format_number(pt.kernel_abs) << ',' << format_number(pt.compensated)
       << '\n';
  }
}

L1Norm kernel_l1_norm(const ProblemParams& p, double split_point, double quad_tol, const ContourSpec& contour) {
  require_valid(p);
  if (!satisfies_stability_criterion(p.a, p.b)) throw DomainError("kernel_l1_norm requires a <= b < -a");
  if (!(quad_tol > 0.0)) throw DomainError("kernel_l1_norm: quad_tol must be positive");
  const double split = split_point > 0.0 ? split_point : 50.0 * p.tau;
  const DelayedMittagLeffler kernel(p, p.alpha, contour);
  const double alpha = p.alpha;

  // One adaptive panel per delay interval; s = lo + len w^(1/alpha) absorbs the
  // (s - n tau)^(k alpha - 1) endpoint behaviour.
  std::vector<double> starts;
  for (int n = 0; n * p.tau < split; ++n) starts.push_back(n * p.tau);
  std::vector<double> values(starts.size());
  std::vector<double> errors(starts.size());
  parallel_for(starts.size(), [&](std::size_t i) {
    const double lo = starts[i];
    const double len = std::min(split, lo + p.tau) - lo;
    auto integrand = [&](double w) {
      if (w <= 0.0) return 0.0;
      const double s = lo + len * std::pow(w, 1.0 / alpha);
      if (!(s > 0.0)) return 0.0;
      return std::abs(kernel(s)) * len / alpha * std::pow(w, 1.0 / alpha - 1.0);
    };
    double err = 0.0;
    values[i] = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, 0.0, 1.0, 12, quad_tol,
                                                                              &err);
    errors[i] = err;
  });

  L1Norm out;
  out.split_point = split;
  double quad = 0.0;
  double quad_err = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    quad += values[i];
    quad_err += errors[i];
  }

  const double probes[3] = {split, 2.0 * split, 4.0 * split};
  double comp[3];
  for (int i = 0; i < 3; ++i) {
    comp[i] = std::abs(kernel(probes[i])) * std::pow(probes[i], alpha + 1.0);
    if (!std::isfinite(comp[i])) throw TailEstimateFailed("non-finite kernel value in the tail");
  }
  const double c_max = *std::max_element(comp, comp + 3);
  const double c_min = *std::min_element(comp, comp + 3);
  if (comp[2] > 2.0 * std::max(comp[0], comp[1])) {
    std::ostringstream os;
    os << "compensated tail values grow: " << comp[0] << ", " << comp[1] << ", " << comp[2];
    throw TailEstimateFailed(os.str());
  }
  const double scale = 1.0 / (alpha * std::pow(split, alpha));
  out.tail_constant = c_max;
  out.tail = c_max * scale;
  out.value = quad + out.tail;
  out.error_estimate = quad_err + (c_max - c_min) * scale;
  if (!std::isfinite(out.value)) throw TailEstimateFailed("non-finite L1 norm");
  return out;
}

void write_l1_csv(std::ostream& os, const L1Norm& norm) {
  os << "value,error_estimate,split_point\n";
  os << format_number(norm.value) << ',' << format_number(norm.error_estimate) << ','
     << format_number(norm.split_point) << '\n';
}

}  // namespace fdde
