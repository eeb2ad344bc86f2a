#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fdde/mittag_leffler.hpp"
#include "fdde/stability.hpp"

using namespace fdde;

namespace {

const ProblemParams kBench{0.5, -5.0, 0.5, 1.0};

// All pairs of an n^2 grid on [-rho, rho]^2 (n^4 quotients).
double grid_lipschitz(const Nonlinearity& f, double rho, int n) {
  std::vector<double> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = -rho + 2.0 * rho * i / (n - 1);
  double best = 0.0;
  for (double x : xs)
    for (double y : xs)
      for (double u : xs)
        for (double v : xs) {
          const double d = std::max(std::abs(x - u), std::abs(y - v));
          if (d > 0.0) best = std::max(best, std::abs(f(x, y) - f(u, v)) / d);
        }
  return best;
}

}  // namespace

TEST_CASE("Lipschitz modulus examples") {
  const auto f = Nonlinearity::example51();
  const double ell = estimate_lipschitz_modulus(f, 0.1);
  CHECK(ell >= 0.19);
  CHECK(ell <= 0.24);
  CHECK(ell <= 2 * 0.1 + 3 * 0.01 + 1e-12);
  CHECK(ell >= grid_lipschitz(f, 0.1, 21) - 1e-12);

  CHECK(estimate_lipschitz_modulus(Nonlinearity::zero(), 0.5) == 0.0);
  const Nonlinearity id([](double x, double) { return x; }, "x");
  CHECK(estimate_lipschitz_modulus(id, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  const Nonlinearity shifted([](double x, double) { return x + 1.0; }, "x+1");
  CHECK_THROWS_AS((void)estimate_lipschitz_modulus(shifted, 1.0), HypothesisViolated);
  CHECK_THROWS_AS((void)estimate_lipschitz_modulus(f, 0.0), DomainError);
}

TEST_CASE("Lipschitz estimate is monotone in rho and in the sample count") {
  const auto f = Nonlinearity::polynomial({{1.0, 2, 0}, {-0.5, 1, 2}, {0.3, 0, 3}});
  const auto prof = lipschitz_profile(f, {0.05, 0.1, 0.2, 0.4, 0.8});
  REQUIRE(prof.ell_values.size() == 5);
  for (std::size_t i = 1; i < prof.ell_values.size(); ++i) CHECK(prof.ell_values[i] >= prof.ell_values[i - 1]);
  for (double v : prof.ell_values) CHECK(v >= 0.0);

  double prev = 0.0;
  for (int n : {0, 10, 100, 1000, 10000}) {
    LipschitzOptions opt;
    opt.random_pairs = n;
    const double v = estimate_lipschitz_modulus(f, 0.3, opt);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("kernel constants") {
  const auto classical = compute_constants({0.5, -5.0, 0.0, 1.0});
  CHECK(classical.sup_E1 == 1.0);
  CHECK(classical.l1_Ealpha == doctest::Approx(0.2).epsilon(2e-3));
  // Oracle: E_alpha(-5 sqrt t) is decreasing from 1.
  for (double t : {0.01, 0.5, 3.0}) CHECK(mittag_leffler(0.5, 1.0, -5.0 * std::sqrt(t)) < 1.0);

  const auto bench = compute_constants(kBench);
  for (double v : {bench.sup_E1, bench.l1_Ealpha, bench.compensated_E1, bench.compensated_Ealpha,
                   bench.C_empirical}) {
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
  }
  CHECK(bench.C_empirical ==
        std::max({bench.l1_Ealpha, bench.compensated_E1, bench.compensated_Ealpha}));
  CHECK_THROWS_AS((void)compute_constants({0.5, 1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("certify the benchmark problem") {
  const auto v = certify(kBench, Nonlinearity::example51());
  CHECK(v.verdict == Verdict::CertifiedAsymptoticallyStable);
  CHECK(v.linear_ok);
  CHECK(v.h2_ok);
  CHECK(v.q < 1.0);
  CHECK(v.q == v.ell_epsilon_star * v.C_empirical);
  CHECK(v.delta > 0.0);
  CHECK(v.delta <= v.epsilon_star);
  REQUIRE(v.constants.has_value());
  const double denom = v.constants->sup_E1 + std::abs(kBench.b) * v.constants->l1_Ealpha + 1.0;
  CHECK(v.delta == doctest::Approx((1.0 - v.q) * v.epsilon_star / denom).epsilon(1e-15));
  REQUIRE(v.epsilon_grid.size() == 21);
  CHECK(v.epsilon_grid.front() == 1.0);
  CHECK(v.epsilon_grid.back() == std::ldexp(1.0, -20));
  // epsilon_star is the largest grid value with q < 1.
  for (std::size_t i = 0; i < v.epsilon_grid.size(); ++i) {
    if (v.epsilon_grid[i] > v.epsilon_star) CHECK(v.ell_grid[i] * v.C_empirical >= 1.0);
  }

  std::ostringstream os;
  write_verdict(os, v);
  const std::string s = os.str();
  for (const char* key : {"linear_ok=true\n", "h2_ok=true\n", "epsilon_star=", "q=", "C_empirical=", "delta=",
                          "verdict=CertifiedAsymptoticallyStable\n"}) {
    CHECK(s.find(key) != std::string::npos);
  }
  CHECK(s.find(kVerdictQualifier) != std::string::npos);
}

TEST_CASE("certify is inconclusive outside its hypotheses") {
  const auto unstable = certify({0.5, 1.0, 0.0, 1.0}, Nonlinearity::zero());
  CHECK(unstable.verdict == Verdict::Inconclusive);
  CHECK_FALSE(unstable.linear_ok);
  std::ostringstream os;
  write_verdict(os, unstable);
  CHECK(os.str().find("qualifier") == std::string::npos);

  const Nonlinearity root([](double x, double) { return std::sqrt(std::abs(x)); }, "sqrt|x|");
  const auto rough = certify({0.5, -1.0, 0.0, 1.0}, root);
  CHECK(rough.verdict == Verdict::Inconclusive);
  CHECK(rough.linear_ok);
  CHECK_FALSE(rough.h2_ok);
  // The modulus grows like rho^(-1/2) as rho shrinks.
  CHECK(rough.ell_grid.back() > 100.0 * rough.ell_grid.front());

  const Nonlinearity shifted([](double x, double) { return x + 1.0; }, "x+1");
  CHECK_THROWS_AS((void)certify(kBench, shifted), HypothesisViolated);
}

TEST_CASE("certified radius gives decaying solutions") {
  const auto v = certify(kBench, Nonlinearity::example51());
  REQUIRE(v.verdict == Verdict::CertifiedAsymptoticallyStable);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<HistoryFunction> phis;
  for (int i = 0; i < 10; ++i) {
    // phi(t) = p t + q with |p| + |q| <= delta, so sup |phi| <= delta on [-1, 0].
    const double w = std::abs(u(rng));
    const double p = u(rng) * w * v.delta;
    const double q = u(rng) * (1.0 - w) * v.delta;
    phis.push_back(HistoryFunction::affine(1.0, p, q));
    CHECK(phis.back().sup_norm() <= v.delta);
  }
  SolveConfig cfg;
  cfg.t_end = 20.0;
  const auto report = empirical_attractivity(kBench, Nonlinearity::example51(), phis, cfg);
  CHECK(report.all_decayed());
}

TEST_CASE("empirical attractivity") {
  SolveConfig cfg;
  cfg.t_end = 20.0;
  const std::vector<HistoryFunction> bench{HistoryFunction::constant(1.0, 0.6), HistoryFunction::affine(1.0, -0.05, 0.2),
                                           HistoryFunction::affine(1.0, 0.05, 0.25),
                                           HistoryFunction::affine(1.0, 0.1, -0.15)};
  const auto r = empirical_attractivity(kBench, Nonlinearity::example51(), bench, cfg);
  CHECK(r.tail_start == 15.0);
  CHECK(r.tolerance == 0.02);
  REQUIRE(r.entries.size() == 4);
  CHECK(r.all_decayed());

  const auto zero = empirical_attractivity(kBench, Nonlinearity::example51(), {HistoryFunction::constant(1.0, 0.0)}, cfg);
  CHECK(zero.entries[0].tail_sup == 0.0);
  CHECK(zero.all_decayed());

  // Classical decay E_0.5(-sqrt t) ~ 1 / sqrt(pi t) falls below 0.02 only for t > 796.
  SolveConfig slow;
  slow.h = 0.25;
  slow.t_end = 1200.0;
  const auto classical =
      empirical_attractivity({0.5, -1.0, 0.0, 1.0}, Nonlinearity::zero(), {HistoryFunction::constant(1.0, 1.0)}, slow);
  CHECK(classical.entries[0].decayed);
  CHECK(classical.entries[0].tail_sup ==
        doctest::Approx(mittag_leffler(0.5, 1.0, -std::sqrt(900.0))).epsilon(2e-3));

  const auto blow = empirical_attractivity({0.5, 2.0, 0.0, 1.0}, Nonlinearity::zero(),
                                           {HistoryFunction::constant(1.0, 1.0)}, SolveConfig{});
  CHECK(blow.entries[0].blowup);
  CHECK_FALSE(blow.all_decayed());
  CHECK(blow.entries[0].blowup_time > 0.0);
}
