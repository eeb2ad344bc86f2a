#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <sstream>

#include "fdde/kernel.hpp"
#include "fdde/mittag_leffler.hpp"
#include "reference_values.hpp"

using namespace fdde;

namespace {

const ProblemParams kBench{0.5, -5.0, 0.5, 1.0};

double classical_kernel(const ProblemParams& p, double beta, double t) {
  return std::pow(t, beta - 1.0) * mittag_leffler(p.alpha, beta, p.a * std::pow(t, p.alpha));
}

}  // namespace

TEST_CASE("delayed kernel against high-precision references") {
  for (const auto& r : reference::kKernel) {
    const ProblemParams p{r.alpha, r.a, r.b, r.tau};
    const double beta = r.beta_is_alpha ? r.alpha : 1.0;
    INFO("alpha=" << r.alpha << " a=" << r.a << " b=" << r.b << " beta=" << beta << " t=" << r.t);
    const double v = DelayedMittagLeffler(p, beta)(r.t);
    CHECK(std::abs(v - r.value) <= 1e-12 * std::max(1.0, std::abs(r.value)));
  }
}

TEST_CASE("b = 0 reduces to the classical function") {
  for (double a : {-1.0, -5.0}) {
    for (double alpha : {0.3, 0.5, 0.8}) {
      const ProblemParams p{alpha, a, 0.0, 1.0};
      for (KernelBeta kb : {KernelBeta::One, KernelBeta::Alpha}) {
        const double beta = beta_value(kb, alpha);
        for (double t : {0.5, 1.0, 2.0, 5.0}) {
          INFO("a=" << a << " alpha=" << alpha << " beta=" << beta << " t=" << t);
          CHECK(std::abs(eval_kernel({p, kb, t}) - classical_kernel(p, beta, t)) <= 1e-8);
        }
      }
    }
  }
  const ProblemParams p{0.5, -5.0, 0.0, 1.0};
  CHECK(std::abs(eval_kernel({p, KernelBeta::One, 1.0}) - mittag_leffler(0.5, 1.0, -5.0)) <= 1e-12);
}

TEST_CASE("initial value tends to 1 for beta = 1") {
  CHECK(std::abs(eval_kernel({kBench, KernelBeta::One, 1e-8}) - 1.0) <= 1e-3);
  CHECK(DelayedMittagLeffler(kBench, 1.0)(0.0) == 1.0);
  CHECK(DelayedMittagLeffler(kBench, 1.5)(0.0) == 0.0);
  CHECK_THROWS_AS((void)DelayedMittagLeffler(kBench, 0.5)(0.0), DomainError);
}

TEST_CASE("on (0, tau] the delay does not contribute") {
  for (double b : {-3.0, 0.5, 4.0}) {
    const ProblemParams p{0.5, -5.0, b, 1.0};
    for (double t : {0.05, 0.5, 0.999, 1.0}) {
      CHECK(std::abs(eval_kernel({p, KernelBeta::One, t}) - mittag_leffler(0.5, 1.0, -5.0 * std::sqrt(t))) <=
            1e-8);
    }
  }
  CHECK(std::abs(eval_kernel({kBench, KernelBeta::One, 0.5}) - mittag_leffler(0.5, 1.0, -5.0 * std::sqrt(0.5))) <=
        1e-12);
}

TEST_CASE("contour invariance") {
  const ProblemParams p{0.5, -5.0, 0.5, 1.0};
  for (double beta : {1.0, 0.5}) {
    const DelayedMittagLeffler base(p, beta);
    for (const auto& [mu, dtheta] : {std::pair{2.0, 0.0}, std::pair{1.0, 0.1}, std::pair{1.0, -0.1},
                                     std::pair{2.0, 0.1}}) {
      ContourSpec c;
      c.mu *= mu;
      c.theta += dtheta;
      const DelayedMittagLeffler moved(p, beta, c);
      for (double t : {0.3, 1.7, 4.2, 30.0}) {
        CHECK(std::abs(base(t) - moved(t)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("full-contour quadrature is real") {
  const ProblemParams p{0.3, -2.0, -1.5, 0.7};
  for (double beta : {1.0, 0.3}) {
    const DelayedMittagLeffler k(p, beta);
    for (double t : {0.4, 1.1, 2.9, 10.0}) {
      const auto z = k.full_contour(t);
      CHECK(std::abs(z.imag()) <= 1e-10 * std::max(1e-300, std::abs(z.real())));
      CHECK(std::abs(z.real() - k(t)) <= 1e-13);
    }
  }
}

TEST_CASE("beta = alpha + 1 is the antiderivative of beta = alpha") {
  const DelayedMittagLeffler ea(kBench, 0.5);
  const DelayedMittagLeffler r1(kBench, 1.5);
  // Tanh-sinh per delay interval: the terms switching on at t = n tau behave like (t - n tau)^(n alpha + alpha - 1).
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double t) { return ea(t); };
  const double integral = ts.integrate(f, 1.0, 2.0, 1e-13) + ts.integrate(f, 2.0, 3.0, 1e-13);
  CHECK(std::abs(integral - (r1(3.0) - r1(1.0))) <= 1e-11);
}

TEST_CASE("batch evaluation is deterministic and matches single calls") {
  const DelayedMittagLeffler k(kBench, 1.0);
  std::vector<double> ts;
  for (int i = 1; i <= 40; ++i) ts.push_back(0.37 * i);
  const auto v1 = k.evaluate(ts);
  const auto v2 = k.evaluate(ts);
  REQUIRE(v1.size() == ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    CHECK(v1[i] == v2[i]);
    CHECK(v1[i] == DelayedMittagLeffler(kBench, 1.0)(ts[i]));
  }
}

TEST_CASE("growing kernels past a real pole") {
  const ProblemParams p{0.8, 1.0, 0.0, 1.0};
  for (double t : {0.5, 2.0, 6.0}) {
    const double ref = classical_kernel(p, 1.0, t);
    CHECK(std::abs(eval_kernel({p, KernelBeta::One, t}) - ref) <= 1e-12 * ref);
  }
  ContourSpec fixed;
  fixed.adapt_radius = false;
  fixed.mu = 0.5;
  const DelayedMittagLeffler k({0.5, 1.0, 0.0, 1.0}, 1.0, fixed);
  CHECK_THROWS_AS((void)k(1.0), ContourDegenerate);
}

TEST_CASE("kernel domain errors") {
  CHECK_THROWS_AS((void)eval_kernel({kBench, KernelBeta::One, 0.0}), DomainError);
  CHECK_THROWS_AS((void)eval_kernel({kBench, KernelBeta::One, -1.0}), DomainError);
  ContourSpec bad;
  bad.theta = 1.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  bad.theta = 2.0;
  bad.mu = 0.0;
  CHECK_THROWS_AS(bad.validate(), DomainError);
  CHECK_THROWS_AS((void)eval_kernel({{1.5, -5.0, 0.5, 1.0}, KernelBeta::One, 1.0}), DomainError);
}

TEST_CASE("decay profiles are bounded") {
  const std::vector<double> grid{1, 10, 100};
  for (KernelBeta kb : {KernelBeta::One, KernelBeta::Alpha}) {
    const auto prof = decay_profile(kBench, kb, grid);
    REQUIRE(prof.size() == 3);
    double running = 0.0;
    for (const auto& pt : prof) {
      CHECK(std::isfinite(pt.compensated));
      running = std::max(running, pt.compensated);
    }
    CHECK(prof.back().compensated <= 2.0 * running);
    const double rate = kb == KernelBeta::One ? 0.5 : 1.5;
    CHECK(prof[1].compensated == doctest::Approx(prof[1].kernel_abs * std::pow(10.0, rate)));
  }
  CHECK_THROWS_AS((void)decay_profile(kBench, KernelBeta::One, {0.5}), DomainError);
  CHECK_THROWS_AS((void)decay_profile({0.5, 1.0, 0.0, 1.0}, KernelBeta::One, {1.0}), DomainError);
}

TEST_CASE("b = 0 compensated decay approaches 1 / (|a| Gamma(1 - alpha))") {
  const ProblemParams p{0.5, -5.0, 0.0, 1.0};
  const double asymptote = 1.0 / (5.0 * std::tgamma(0.5));
  const auto prof = decay_profile(p, KernelBeta::One, {10, 100});
  CHECK(prof[0].compensated == doctest::Approx(asymptote).epsilon(1e-2));
  CHECK(prof[1].compensated == doctest::Approx(asymptote).epsilon(1e-3));
  for (const auto& pt : prof) {
    CHECK(std::abs(pt.kernel_abs - mittag_leffler(0.5, 1.0, -5.0 * std::sqrt(pt.t))) <= 1e-12);
  }
}

TEST_CASE("L1 norm") {
  const auto classical = kernel_l1_norm({0.5, -5.0, 0.0, 1.0});
  CHECK(classical.value == doctest::Approx(0.2).epsilon(2e-3));
  CHECK(classical.split_point == 50.0);
  CHECK(classical.error_estimate > 0.0);

  const auto bench = kernel_l1_norm(kBench);
  CHECK(bench.value > 0.0);
  CHECK(std::isfinite(bench.value));
  const auto halved = kernel_l1_norm(kBench, 0.0, 0.5e-10);
  CHECK(std::abs(halved.value - bench.value) < bench.error_estimate);

  CHECK_THROWS_AS((void)kernel_l1_norm({0.5, 1.0, 0.0, 1.0}), DomainError);
}

TEST_CASE("decay and L1 CSV records") {
  std::ostringstream d;
  write_decay_csv(d, {{1.0, 0.5, 0.5}});
  CHECK(d.str() == "t,kernel_abs,compensated\n1,0.5,0.5\n");
  std::ostringstream l;
  L1Norm n;
  n.value = 0.25;
  n.error_estimate = 1e-6;
  n.split_point = 50.0;
  write_l1_csv(l, n);
  CHECK(l.str() == "value,error_estimate,split_point\n0.25,1e-06,50\n");
}
