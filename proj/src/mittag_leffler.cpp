#include "fdde/mittag_leffler.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/cos_pi.hpp>
#include <boost/math/special_functions/sin_pi.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fdde/core.hpp"

namespace fdde {

namespace {

// Integral representation valid for 0 < alpha < 1, beta < 1 + alpha, z != 0.
double ml_integral(double alpha, double beta, double z, double tol) {
  using boost::math::cos_pi;
  using boost::math::sin_pi;
  const double s1 = sin_pi(1.0 - beta);
  const double s2 = sin_pi(1.0 - beta + alpha);
  const double c = cos_pi(alpha);
  const double pre = 1.0 / (alpha * std::numbers::pi);
  const double expo = (1.0 - beta) / alpha;
  auto kernel = [&](double chi) {
    if (chi <= 0.0) return 0.0;
    const double num = chi * s1 - z * s2;
    const double den = chi * chi - 2.0 * chi * z * c + z * z;
    return pre * std::pow(chi, expo) * std::exp(-std::pow(chi, 1.0 / alpha)) * num / den;
  };

  // e^{-chi^{1/alpha}} < 1e-26 beyond this point.
  const double upper = std::pow(60.0, alpha);
  thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double total = 0.0;
  auto piece = [&](double lo, double hi) {
    double err = 0.0;
    total += integrator.integrate(kernel, lo, hi, tol, &err);
  };
  const double dip = z * c;  // minimum of the denominator
  if (dip > 0.0 && dip < upper) {
    piece(0.0, dip);
    piece(dip, upper);
  } else {
    piece(0.0, upper);
  }
  if (z > 0.0) total += std::pow(z, expo) * std::exp(std::pow(z, 1.0 / alpha)) / alpha;
  return total;
}

}  // namespace

double mittag_leffler_series(double alpha, double beta, double z, double rel_tol, int min_terms, int max_terms) {
  if (z == 0.0) return 1.0 / std::tgamma(beta);
  const double log_abs_z = std::log(std::abs(z));
  const bool negative = z < 0.0;
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < max_terms; ++k) {
    const double mag = std::exp(k * log_abs_z - std::lgamma(alpha * k + beta));
    const double term = (negative && (k % 2 == 1)) ? -mag : mag;
    sum += term;
    if (k >= min_terms && mag < prev && mag <= rel_tol * std::abs(sum)) break;
    prev = mag;
  }
  return sum;
}

double mittag_leffler(double alpha, double beta, double z, const MittagLefflerOptions& opt) {
  if (!(alpha > 0.0) || !(beta > 0.0) || !std::isfinite(z)) {
    std::ostringstream os;
    os << "mittag_leffler: unsupported arguments alpha=" << alpha << " beta=" << beta << " z=" << z;
    throw DomainError(os.str());
  }
  if (std::abs(z) <= opt.series_switch) return mittag_leffler_series(alpha, beta, z);
  if (alpha >= 1.0) {
    throw DomainError("mittag_leffler: alpha >= 1 is only supported in the series range");
  }

  // Lower beta into the range of the integral representation.
  int shifts = 0;
  double b = beta;
  while (b >= 1.0 + alpha) {
    b -= alpha;
    ++shifts;
  }
  double value = ml_integral(alpha, b, z, opt.integral_tol);
  for (int j = 0; j < shifts; ++j) {
    value = (value - 1.0 / std::tgamma(b)) / z;
    b += alpha;
  }
  return value;
}

}  // namespace fdde
