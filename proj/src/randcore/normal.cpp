#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "as241.hpp"
#include "gaussdev/randcore.hpp"

namespace gaussdev {

double normal_cdf(double x) {
  if (std::isnan(x)) throw std::domain_error("normal_cdf: NaN argument");
  if (x <= -40.0) return 0.0;
  if (x >= 40.0) return 1.0;
  return 0.5 * std::erfc(-x * std::numbers::sqrt2 * 0.5);
}

double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double normal_quantile_as241(double p) { return as241::quantile(p); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::domain_error("normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
  // Refine on the lower half only; 1 - p is exact for p >= 1/2.
  if (p > 0.5) return -normal_quantile(1.0 - p);
  double x = as241::quantile(p);
  for (int step = 0; step < 2; ++step) {
    const double density = normal_pdf(x);
    if (density <= 0.0) break;
    x -= (normal_cdf(x) - p) / density;
  }
  return x;
}

double mills_upper(double u) {
  if (!(u >= 0.0)) throw std::domain_error("mills_upper: u must be nonnegative");
  return 0.5 * std::exp(-0.5 * u * u);
}

}  // namespace gaussdev
