#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <stdexcept>

#include "gaussdev/mc.hpp"

namespace gaussdev {

double z_critical(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("confidence must lie in (0, 1)");
  return -normal_quantile(0.5 * (1.0 - confidence));
}

BinomialInterval clopper_pearson(std::size_t k, std::size_t n, double confidence) {
  if (n == 0 || k > n) throw std::invalid_argument("clopper_pearson: need 0 <= k <= n, n > 0");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("clopper_pearson: confidence must lie in (0, 1)");
  const double alpha = 1.0 - confidence;
  const double dn = static_cast<double>(n);
  const double dk = static_cast<double>(k);
  if (k == 0) return {0.0, -std::expm1(std::log(alpha) / dn)};
  if (k == n) return {std::exp(std::log(alpha) / dn), 1.0};
  return {boost::math::ibeta_inv(dk, dn - dk + 1.0, 0.5 * alpha),
          boost::math::ibeta_inv(dk + 1.0, dn - dk, 1.0 - 0.5 * alpha)};
}

}  // namespace gaussdev
