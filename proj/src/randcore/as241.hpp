#pragma once

#include <cmath>

// Wichura, "Algorithm AS 241: The percentage points of the normal
// distribution", Applied Statistics 37 (1988). PPND16 coefficients.
namespace gaussdev::as241 {

inline constexpr double kSplit1 = 0.425;
inline constexpr double kSplit2 = 5.0;
inline constexpr double kConst1 = 0.180625;
inline constexpr double kConst2 = 1.6;

inline constexpr double a[8] = {3.387132872796366608,   133.14166789178437745,
                                1971.5909503065514427,  13731.693765509461125,
                                45921.953931549871457,  67265.770927008700853,
                                33430.575583588128105,  2509.0809287301226727};
inline constexpr double b[8] = {1.0,                    42.313330701600911252,
                                687.1870074920579083,   5394.1960214247511077,
                                21213.794301586595867,  39307.89580009271061,
                                28729.085735721942674,  5226.495278852545925};
inline constexpr double c[8] = {1.42343711074968357734,   4.6303378461565452959,
                                5.7694972214606914055,    3.64784832476320460504,
                                1.27045825245236838258,   0.24178072517745061177,
                                0.0227238449892691845833, 7.7454501427834140764e-4};
inline constexpr double d[8] = {1.0,                      2.05319162663775882187,
                                1.6763848301838038494,    0.68976733498510000455,
                                0.14810397642748007459,   0.0151986665636164571966,
                                5.475938084995344946e-4,  1.05075007164441684324e-9};
inline constexpr double e[8] = {6.6579046435011037772,    5.4637849111641143699,
                                1.7848265399172913358,    0.29656057182850489123,
                                0.026532189526576123093,  0.0012426609473880784386,
                                2.71155556874348757815e-5, 2.01033439929228813265e-7};
inline constexpr double f[8] = {1.0,                      0.59983220655588793769,
                                0.13692988092273580531,   0.0148753612908506148525,
                                7.868691311456132591e-4,  1.8463183175100546818e-5,
                                1.4215117583164458887e-7, 2.04426310338993978564e-15};

// Horner evaluation, highest degree first. The vector kernels replicate this
// exact operation order.
inline double poly(const double (&k)[8], double r) {
  double acc = k[7];
  for (int i = 6; i >= 0; --i) acc = acc * r + k[i];
  return acc;
}

inline double central(double q) {
  const double r = kConst1 - q * q;
  return q * poly(a, r) / poly(b, r);
}

// |p - 0.5| > 0.425
inline double tail(double p) {
  const double q = p - 0.5;
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= kSplit2) {
    r -= kConst2;
    val = poly(c, r) / poly(d, r);
  } else {
    r -= kSplit2;
    val = poly(e, r) / poly(f, r);
  }
  return q < 0.0 ? -val : val;
}

inline double quantile(double p) {
  const double q = p - 0.5;
  return std::fabs(q) <= kSplit1 ? central(q) : tail(p);
}

}  // namespace gaussdev::as241
