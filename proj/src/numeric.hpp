#ifndef MBUR_SRC_NUMERIC_HPP_
#define MBUR_SRC_NUMERIC_HPP_

#include <cmath>

namespace mbur::detail {

/// log(1 - exp(t)) for t <= 0 (Maechler's split at -ln 2).
inline double log1mexp(double t) {
  if (t > -0.6931471805599453) return std::log(-std::expm1(t));
  return std::log1p(-std::exp(t));
}

/// log(1 + exp(x)) without overflow.
inline double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

/// d log f(y; theta) / d log(theta), written in t = log(y) / theta:
/// -1 + t e^t / (1 - e^t) - 2t.
inline double dloglik_dlogtheta(double t) {
  double r = -1.0;  // limit at t = 0
  if (t < -700.0) {
    r = 0.0;
  } else if (t != 0.0) {
    r = t / std::expm1(-t);
  }
  return -1.0 + r - 2.0 * t;
}

}  // namespace mbur::detail

#endif  // MBUR_SRC_NUMERIC_HPP_
