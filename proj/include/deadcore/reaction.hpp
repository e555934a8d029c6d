#pragma once

#include <cmath>

namespace deadcore {

/// t_+^order. For order < 1 the branch on (0, eta) is replaced by the
/// quadratic a t + b t^2 matching value and slope at eta, so the law is C^1
/// on (0, inf) with finite slope (2 - order) eta^(order-1) at 0+. Order 0 is
/// the indicator of {t > 0}, smoothed the same way.
inline double reaction_power(double t, double order, double eta) {
  if (t <= 0.0) return 0.0;
  if (order >= 1.0) return order == 1.0 ? t : std::pow(t, order);
  if (t < eta) {
    const double e1 = std::pow(eta, order - 1.0);
    return t * e1 * ((2.0 - order) + (order - 1.0) * t / eta);
  }
  if (order == 0.0) return 1.0;
  if (order == 0.5) return std::sqrt(t);
  return std::pow(t, order);
}

/// Derivative of reaction_power; at t == 0 the right derivative is returned.
inline double reaction_power_derivative(double t, double order, double eta) {
  if (t < 0.0) return 0.0;
  if (order >= 1.0) {
    if (order == 1.0) return 1.0;
    return t == 0.0 ? 0.0 : order * std::pow(t, order - 1.0);
  }
  if (t < eta) {
    const double e1 = std::pow(eta, order - 1.0);
    return e1 * ((2.0 - order) + 2.0 * (order - 1.0) * t / eta);
  }
  if (order == 0.0) return 0.0;
  return order * std::pow(t, order - 1.0);
}

}  // namespace deadcore
