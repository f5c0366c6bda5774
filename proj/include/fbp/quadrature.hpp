#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

namespace fbp::quadrature {

/// Gaussian tails beyond |z| > kGaussCutoff contribute below 1e-21.
inline constexpr double kGaussCutoff = 7.0;

/// int_lo^hi K(x, t; xi, 0) g(xi) dxi for t > 0, computed after the change of
/// variable xi = x + 2 z sqrt(t):
///   (1 / sqrt(pi)) int e^{-z^2} g(x + 2 z sqrt(t)) dz
/// on the z-interval clipped to [-kGaussCutoff, kGaussCutoff], with composite
/// 10-point Gauss-Legendre on panels no wider than `max_panel` in z.
template <class G>
double heat_smoothing(double x, double t, double lo, double hi, G&& g, double max_panel = 1.5) {
  const double scale = 2.0 * std::sqrt(t);
  const double z0 = std::max((lo - x) / scale, -kGaussCutoff);
  const double z1 = std::min((hi - x) / scale, kGaussCutoff);
  if (!(z1 > z0)) return 0.0;
  using Rule = boost::math::quadrature::gauss<double, 10>;
  const int panels = std::max(1, static_cast<int>(std::ceil((z1 - z0) / max_panel)));
  const double width = (z1 - z0) / panels;
  double acc = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = z0 + p * width;
    acc += Rule::integrate([&](double z) { return std::exp(-z * z) * g(x + scale * z); }, a,
                           a + width);
  }
  return acc * std::numbers::inv_sqrtpi;
}

}  // namespace fbp::quadrature
