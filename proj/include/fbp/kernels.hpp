#pragma once

// Heat kernels on the line and on the half-line x > 0.
//
//   K(x,t;xi,tau) = exp(-(x-xi)^2 / (4(t-tau))) / (2 sqrt(pi (t-tau)))
//   N = K(x,..) + K(-x,..)   (Neumann, even reflection)
//   G = K(x,..) - K(-x,..)   (Green, odd reflection)
//
// The checked entry points validate their arguments. The `detail` functions
// are the unchecked forms used in the solver's inner loops.

#include <cmath>
#include <numbers>

namespace fbp::kernels {

struct KernelArgs {
  double x = 0.0;
  double t = 0.0;
  double xi = 0.0;
  double tau = 0.0;
};

/// Below this gap (relative to max(1, t)) the moving-boundary kernel switches
/// to the s'(t) expansion of the difference quotient.
inline constexpr double kDiagonalThreshold = 1e-10;

/// Exponents below this are treated as exact underflow.
inline constexpr double kExpFloor = -700.0;

double heat_kernel(const KernelArgs& a);
double heat_kernel_dx(const KernelArgs& a);
double neumann_kernel(const KernelArgs& a);
double neumann_kernel_dx(const KernelArgs& a);
double green_kernel(const KernelArgs& a);
double green_kernel_dx(const KernelArgs& a);

/// N_x(s(t), t; s(tau), tau). With t == tau the limit is taken: the image term
/// vanishes, and the direct term is 0 when sprime_t == 0 and diverges like
/// (t-tau)^{-1/2} otherwise (returned as a signed infinity).
double moving_boundary_kernel_dx(double t, double s_t, double tau, double s_tau, double sprime_t);

/// sqrt(t - tau) * N_x(s(t), t; s(tau), tau), finite up to and including the
/// diagonal, where it equals -sprime_t / (4 sqrt(pi)).
double moving_boundary_kernel_dx_scaled(double t, double s_t, double tau, double s_tau,
                                        double sprime_t);

/// (a / (e gamma))^a, the maximum of z^a exp(-gamma z) over z > 0.
double power_exp_envelope(double a, double gamma);

namespace detail {

inline double clamped_exp(double e) { return e < kExpFloor ? 0.0 : std::exp(e); }

inline constexpr double kInvTwoSqrtPi = 0.5 * std::numbers::inv_sqrtpi;

// K with gap = t - tau > 0 and d = x - xi.
inline double heat(double d, double gap) {
  return kInvTwoSqrtPi / std::sqrt(gap) * clamped_exp(-d * d / (4.0 * gap));
}

inline double heat_dx(double d, double gap) { return -d / (2.0 * gap) * heat(d, gap); }

// sqrt(gap) * N_x for x = s_t, xi = s_tau, with the difference quotient
// (s_t - s_tau) / gap supplied by the caller.
inline double moving_dx_scaled(double quotient, double s_t, double s_tau, double gap) {
  const double d = s_t - s_tau;
  const double e = s_t + s_tau;
  const double direct = -0.5 * quotient * kInvTwoSqrtPi * clamped_exp(-d * d / (4.0 * gap));
  const double image = -e / (2.0 * gap) * kInvTwoSqrtPi * clamped_exp(-e * e / (4.0 * gap));
  return direct + image;
}

}  // namespace detail
}  // namespace fbp::kernels
