#include "fbp/kernels.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "fbp/errors.hpp"

namespace fbp::kernels {
namespace {

double checked_gap(const KernelArgs& a) {
  const double gap = a.t - a.tau;
  if (!(gap > 0.0)) {
    std::ostringstream msg;
    msg << "kernel requires t > tau (t=" << a.t << ", tau=" << a.tau << ")";
    throw Error(ErrorKind::NonPositiveTimeGap, msg.str());
  }
  return gap;
}

void check_half_line(const KernelArgs& a) {
  if (a.x < 0.0 || a.xi < 0.0) {
    std::ostringstream msg;
    msg << "half-line kernel requires x, xi >= 0 (x=" << a.x << ", xi=" << a.xi << ")";
    throw Error(ErrorKind::NegativePosition, msg.str());
  }
}

}  // namespace

double heat_kernel(const KernelArgs& a) { return detail::heat(a.x - a.xi, checked_gap(a)); }

double heat_kernel_dx(const KernelArgs& a) { return detail::heat_dx(a.x - a.xi, checked_gap(a)); }

double neumann_kernel(const KernelArgs& a) {
  const double gap = checked_gap(a);
  check_half_line(a);
  return detail::heat(a.x - a.xi, gap) + detail::heat(-a.x - a.xi, gap);
}

double neumann_kernel_dx(const KernelArgs& a) {
  const double gap = checked_gap(a);
  check_half_line(a);
  if (a.x == 0.0) return 0.0;
  // d/dx K(-x, t; xi, tau) = -(x + xi) / (2 gap) * K(-x, ...)
  return detail::heat_dx(a.x - a.xi, gap) + detail::heat_dx(a.x + a.xi, gap);
}

double green_kernel(const KernelArgs& a) {
  const double gap = checked_gap(a);
  check_half_line(a);
  if (a.x == 0.0) return 0.0;
  return detail::heat(a.x - a.xi, gap) - detail::heat(a.x + a.xi, gap);
}

double green_kernel_dx(const KernelArgs& a) {
  const double gap = checked_gap(a);
  check_half_line(a);
  return detail::heat_dx(a.x - a.xi, gap) - detail::heat_dx(a.x + a.xi, gap);
}

double moving_boundary_kernel_dx_scaled(double t, double s_t, double tau, double s_tau,
                                        double sprime_t) {
  const double gap = t - tau;
  const double threshold = kDiagonalThreshold * std::max(1.0, t);
  if (gap < threshold) {
    // Image term is O(gap^{-1} exp(-s^2/gap)) and has already underflowed.
    if (gap <= 0.0) return -0.5 * sprime_t * detail::kInvTwoSqrtPi;
    return detail::moving_dx_scaled(sprime_t, s_t, s_tau, gap);
  }
  return detail::moving_dx_scaled((s_t - s_tau) / gap, s_t, s_tau, gap);
}

double moving_boundary_kernel_dx(double t, double s_t, double tau, double s_tau, double sprime_t) {
  const double gap = t - tau;
  if (gap <= 0.0) {
    if (sprime_t == 0.0) return 0.0;
    return sprime_t > 0.0 ? -std::numeric_limits<double>::infinity()
                          : std::numeric_limits<double>::infinity();
  }
  return moving_boundary_kernel_dx_scaled(t, s_t, tau, s_tau, sprime_t) / std::sqrt(gap);
}

double power_exp_envelope(double a, double gamma) {
  if (!(a > 0.0) || !(gamma > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "power_exp_envelope requires a > 0 and gamma > 0");
  }
  return std::pow(a / (std::numbers::e * gamma), a);
}

}  // namespace fbp::kernels
