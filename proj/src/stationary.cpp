#include "fbp/stationary.hpp"

#include <cmath>
#include <sstream>

#include "fbp/errors.hpp"

namespace fbp {

double solve_dormant_thickness(double lambda, double sigma_bar, double sigma_tilde) {
  if (!(lambda > 0.0) || !(sigma_bar > 0.0) || !(sigma_tilde > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "lambda, sigma_bar and sigma_tilde must be > 0");
  }
  if (sigma_bar <= sigma_tilde) {
    std::ostringstream msg;
    msg << "no dormant state: sigma_bar (" << sigma_bar << ") <= sigma_tilde (" << sigma_tilde
        << ")";
    throw Error(ErrorKind::NoDormantState, msg.str());
  }
  // g(z) = sigma_bar tanh z - sigma_tilde z is positive just right of 0 and
  // negative at z = sigma_bar / sigma_tilde (tanh < 1).
  auto g = [&](double z) { return sigma_bar * std::tanh(z) - sigma_tilde * z; };
  double lo = 1e-12;
  double hi = sigma_bar / sigma_tilde;
  while (hi - lo > 1e-12 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) / std::sqrt(lambda);
}

StationaryProfile::StationaryProfile(double b_bar, double lambda, double sigma_bar)
    : b_bar_(b_bar), lambda_(lambda), sigma_bar_(sigma_bar),
      fn_(FunctionSpec{Preset::stationary_profile, {sigma_bar, lambda, b_bar}}) {
  if (!(b_bar > 0.0) || !(lambda > 0.0) || !(sigma_bar > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "stationary profile inputs must be > 0");
  }
}

FunctionSpec StationaryProfile::spec() const {
  return {Preset::stationary_profile, {sigma_bar_, lambda_, b_bar_}};
}

StationaryProfile stationary_profile(double b_bar, double lambda, double sigma_bar) {
  return StationaryProfile(b_bar, lambda, sigma_bar);
}

}  // namespace fbp
