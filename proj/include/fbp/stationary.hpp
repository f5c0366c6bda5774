#pragma once

// Dormant (stationary) states for a constant boundary concentration
// f = sigma_bar: the profile
//
//   u(x) = sigma_bar cosh(sqrt(lambda)(x - b)) / cosh(sqrt(lambda) b)
//
// with thickness b solving sigma_bar tanh(b sqrt(lambda)) = sigma_tilde b sqrt(lambda).
// A positive root exists iff sigma_bar > sigma_tilde; it is unique because
// tanh is concave on (0, inf).

#include "fbp/function.hpp"

namespace fbp {

/// Positive root b of sigma_bar tanh(b sqrt(lambda)) = sigma_tilde b sqrt(lambda),
/// bisected to 1e-12 relative. Throws NoDormantState if sigma_bar <= sigma_tilde.
double solve_dormant_thickness(double lambda, double sigma_bar, double sigma_tilde);

class StationaryProfile {
public:
  StationaryProfile(double b_bar, double lambda, double sigma_bar);

  double b_bar() const { return b_bar_; }
  double lambda() const { return lambda_; }
  double sigma_bar() const { return sigma_bar_; }

  double value(double x) const { return fn_(x); }
  double d1(double x) const { return fn_.derivative(x, 1); }
  double d2(double x) const { return fn_.derivative(x, 2); }

  /// The matching `stationary_profile` preset.
  FunctionSpec spec() const;
  const Function& function() const { return fn_; }

private:
  double b_bar_, lambda_, sigma_bar_;
  Function fn_;
};

StationaryProfile stationary_profile(double b_bar, double lambda, double sigma_bar);

}  // namespace fbp
