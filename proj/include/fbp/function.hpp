#pragma once

// Scalar data functions f(t), phi(x) and the functions derived from them.
//
// A FunctionSpec is the serializable form (preset name + parameters). A
// Function is the evaluable form: an immutable, cheaply copyable handle that
// returns values and analytic derivatives.

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fbp {

enum class Preset {
  constant,            // c
  polynomial,          // c0 + c1 x + ... + cn x^n
  exp_decay,           // a exp(-r x)
  stationary_profile,  // sigma_bar cosh(sqrt(lambda)(x - b_bar)) / cosh(sqrt(lambda) b_bar)
  cosine_bump,         // c + a cos(pi x / L)
  saturating_ramp,     // c (1 + a x^2 / (1 + x^2))
};

std::string_view to_string(Preset p);
std::optional<Preset> preset_from_string(std::string_view name);

struct FunctionSpec {
  Preset preset = Preset::constant;
  std::vector<double> params;

  bool operator==(const FunctionSpec&) const = default;
};

namespace detail {
class FunctionImpl;
}

class Function {
public:
  Function();  // identically zero
  explicit Function(const FunctionSpec& spec);

  double operator()(double x) const { return derivative(x, 0); }
  /// d^order / dx^order at x. Throws InvalidArgument above max_order().
  double derivative(double x, int order) const;
  int max_order() const { return max_order_; }

  /// Sup of |derivative(., order)| over [lo, hi] sampled at n + 1 points.
  double sup_abs(double lo, double hi, int order = 0, int n = 512) const;
  double min(double lo, double hi, int n = 512) const;
  double max(double lo, double hi, int n = 512) const;

  // Derived functions.

  /// x -> scale * g(shift + x)
  static Function shifted(Function g, double shift, double scale = 1.0);
  /// x -> g'(x)
  static Function derivative_of(Function g);
  /// t -> d/dt (exp(lambda t) f(t)) = exp(lambda t) (f'(t) + lambda f(t))
  static Function exp_weighted_derivative(Function f, double lambda);
  /// Piecewise-linear interpolant of (xs, values) whose first derivative is
  /// the piecewise-linear interpolant of (xs, slopes). Outside [xs.front(),
  /// xs.back()] the end values are held.
  static Function sampled(std::vector<double> xs, std::vector<double> values,
                          std::vector<double> slopes);

  /// The preset this handle was built from, if any.
  const std::optional<FunctionSpec>& spec() const { return spec_; }

private:
  explicit Function(std::shared_ptr<const detail::FunctionImpl> impl);

  std::shared_ptr<const detail::FunctionImpl> impl_;
  std::optional<FunctionSpec> spec_;
  int max_order_ = 0;
};

/// Number of parameters a preset expects; polynomial returns 0 (any n >= 1).
std::size_t preset_arity(Preset p);

}  // namespace fbp
