#include "fbp/function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fbp/errors.hpp"

namespace fbp {

std::string_view to_string(Preset p) {
  switch (p) {
    case Preset::constant: return "constant";
    case Preset::polynomial: return "polynomial";
    case Preset::exp_decay: return "exp_decay";
    case Preset::stationary_profile: return "stationary_profile";
    case Preset::cosine_bump: return "cosine_bump";
    case Preset::saturating_ramp: return "saturating_ramp";
  }
  return "unknown";
}

std::optional<Preset> preset_from_string(std::string_view name) {
  for (auto p : {Preset::constant, Preset::polynomial, Preset::exp_decay,
                 Preset::stationary_profile, Preset::cosine_bump, Preset::saturating_ramp}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

std::size_t preset_arity(Preset p) {
  switch (p) {
    case Preset::constant: return 1;
    case Preset::polynomial: return 0;
    case Preset::exp_decay: return 2;
    case Preset::stationary_profile: return 3;
    case Preset::cosine_bump: return 3;
    case Preset::saturating_ramp: return 2;
  }
  return 0;
}

namespace detail {

class FunctionImpl {
public:
  virtual ~FunctionImpl() = default;
  virtual double eval(double x, int order) const = 0;
  virtual int max_order() const = 0;
};

namespace {

constexpr int kPresetMaxOrder = 8;

class ZeroImpl final : public FunctionImpl {
public:
  double eval(double, int) const override { return 0.0; }
  int max_order() const override { return kPresetMaxOrder; }
};

class ConstantImpl final : public FunctionImpl {
public:
  explicit ConstantImpl(double c) : c_(c) {}
  double eval(double, int order) const override { return order == 0 ? c_ : 0.0; }
  int max_order() const override { return kPresetMaxOrder; }

private:
  double c_;
};

class PolynomialImpl final : public FunctionImpl {
public:
  explicit PolynomialImpl(std::vector<double> c) : c_(std::move(c)) {}

  double eval(double x, int order) const override {
    const int n = static_cast<int>(c_.size());
    double acc = 0.0;
    for (int k = n - 1; k >= order; --k) {
      double coef = c_[k];
      for (int j = 0; j < order; ++j) coef *= static_cast<double>(k - j);
      acc = acc * x + coef;
    }
    return acc;
  }
  int max_order() const override { return kPresetMaxOrder; }

private:
  std::vector<double> c_;
};

class ExpDecayImpl final : public FunctionImpl {
public:
  ExpDecayImpl(double a, double r) : a_(a), r_(r) {}
  double eval(double x, int order) const override {
    return a_ * std::pow(-r_, order) * std::exp(-r_ * x);
  }
  int max_order() const override { return kPresetMaxOrder; }

private:
  double a_, r_;
};

class StationaryProfileImpl final : public FunctionImpl {
public:
  StationaryProfileImpl(double sigma_bar, double lambda, double b_bar)
      : amp_(sigma_bar / std::cosh(std::sqrt(lambda) * b_bar)), k_(std::sqrt(lambda)), b_(b_bar) {}

  double eval(double x, int order) const override {
    const double arg = k_ * (x - b_);
    const double hyper = (order % 2 == 0) ? std::cosh(arg) : std::sinh(arg);
    return amp_ * std::pow(k_, order) * hyper;
  }
  int max_order() const override { return kPresetMaxOrder; }

private:
  double amp_, k_, b_;
};

class CosineBumpImpl final : public FunctionImpl {
public:
  CosineBumpImpl(double c, double a, double len) : c_(c), a_(a), w_(std::numbers::pi / len) {}

  double eval(double x, int order) const override {
    const double phase = w_ * x + 0.5 * std::numbers::pi * order;
    return (order == 0 ? c_ : 0.0) + a_ * std::pow(w_, order) * std::cos(phase);
  }
  int max_order() const override { return kPresetMaxOrder; }

private:
  double c_, a_, w_;
};

class SaturatingRampImpl final : public FunctionImpl {
public:
  SaturatingRampImpl(double c, double a) : c_(c), a_(a) {}

  // c (1 + a) - c a g(x), g = 1 / (1 + x^2)
  double eval(double x, int order) const override {
    const double q = 1.0 + x * x;
    double g = 0.0;
    switch (order) {
      case 0: g = 1.0 / q; break;
      case 1: g = -2.0 * x / (q * q); break;
      case 2: g = (6.0 * x * x - 2.0) / (q * q * q); break;
      case 3: g = 24.0 * x * (1.0 - x * x) / (q * q * q * q); break;
      default: break;
    }
    return (order == 0 ? c_ * (1.0 + a_) : 0.0) - c_ * a_ * g;
  }
  int max_order() const override { return 3; }

private:
  double c_, a_;
};

class ShiftedImpl final : public FunctionImpl {
public:
  ShiftedImpl(Function g, double shift, double scale)
      : g_(std::move(g)), shift_(shift), scale_(scale) {}
  double eval(double x, int order) const override {
    return scale_ * g_.derivative(shift_ + x, order);
  }
  int max_order() const override { return g_.max_order(); }

private:
  Function g_;
  double shift_, scale_;
};

class DerivativeImpl final : public FunctionImpl {
public:
  explicit DerivativeImpl(Function g) : g_(std::move(g)) {}
  double eval(double x, int order) const override { return g_.derivative(x, order + 1); }
  int max_order() const override { return g_.max_order() - 1; }

private:
  Function g_;
};

class ExpWeightedDerivativeImpl final : public FunctionImpl {
public:
  ExpWeightedDerivativeImpl(Function f, double lambda) : f_(std::move(f)), lambda_(lambda) {}

  // Leibniz: h^(k) = e^{lt} sum_j C(k,j) l^(k-j) (f^(j+1) + l f^(j))
  double eval(double t, int order) const override {
    double acc = 0.0;
    double binom = 1.0;
    for (int j = 0; j <= order; ++j) {
      const double inner = f_.derivative(t, j + 1) + lambda_ * f_.derivative(t, j);
      acc += binom * std::pow(lambda_, order - j) * inner;
      binom = binom * static_cast<double>(order - j) / static_cast<double>(j + 1);
    }
    return std::exp(lambda_ * t) * acc;
  }
  int max_order() const override { return f_.max_order() - 1; }

private:
  Function f_;
  double lambda_;
};

class SampledImpl final : public FunctionImpl {
public:
  SampledImpl(std::vector<double> xs, std::vector<double> values, std::vector<double> slopes)
      : xs_(std::move(xs)), values_(std::move(values)), slopes_(std::move(slopes)) {
    const double h = (xs_.back() - xs_.front()) / static_cast<double>(xs_.size() - 1);
    uniform_ = true;
    for (std::size_t i = 0; i < xs_.size() && uniform_; ++i) {
      uniform_ = std::abs(xs_[i] - (xs_.front() + h * static_cast<double>(i))) <= 1e-12 * h * xs_.size();
    }
    inv_h_ = 1.0 / h;
  }

  double eval(double x, int order) const override {
    const auto& y = order == 0 ? values_ : slopes_;
    if (x <= xs_.front()) return y.front();
    if (x >= xs_.back()) return y.back();
    std::size_t i = 0;
    if (uniform_) {
      i = std::min(static_cast<std::size_t>((x - xs_.front()) * inv_h_), xs_.size() - 2);
    } else {
      const auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      i = static_cast<std::size_t>(it - xs_.begin()) - 1;
    }
    const double w = (x - xs_[i]) / (xs_[i + 1] - xs_[i]);
    return (1.0 - w) * y[i] + w * y[i + 1];
  }
  int max_order() const override { return 1; }

private:
  std::vector<double> xs_, values_, slopes_;
  bool uniform_ = false;
  double inv_h_ = 0.0;
};

std::shared_ptr<const FunctionImpl> make_preset(const FunctionSpec& spec) {
  const auto& p = spec.params;
  const std::size_t arity = preset_arity(spec.preset);
  if ((arity != 0 && p.size() != arity) || (arity == 0 && p.empty())) {
    std::ostringstream msg;
    msg << "preset '" << to_string(spec.preset) << "' expects "
        << (arity == 0 ? std::string("at least 1") : std::to_string(arity)) << " parameter(s), got "
        << p.size();
    throw Error(ErrorKind::InvalidArgument, msg.str());
  }
  for (double v : p) {
    if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "non-finite preset parameter");
  }
  switch (spec.preset) {
    case Preset::constant: return std::make_shared<ConstantImpl>(p[0]);
    case Preset::polynomial: return std::make_shared<PolynomialImpl>(p);
    case Preset::exp_decay: return std::make_shared<ExpDecayImpl>(p[0], p[1]);
    case Preset::stationary_profile:
      if (!(p[1] > 0.0)) {
        throw Error(ErrorKind::InvalidArgument, "stationary_profile requires lambda > 0");
      }
      return std::make_shared<StationaryProfileImpl>(p[0], p[1], p[2]);
    case Preset::cosine_bump:
      if (p[2] == 0.0) throw Error(ErrorKind::InvalidArgument, "cosine_bump requires L != 0");
      return std::make_shared<CosineBumpImpl>(p[0], p[1], p[2]);
    case Preset::saturating_ramp: return std::make_shared<SaturatingRampImpl>(p[0], p[1]);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown preset");
}

}  // namespace
}  // namespace detail

Function::Function() : Function(std::make_shared<detail::ZeroImpl>()) {}

Function::Function(const FunctionSpec& spec) : Function(detail::make_preset(spec)) { spec_ = spec; }

Function::Function(std::shared_ptr<const detail::FunctionImpl> impl)
    : impl_(std::move(impl)), max_order_(impl_->max_order()) {}

double Function::derivative(double x, int order) const {
  if (order < 0 || order > max_order_) {
    throw Error(ErrorKind::InvalidArgument, "derivative order " + std::to_string(order) +
                                                " not available (max " +
                                                std::to_string(max_order_) + ")");
  }
  return impl_->eval(x, order);
}

double Function::sup_abs(double lo, double hi, int order, int n) const {
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + (hi - lo) * static_cast<double>(i) / n;
    sup = std::max(sup, std::abs(derivative(x, order)));
  }
  return sup;
}

double Function::min(double lo, double hi, int n) const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) m = std::min(m, (*this)(lo + (hi - lo) * static_cast<double>(i) / n));
  return m;
}

double Function::max(double lo, double hi, int n) const {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) m = std::max(m, (*this)(lo + (hi - lo) * static_cast<double>(i) / n));
  return m;
}

Function Function::shifted(Function g, double shift, double scale) {
  return Function(std::make_shared<detail::ShiftedImpl>(std::move(g), shift, scale));
}

Function Function::derivative_of(Function g) {
  if (g.max_order() < 1) throw Error(ErrorKind::InvalidArgument, "function is not differentiable");
  return Function(std::make_shared<detail::DerivativeImpl>(std::move(g)));
}

Function Function::exp_weighted_derivative(Function f, double lambda) {
  if (f.max_order() < 1) throw Error(ErrorKind::InvalidArgument, "function is not differentiable");
  return Function(std::make_shared<detail::ExpWeightedDerivativeImpl>(std::move(f), lambda));
}

Function Function::sampled(std::vector<double> xs, std::vector<double> values,
                           std::vector<double> slopes) {
  if (xs.size() < 2 || values.size() != xs.size() || slopes.size() != xs.size()) {
    throw Error(ErrorKind::InvalidArgument, "sampled function needs >= 2 matching samples");
  }
  if (!std::is_sorted(xs.begin(), xs.end()) ||
      std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw Error(ErrorKind::InvalidArgument, "sample positions must be strictly increasing");
  }
  return Function(std::make_shared<detail::SampledImpl>(std::move(xs), std::move(values),
                                                        std::move(slopes)));
}

}  // namespace fbp
