#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "fbp/errors.hpp"
#include "fbp/function.hpp"

using fbp::Function;
using fbp::FunctionSpec;
using fbp::Preset;

namespace {

std::vector<FunctionSpec> catalog() {
  return {{Preset::constant, {2.5}},
          {Preset::polynomial, {1.0, -0.5, 0.25, 0.1}},
          {Preset::exp_decay, {1.3, 0.7}},
          {Preset::stationary_profile, {1.0, 1.0, 1.9150080482}},
          {Preset::cosine_bump, {1.0, 0.3, 2.0}},
          {Preset::saturating_ramp, {1.2, 0.2}}};
}

}  // namespace

TEST(Function, PresetDerivativesMatchCentralDifferences) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> pos(0.0, 2.0);
  const double h = 1e-5;
  for (const auto& spec : catalog()) {
    const Function f(spec);
    const int top = std::min(f.max_order(), 3);
    for (int i = 0; i < 50; ++i) {
      const double x = pos(rng);
      for (int k = 1; k <= top; ++k) {
        const double fd = (f.derivative(x + h, k - 1) - f.derivative(x - h, k - 1)) / (2 * h);
        const double exact = f.derivative(x, k);
        EXPECT_NEAR(exact, fd, 1e-6 * std::max(1.0, std::abs(exact)))
            << to_string(spec.preset) << " order " << k << " at " << x;
      }
    }
  }
}

TEST(Function, PresetValues) {
  EXPECT_DOUBLE_EQ(Function({Preset::constant, {2.5}})(7.0), 2.5);
  EXPECT_DOUBLE_EQ(Function({Preset::polynomial, {1, 2, 3}})(2.0), 1 + 4 + 12);
  EXPECT_DOUBLE_EQ(Function({Preset::polynomial, {1, 2, 3}}).derivative(2.0, 2), 6.0);
  EXPECT_NEAR(Function({Preset::exp_decay, {2, 1}})(1.0), 2 * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(Function({Preset::cosine_bump, {1, 0.5, 2}})(1.0), 1.0, 1e-15);
  EXPECT_NEAR(Function({Preset::saturating_ramp, {1.2, 0.2}})(1.0), 1.2 * (1 + 0.2 * 0.5), 1e-15);
  EXPECT_DOUBLE_EQ(Function({Preset::stationary_profile, {1.5, 2.0, 0.8}})(0.0), 1.5);
}

TEST(Function, ArityIsEnforced) {
  try {
    Function f({Preset::exp_decay, {1.0}});
    FAIL();
  } catch (const fbp::Error& e) {
    EXPECT_EQ(e.kind(), fbp::ErrorKind::InvalidArgument);
  }
  EXPECT_THROW(Function({Preset::polynomial, {}}), fbp::Error);
  EXPECT_THROW(Function({Preset::constant, {1.0, 2.0}}), fbp::Error);
  EXPECT_THROW(Function({Preset::constant, {NAN}}), fbp::Error);
}

TEST(Function, OrderAboveMaxThrows) {
  const Function r({Preset::saturating_ramp, {1, 1}});
  EXPECT_EQ(r.max_order(), 3);
  EXPECT_THROW(r.derivative(0.0, 4), fbp::Error);
  EXPECT_THROW(r.derivative(0.0, -1), fbp::Error);
}

TEST(Function, PresetNamesRoundTrip) {
  for (const auto& spec : catalog()) {
    EXPECT_EQ(fbp::preset_from_string(to_string(spec.preset)), spec.preset);
  }
  EXPECT_FALSE(fbp::preset_from_string("spline").has_value());
}

TEST(Function, ShiftedAndScaled) {
  const Function f({Preset::exp_decay, {1, 1}});
  const Function g = Function::shifted(f, 0.5, 3.0);
  EXPECT_NEAR(g(0.25), 3 * std::exp(-0.75), 1e-15);
  EXPECT_NEAR(g.derivative(0.25, 1), -3 * std::exp(-0.75), 1e-15);
}

TEST(Function, DerivativeOf) {
  const Function f({Preset::polynomial, {0, 0, 0, 1}});
  const Function d = Function::derivative_of(f);
  EXPECT_DOUBLE_EQ(d(2.0), 12.0);
  EXPECT_DOUBLE_EQ(d.derivative(2.0, 1), 12.0);
  EXPECT_EQ(d.max_order(), f.max_order() - 1);
}

TEST(Function, ExpWeightedDerivative) {
  const double lambda = 0.7;
  const Function f({Preset::cosine_bump, {1.0, 0.4, 1.5}});
  const Function h = Function::exp_weighted_derivative(f, lambda);
  const auto g = [&](double t) { return std::exp(lambda * t) * f(t); };
  const double step = 1e-5;
  for (double t : {0.0, 0.3, 1.7}) {
    EXPECT_NEAR(h(t), (g(t + step) - g(t - step)) / (2 * step), 1e-8);
    const double fd2 = (g(t + step) - 2 * g(t) + g(t - step)) / (step * step);
    EXPECT_NEAR(h.derivative(t, 1), fd2, 1e-4);
  }
  // a e^{-lambda t} is annihilated
  const Function decay = Function::exp_weighted_derivative(Function({Preset::exp_decay, {2, lambda}}), lambda);
  EXPECT_NEAR(decay(1.3), 0.0, 1e-15);
}

TEST(Function, SampledInterpolatesAndHoldsEnds) {
  const Function s = Function::sampled({0, 1, 2}, {0, 2, 3}, {5, 6, 7});
  EXPECT_DOUBLE_EQ(s(0.5), 1.0);
  EXPECT_DOUBLE_EQ(s(1.5), 2.5);
  EXPECT_DOUBLE_EQ(s.derivative(0.25, 1), 5.25);
  EXPECT_DOUBLE_EQ(s(-1.0), 0.0);
  EXPECT_DOUBLE_EQ(s(9.0), 3.0);
  EXPECT_EQ(s.max_order(), 1);
}

TEST(Function, SampledNonUniformGrid) {
  std::vector<double> xs{0.0, 0.1, 0.5, 0.55, 2.0};
  std::vector<double> ys, zs;
  for (double x : xs) {
    ys.push_back(x * x);
    zs.push_back(2 * x);
  }
  const Function s = Function::sampled(xs, ys, zs);
  EXPECT_NEAR(s(0.3), 0.01 + (0.25 - 0.01) * 0.5, 1e-15);
  EXPECT_NEAR(s(0.52), 0.25 + (0.3025 - 0.25) * 0.4, 1e-15);
  EXPECT_NEAR(s(1.0), 0.3025 + (4.0 - 0.3025) * (0.45 / 1.45), 1e-14);
}

TEST(Function, SampledRejectsBadGrids) {
  EXPECT_THROW(Function::sampled({0}, {1}, {1}), fbp::Error);
  EXPECT_THROW(Function::sampled({0, 0}, {1, 1}, {1, 1}), fbp::Error);
  EXPECT_THROW(Function::sampled({1, 0}, {1, 1}, {1, 1}), fbp::Error);
  EXPECT_THROW(Function::sampled({0, 1}, {1}, {1, 1}), fbp::Error);
}

TEST(Function, RangeHelpers) {
  const Function f({Preset::polynomial, {0, -2, 1}});  // (x - 1)^2 - 1
  EXPECT_NEAR(f.min(0, 2), -1.0, 1e-12);
  EXPECT_NEAR(f.max(0, 3), 3.0, 1e-12);
  EXPECT_NEAR(f.sup_abs(0, 2, 1), 2.0, 1e-12);
}

TEST(Function, DefaultIsZero) {
  const Function z;
  EXPECT_EQ(z(3.0), 0.0);
  EXPECT_EQ(z.derivative(3.0, 5), 0.0);
  EXPECT_FALSE(z.spec().has_value());
  EXPECT_TRUE(Function({Preset::constant, {1}}).spec().has_value());
}
