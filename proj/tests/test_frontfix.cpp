#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fbp/errors.hpp"
#include "fbp/frontfix.hpp"
#include "fbp/stationary.hpp"

using namespace fbp;
using namespace fbp::frontfix;

namespace {

ProblemData decay_problem(double sigma_tilde = 0.5) {
  ProblemData p;
  p.lambda = 1.0;
  p.sigma_tilde = sigma_tilde;
  p.b = 1.0;
  p.f = {Preset::exp_decay, {1.0, 1.0}};
  p.phi = {Preset::constant, {1.0}};
  return p;
}

ProblemData stationary_problem() {
  const double b = solve_dormant_thickness(1.0, 1.0, 0.5);
  ProblemData p;
  p.lambda = 1.0;
  p.sigma_tilde = 0.5;
  p.b = b;
  p.f = {Preset::constant, {1.0}};
  p.phi = stationary_profile(b, 1.0, 1.0).spec();
  return p;
}

double decay_s(double t) { return std::exp((1 - std::exp(-t)) - 0.5 * t); }

FixedGridState uniform_state(int n, double value, double s = 1.0, double sprime = 0.0) {
  FixedGridState st;
  st.s = s;
  st.sprime = sprime;
  st.u.assign(static_cast<std::size_t>(n) + 1, value);
  return st;
}

}  // namespace

TEST(TransformedRhs, ConstantField) {
  const auto r = transformed_rhs(uniform_state(16, 2.0), 0.7);
  EXPECT_EQ(r[0], 0.0);
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_NEAR(r[i], -1.4, 1e-14);
}

TEST(TransformedRhs, LinearField) {
  FixedGridState st = uniform_state(10, 0.0, 1.3);
  for (int i = 0; i <= 10; ++i) st.u[i] = 0.5 + 2.0 * i / 10.0;
  const auto r = transformed_rhs(st, 1.5);
  for (int i = 1; i < 10; ++i) EXPECT_NEAR(r[i], -1.5 * (0.5 + 2.0 * i / 10.0), 1e-12);
}

TEST(TransformedRhs, StationaryProfileIsSteady) {
  const auto p = stationary_problem();
  const auto prof = stationary_profile(p.b, 1.0, 1.0);
  for (int n : {32, 64}) {
    FixedGridState st = uniform_state(n, 0.0, p.b);
    for (int i = 0; i <= n; ++i) st.u[i] = prof.value(p.b * i / n);
    const auto r = transformed_rhs(st, 1.0);
    const double dy = 1.0 / n;
    for (double v : r) EXPECT_LT(std::abs(v), 0.5 * dy * dy);
  }
}

TEST(NonlocalVelocity, Examples) {
  EXPECT_NEAR(nonlocal_velocity(uniform_state(8, 0.5), 0.5), 0.0, 1e-15);
  EXPECT_NEAR(nonlocal_velocity(uniform_state(8, 1.2, 1.7), 0.5), 0.7 * 1.7, 1e-14);

  const auto p = stationary_problem();
  const auto prof = stationary_profile(p.b, 1.0, 1.0);
  FixedGridState st = uniform_state(512, 0.0, p.b);
  for (int i = 0; i <= 512; ++i) st.u[i] = prof.value(p.b * i / 512);
  EXPECT_NEAR(nonlocal_velocity(st, 0.5), 0.0, 1e-5);
}

TEST(InitialState, MatchesData) {
  const auto st = initial_state(decay_problem(), 16);
  EXPECT_EQ(st.s, 1.0);
  EXPECT_NEAR(st.sprime, 0.5, 1e-15);
  EXPECT_EQ(st.u.size(), 17u);
}

TEST(Step, StationaryStaysDormant) {
  const auto p = stationary_problem();
  const auto prof = stationary_profile(p.b, 1.0, 1.0);
  Config cfg;
  cfg.horizon = 2.0;
  cfg.n_y = 128;
  cfg.dt = 1e-3;
  cfg.snapshot_stride = 100;
  const auto sol = solve(p, cfg);
  for (double s : sol.s) EXPECT_LE(std::abs(s - p.b) / p.b, 1e-3);
  for (const auto& snap : sol.snapshots) {
    for (std::size_t i = 0; i < snap.xs.size(); ++i) {
      EXPECT_LE(std::abs(snap.values[i] - prof.value(snap.xs[i])), 1e-2);
    }
  }
}

TEST(Step, DecayClosedFormAtOne) {
  Config cfg;
  cfg.horizon = 1.0;
  const auto sol = solve(decay_problem(), cfg);
  EXPECT_NEAR(sol.s.back() / decay_s(1.0), 1.0, 1e-3);
  EXPECT_NEAR(sol.s.back(), 1.14125, 1e-4);
}

TEST(Step, LargeThresholdShrinks) {
  const auto p = decay_problem(5.0);
  Config cfg;
  cfg.horizon = 1.0;
  cfg.n_y = 64;
  cfg.dt = 1e-3;
  const auto sol = solve(p, cfg);
  const double c_t = 1.0;
  for (std::size_t i = 1; i < sol.s.size(); ++i) {
    EXPECT_LT(sol.s[i], sol.s[i - 1]);
    EXPECT_GE(sol.sprime[i], -(c_t + p.sigma_tilde) * sol.s[i]);
  }
}

TEST(Step, ExplicitGuard) {
  const auto p = decay_problem();
  const auto st = initial_state(p, 64);
  try {
    step(st, 1e-3, p, Scheme::explicit_euler);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StabilityGuard);
  }
  EXPECT_NO_THROW(step(st, 1e-3, p, Scheme::implicit));
}

TEST(Step, ExplicitAgreesWithImplicit) {
  const auto p = stationary_problem();
  Config cfg;
  cfg.horizon = 0.5;
  cfg.n_y = 32;
  cfg.dt = 1e-3;
  const auto a = solve(p, cfg);
  cfg.scheme = Scheme::explicit_euler;
  const auto b = solve(p, cfg);
  EXPECT_NEAR(a.s.back(), b.s.back(), 1e-5);
}

TEST(Step, BoundaryCollapse) {
  auto p = decay_problem(1000.0);
  try {
    step(initial_state(p, 16), 0.01, p);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryCollapse);
  }
}

TEST(Solve, ZeroHorizonEchoesInitialData) {
  const auto p = stationary_problem();
  Config cfg;
  cfg.horizon = 0.0;
  cfg.n_y = 16;
  const auto sol = solve(p, cfg);
  ASSERT_EQ(sol.times.size(), 1u);
  ASSERT_EQ(sol.snapshots.size(), 1u);
  const Function phi(p.phi);
  for (std::size_t i = 0; i < sol.snapshots[0].xs.size(); ++i) {
    EXPECT_DOUBLE_EQ(sol.snapshots[0].values[i], phi(sol.snapshots[0].xs[i]));
  }
  EXPECT_EQ(sol.s[0], p.b);
}

TEST(Solve, DecayOverTwo) {
  Config cfg;
  cfg.horizon = 2.0;
  cfg.snapshot_times = {0.5, 2.0};
  const auto sol = solve(decay_problem(), cfg);
  EXPECT_NEAR(sol.s.back(), 0.87342, 1e-4);
  EXPECT_NEAR(sol.s.back() / decay_s(2.0), 1.0, 1e-3);
  ASSERT_EQ(sol.snapshots.size(), 3u);
  EXPECT_NEAR(sol.snapshots[1].t, 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(sol.snapshots.back().xs.back(), sol.s.back());
}

TEST(Solve, DiscreteMaximumPrinciple) {
  for (const auto& p : {decay_problem(), stationary_problem()}) {
    Config cfg;
    cfg.horizon = 2.0;
    cfg.n_y = 128;
    cfg.dt = 1e-3;
    cfg.snapshot_stride = 1;
    const auto sol = solve(p, cfg);
    const double c_t = std::max(Function(p.f).max(0, 2), Function(p.phi).max(0, p.b));
    for (const auto& snap : sol.snapshots) {
      const auto [lo, hi] = std::minmax_element(snap.values.begin(), snap.values.end());
      EXPECT_GE(*lo, -1e-8);
      EXPECT_LE(*hi, c_t * (1 + 1e-6));
    }
  }
}

TEST(Solve, RefinementConvergence) {
  double prev = 0.0;
  int n_y = 32;
  double dt = 1.6e-3;
  for (int level = 0; level < 3; ++level) {
    Config cfg;
    cfg.horizon = 1.0;
    cfg.n_y = n_y;
    cfg.dt = dt;
    const double err = std::abs(solve(decay_problem(), cfg).s.back() - decay_s(1.0));
    if (level > 0) {
      std::printf("n_y %d dt %g: error %.3e, ratio %.2f\n", n_y, dt, err, prev / err);
      EXPECT_GE(prev / err, 3.0);
    }
    prev = err;
    n_y *= 2;
    dt /= 4;
  }
}

TEST(Config, Validation) {
  Config c;
  c.n_y = 2;
  EXPECT_THROW(c.validate(), Error);
  c = Config{};
  c.snapshot_times = {2.0};
  EXPECT_THROW(c.validate(), Error);
}
