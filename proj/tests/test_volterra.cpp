#include <cmath>

#include <gtest/gtest.h>

#include "fbp/errors.hpp"
#include "fbp/problem.hpp"
#include "fbp/stationary.hpp"
#include "fbp/volterra.hpp"

using namespace fbp;

namespace {

ProblemData decay_problem(double sigma0 = 1.0) {
  ProblemData p;
  p.lambda = 1.0;
  p.sigma_tilde = 0.5;
  p.b = 1.0;
  p.f = {Preset::exp_decay, {sigma0, 1.0}};
  p.phi = {Preset::constant, {sigma0}};
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

double decay_s(double t, double sigma0 = 1.0, double b = 1.0) {
  return b * std::exp(sigma0 * (1 - std::exp(-t)) - 0.5 * t);
}

SolverConfig coarse(double window, double horizon = 1.0) {
  SolverConfig c;
  c.dt = 1e-2;
  c.window = window;
  c.horizon = horizon;
  return c;
}

// the fixed point of the stationary problem, sampled on a grid
BoundaryState stationary_state(double b, int n, double dt) {
  std::vector<double> v(n + 1), sp(n + 1, 0.0);
  for (int i = 0; i <= n; ++i) v[i] = std::exp(i * dt) / std::cosh(b);
  return BoundaryState::from_iterate(b, dt, v, sp);
}

}  // namespace

TEST(EvalJ, ZeroDataGivesZero) {
  AuxiliaryData aux;
  aux.b = 1.0;
  aux.f = Function({Preset::constant, {0.0}});
  aux.f_tilde = Function({Preset::constant, {0.0}});
  aux.phi_tilde = Function({Preset::constant, {0.0}});
  const auto st = BoundaryState::from_iterate(1.0, 0.1, std::vector<double>(6, 0.0),
                                              std::vector<double>(6, 0.0));
  for (double x : {0.0, 0.3, 1.0}) EXPECT_EQ(eval_J(aux, st, x, 0.5), 0.0);
}

TEST(EvalJ, InitialLayerAtSmallTime) {
  const auto aux = to_auxiliary(stationary_problem());
  const double dt = 1e-7;
  const auto st = stationary_state(aux.b, 2, dt);
  for (double x : {0.3, 0.9, 1.5}) {
    EXPECT_NEAR(eval_J(aux, st, x, 2 * dt), aux.phi_tilde(x), 1e-3) << x;
  }
  EXPECT_EQ(eval_J(aux, st, 0.7, 0.0), aux.phi_tilde(0.7));
}

TEST(EvalJ, MatchesStationaryField) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto st = stationary_state(aux.b, 50, 1e-2);
  const auto prof = stationary_profile(aux.b, 1.0, 1.0);
  for (double x : {0.0, 0.5, 1.2, aux.b}) {
    EXPECT_NEAR(eval_J(aux, st, x, 0.5), std::exp(0.5) * prof.d1(x), 5e-3) << x;
  }
}

TEST(EvalJ, OutOfDomain) {
  const auto aux = to_auxiliary(decay_problem());
  const auto st = BoundaryState::from_iterate(1.0, 0.1, std::vector<double>(3, 0.0),
                                              std::vector<double>(3, 0.0));
  for (auto [x, t] : {std::pair{1.5, 0.1}, std::pair{-0.1, 0.1}, std::pair{0.5, 0.3}}) {
    try {
      eval_J(aux, st, x, t);
      FAIL() << x << " " << t;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::OutOfDomain);
    }
  }
}

TEST(ApplyA, ZeroData) {
  AuxiliaryData aux;
  aux.b = 1.0;
  aux.f = Function({Preset::constant, {1.0}});
  aux.f_tilde = Function({Preset::constant, {0.0}});
  aux.phi_tilde = Function({Preset::constant, {0.0}});
  const auto st = BoundaryState::from_iterate(1.0, 0.05, std::vector<double>(11, 0.0),
                                              std::vector<double>(11, 0.2));
  for (double a : apply_A(aux, st)) EXPECT_EQ(a, 0.0);
}

TEST(ApplyA, StartsAtInitialSlope) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto st = BoundaryState::from_iterate(1.4, 0.05, std::vector<double>(5, 3.0),
                                              std::vector<double>(5, -0.1));
  EXPECT_EQ(apply_A(aux, st)[0], aux.phi_tilde.derivative(1.4, 1));
}

TEST(ApplyA, StationaryFixedPoint) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto st = stationary_state(aux.b, 50, 1e-2);
  const auto a = apply_A(aux, st);
  EXPECT_NEAR(a[0], 1.0 / std::cosh(aux.b), 1e-14);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_NEAR(a[i], st.v[i], 2e-3 * st.v[i]) << i;
  }
}

TEST(ApplyB, DecayReducesToOde) {
  const auto aux = to_auxiliary(decay_problem());
  std::vector<double> sp(21);
  for (int i = 0; i <= 20; ++i) sp[i] = 0.3 - 0.01 * i;
  const auto st = BoundaryState::from_iterate(1.0, 0.05, std::vector<double>(21, 0.0), sp);
  const auto b = apply_B(aux, st);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(b[i], (std::exp(-st.times[i]) - 0.5) * st.s[i], 1e-14);
  }
  EXPECT_NEAR(b[0], (1.0 - 0.5) * 1.0, 1e-15);
}

TEST(ApplyB, StationaryFixedPointIsMotionless) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto st = stationary_state(aux.b, 50, 1e-2);
  for (double b : apply_B(aux, st)) EXPECT_NEAR(b, 0.0, 1e-3);
}

TEST(SolveWindow, DecayClosedForm) {
  const auto aux = to_auxiliary(decay_problem());
  const auto r = solve_window(aux, coarse(1.0), 1.0);
  for (double v : r.state.v) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(r.state.s.back(), decay_s(1.0), 1e-5);
  EXPECT_NEAR(r.state.s.back(), 1.14125, 1e-5);
  for (std::size_t i = 0; i < r.state.s.size(); i += 10) {
    EXPECT_NEAR(r.state.sprime[i], (std::exp(-r.state.times[i]) - 0.5) * r.state.s[i], 1e-5);
  }
}

TEST(SolveWindow, StationaryFixedPoint) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto r = solve_window(aux, coarse(0.5), aux.b);
  for (std::size_t i = 0; i < r.state.s.size(); ++i) {
    EXPECT_NEAR(r.state.s[i], aux.b, 1e-4 * aux.b);
    const double v = std::exp(r.state.times[i]) / std::cosh(aux.b);
    EXPECT_NEAR(r.state.v[i], v, 1e-3 * v);
  }
  EXPECT_LT(r.diagnostics.contraction_factor, 0.5);
  EXPECT_LE(r.diagnostics.initial_value_residual, r.diagnostics.initial_value_tolerance);
}

TEST(SolveWindow, FixedPointResidual) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto cfg = coarse(0.3);
  const auto r = solve_window(aux, cfg, aux.b);
  const auto a = apply_A(aux, r.state);
  const auto b = apply_B(aux, r.state);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_LE(std::abs(a[i] - r.state.v[i]), 2 * cfg.picard_tol);
    EXPECT_LE(std::abs(b[i] - r.state.sprime[i]), 2 * cfg.picard_tol);
  }
  EXPECT_EQ(r.state.v[0], aux.phi_tilde.derivative(aux.b, 1));
}

TEST(SolveWindow, OversizedWindowFailsToContract) {
  // s' ~ 29.5 s: Picard on a unit window cannot contract
  const auto aux = to_auxiliary(decay_problem(30.0));
  try {
    solve_window(aux, coarse(1.0), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ContractionFailure) << e.what();
  }
}

TEST(SolveWindow, IterationBudget) {
  const auto aux = to_auxiliary(stationary_problem());
  auto cfg = coarse(0.5);
  cfg.picard_max = 1;
  try {
    solve_window(aux, cfg, aux.b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MaxIterations);
  }
}

TEST(SolveGlobal, DecayOverTwo) {
  const auto aux = to_auxiliary(decay_problem());
  auto cfg = coarse(0.1, 2.0);
  cfg.dt = 1e-3;
  const auto g = solve_global(aux, cfg);
  EXPECT_NEAR(g.solution.s.back(), decay_s(2.0), 1e-5);
  EXPECT_NEAR(g.solution.s.back(), 0.87342, 1e-5);
  EXPECT_EQ(g.solution.kind, FieldKind::auxiliary);
  EXPECT_LT(g.solution.trapezoid_defect(), 1e-12);
}

TEST(SolveGlobal, StationaryStaysDormant) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto g = solve_global(aux, coarse(0.1, 2.0));
  for (double s : g.solution.s) EXPECT_LE(std::abs(s - aux.b) / aux.b, 1e-3);
  EXPECT_GT(g.windows.size(), 1u);
  for (const auto& w : g.windows) {
    EXPECT_LE(w.initial_value_residual, w.initial_value_tolerance) << w.start;
  }
}

TEST(SolveGlobal, ZeroHorizonEchoesInitialState) {
  const auto aux = to_auxiliary(stationary_problem());
  const auto g = solve_global(aux, coarse(0.1, 0.0));
  ASSERT_EQ(g.solution.times.size(), 1u);
  EXPECT_EQ(g.solution.s[0], aux.b);
  ASSERT_EQ(g.solution.snapshots.size(), 1u);
  const auto& snap = g.solution.snapshots[0];
  for (std::size_t i = 0; i < snap.xs.size(); ++i) EXPECT_EQ(snap.values[i], aux.phi_tilde(snap.xs[i]));
}

TEST(SolveGlobal, SnapshotsAtRequestedTimes) {
  const auto aux = to_auxiliary(decay_problem());
  auto cfg = coarse(0.2, 1.0);
  cfg.snapshot_times = {0.25, 0.5, 1.0};
  const auto g = solve_global(aux, cfg);
  ASSERT_EQ(g.solution.snapshots.size(), 4u);
  EXPECT_NEAR(g.solution.snapshots[1].t, 0.25, 1e-12);
  EXPECT_NEAR(g.solution.snapshots.back().xs.back(), g.solution.s.back(), 1e-12);
  // decay data keep u~ identically zero
  for (const auto& snap : g.solution.snapshots) {
    for (double v : snap.values) EXPECT_EQ(v, 0.0);
  }
}

TEST(SolveGlobal, HalvesWindowsOnFailure) {
  const auto aux = to_auxiliary(decay_problem(30.0));
  auto cfg = coarse(0.8, 0.4);
  cfg.dt = 1e-3;
  const auto g = solve_global(aux, cfg);
  EXPECT_FALSE(g.log.empty());
  EXPECT_NEAR(g.solution.s.back(), decay_s(0.4, 30.0), 1e-3 * decay_s(0.4, 30.0));
}

TEST(SolveGlobal, WindowUnderflow) {
  const auto aux = to_auxiliary(decay_problem(30.0));
  auto cfg = coarse(0.1, 1.0);
  cfg.dt = 0.05;
  cfg.window = 0.4;
  try {
    solve_global(aux, cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::WindowUnderflow) << e.what();
  }
}

TEST(SolveGlobal, RefinementReducesError) {
  const auto aux = to_auxiliary(stationary_problem());
  std::vector<double> errors;
  for (double dt : {4e-2, 2e-2, 1e-2}) {
    auto cfg = coarse(0.2, 0.4);
    cfg.dt = dt;
    const auto g = solve_global(aux, cfg);
    const double v = std::exp(0.4) / std::cosh(aux.b);
    errors.push_back(std::abs(g.v.back() - v) / v);
  }
  for (std::size_t k = 1; k < errors.size(); ++k) {
    const double order = std::log2(errors[k - 1] / errors[k]);
    std::printf("dt refinement %zu: v error %.3e, observed order %.2f\n", k, errors[k], order);
    EXPECT_LT(errors[k], errors[k - 1]);
  }
}

TEST(SolverConfig, Validation) {
  SolverConfig c;
  c.contraction_max = 1.0;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.window = c.dt / 2;
  EXPECT_THROW(c.validate(), Error);
  c = SolverConfig{};
  c.dt = 0.0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(BoundaryState, CollapseDetected) {
  try {
    BoundaryState::from_iterate(0.1, 0.1, {0, 0, 0}, {-1, -1, -1});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BoundaryCollapse);
  }
  const auto st = BoundaryState::from_iterate(1.0, 0.5, {0, 0, 0}, {0, 1, 1});
  EXPECT_DOUBLE_EQ(st.s[2], 1.75);
  EXPECT_DOUBLE_EQ(st.s_at(0.75), 0.5 * (1.25 + 1.75));
}
