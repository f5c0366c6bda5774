#pragma once

// Integral-equation solver for the auxiliary problem.
//
// The unknowns are v(t) = u~_x(s(t), t) and s'(t). On a window [0, eps] they
// solve the fixed-point system (v, s') = (A(v, s'), B(v, s')) with
//
//   A(t) = 2 int_0^t N_x(s(t),t; s(tau),tau) v(tau) dtau
//        - 2 int_0^t N_x(s(t),t; 0,tau) f~(tau) dtau
//        + 2 int_0^b G(s(t),t; xi,0) phi~'(xi) dxi
//   B(t) = (f(t) - sigma~) s(t) + e^{-lambda t} int_0^s(t) int_0^x u~(xi,t) dxi dx
//
// where u~ = J1 + J2 + J3 is the heat-potential representation
//
//   J1 = int_0^t N(x,t; s(tau),tau) v(tau) dtau
//   J2 = -int_0^t N(x,t; 0,tau) f~(tau) dtau
//   J3 = int_0^b N(x,t; xi,0) phi~(xi) dxi
//
// and s(t) = b + int_0^t s'. Windows are chained by restarting from the
// sampled field at the end of the previous window.
//
// Time integrals are taken in w = sqrt(t - tau), which removes the
// (t - tau)^{-1/2} singularity, with the composite midpoint rule on as many
// w-cells as there are t-cells below t. Between grid nodes v and s are
// piecewise linear in tau.

#include <string>
#include <vector>

#include "fbp/problem.hpp"

namespace fbp {

struct SolverConfig {
  double dt = 1e-3;
  double window = 0.1;
  double picard_tol = 1e-10;
  int picard_max = 100;
  double contraction_max = 0.9;
  double horizon = 1.0;
  /// Points of the per-window spatial grid; 0 selects max(64, window steps).
  int spatial_points = 0;
  /// Field snapshots are emitted at the grid nodes nearest to these times.
  std::vector<double> snapshot_times;

  void validate() const;
};

struct BoundaryState {
  double dt = 0.0;
  std::vector<double> times;
  std::vector<double> v;
  std::vector<double> sprime;
  std::vector<double> s;

  /// s is rebuilt from s0 and sprime by the trapezoid rule. Throws
  /// BoundaryCollapse if it reaches s <= 0.
  static BoundaryState from_iterate(double s0, double dt, std::vector<double> v,
                                    std::vector<double> sprime);

  std::size_t steps() const { return times.size() - 1; }
  double end_time() const { return times.back(); }
  double s_at(double t) const;
  double v_at(double t) const;
};

struct WindowDiagnostics {
  double start = 0.0;  // global time of the window start
  double length = 0.0;
  int steps = 0;
  int iterations = 0;
  double contraction_factor = 0.0;  // largest ratio of successive iterate changes
  double final_change = 0.0;
  double initial_thickness = 0.0;
  // Data norms entering the local existence window.
  double norm_f = 0.0;
  double norm_f_tilde = 0.0;
  double norm_dphi_tilde = 0.0;
  // v(0) = phi~'(s0) against the t -> 0+ extrapolation of A.
  double initial_value_residual = 0.0;
  double initial_value_tolerance = 0.0;
  // |u~(s(t_end), t_end)| before the restart field is pinned to zero.
  double boundary_residual = 0.0;
};

struct WindowResult {
  BoundaryState state;
  WindowDiagnostics diagnostics;
};

/// u~(x, t) = J1 + J2 + J3 for 0 <= x <= s(t), 0 <= t <= state.end_time().
/// At t = 0 this is phi~(x).
double eval_J(const AuxiliaryData& aux, const BoundaryState& state, double x, double t);

/// Right side of the v-equation at every grid time; A(0) = phi~'(s0).
std::vector<double> apply_A(const AuxiliaryData& aux, const BoundaryState& state);

/// Right side of the s'-equation at every grid time.
std::vector<double> apply_B(const AuxiliaryData& aux, const BoundaryState& state,
                            int spatial_points = 0);

/// Picard iteration on [0, cfg.window] starting from constant extensions of
/// the t = 0 values. Throws ContractionFailure, MaxIterations or
/// BoundaryCollapse.
WindowResult solve_window(const AuxiliaryData& aux, const SolverConfig& cfg, double s0);

struct GlobalResult {
  FreeBoundarySolution solution;  // auxiliary kind: snapshots hold u~
  std::vector<double> v;          // u~_x(s(t), t) on solution.times
  std::vector<WindowDiagnostics> windows;
  std::vector<std::string> log;  // window rejections and retries
  double sup_utilde_x = 0.0;     // over boundary values and snapshots
};

/// Chains windows up to cfg.horizon, halving the window on contraction
/// failure. Throws WindowUnderflow once the window drops below 4 dt.
GlobalResult solve_global(const AuxiliaryData& aux, const SolverConfig& cfg);

}  // namespace fbp
