#pragma once

// Front-fixing finite differences for the primal problem. With y = x / s(t)
// the moving domain becomes [0, 1] and
//
//   u_t = u_yy / s^2 + y (s'/s) u_y - lambda u,   u(0, t) = f(t),  u_y(1, t) = 0
//   s'  = s int_0^1 (u - sigma_tilde) dy
//
// Used as an independent check of the integral-equation route.

#include <vector>

#include "fbp/problem.hpp"

namespace fbp::frontfix {

struct FixedGridState {
  double t = 0.0;
  double s = 0.0;
  double sprime = 0.0;
  std::vector<double> u;  // n_y + 1 samples on the uniform y-grid

  std::size_t intervals() const { return u.size() - 1; }
};

enum class Scheme { implicit, explicit_euler };

/// Initial state: u = phi(y b), s = b, s' from the nonlocal condition.
FixedGridState initial_state(const ProblemData& data, int n_y);

/// u_t at every node. Entry 0 is zero (Dirichlet node); the last entry uses
/// the ghost reflection u[n+1] = u[n-1].
std::vector<double> transformed_rhs(const FixedGridState& state, double lambda);

/// s * trapezoid over [0, 1] of (u - sigma_tilde).
double nonlocal_velocity(const FixedGridState& state, double sigma_tilde);

/// One time step. The implicit scheme freezes 1/s^2 and the advection speed
/// at predicted values, solves, corrects s by the trapezoid rule in s' and
/// solves once more. The explicit variant throws StabilityGuard when
/// dt > 0.45 (s dy)^2. Throws BoundaryCollapse if s <= 0.
FixedGridState step(const FixedGridState& state, double dt, const ProblemData& data,
                    Scheme scheme = Scheme::implicit);

struct Config {
  double horizon = 1.0;
  int n_y = 256;
  double dt = 1e-4;
  Scheme scheme = Scheme::implicit;
  /// Snapshots at the grid times nearest to these (t = 0 always included).
  std::vector<double> snapshot_times;
  /// Additionally keep every k-th step as a snapshot (0 disables).
  int snapshot_stride = 0;

  void validate() const;
};

/// Full trajectory; dt is adjusted to horizon / round(horizon / dt).
FreeBoundarySolution solve(const ProblemData& data, const Config& cfg);

}  // namespace fbp::frontfix
