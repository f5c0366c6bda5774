#pragma once

// A posteriori checks on computed solutions: the maximum principle and the
// exponential envelopes for the front, the identity
//
//   s'' = [u(s,t) - sigma_tilde - lambda] s' - u_x(0,t) - lambda sigma_tilde s
//
// and agreement between two solutions of the same problem.

#include <optional>
#include <string>

#include "fbp/problem.hpp"

namespace fbp::validation {

struct BoundReport {
  std::string name;
  double worst_violation = 0.0;  // <= 0 means the bound holds outright
  std::optional<double> x;       // location of the worst violation
  double t = 0.0;
  double slack_used = 0.0;
  bool passed = false;
};

/// max(sup f over [0, horizon], sup phi over [0, b]); with `absolute` the
/// sups are taken of |f| and |phi|.
double bound_constant(const ProblemData& data, double horizon, bool absolute);

/// 0 <= u <= C_T (or |u| <= C_T when relaxed) over every snapshot. The
/// violation is absolute; slack is 1% of C_T.
BoundReport check_field_bounds(const FreeBoundarySolution& sol, const ProblemData& data,
                               bool relaxed = false);

/// Envelopes for s' and s. Strict:
///   -sigma_tilde s <= s' <= (C_T - sigma_tilde) s,  b e^{-sigma_tilde t} <= s <= b e^{(C_T - sigma_tilde) t}
/// Relaxed replaces sigma_tilde by C_T + sigma_tilde on the lower side.
/// Violations are relative (s' against (C_T + sigma_tilde) s); slack 1%.
BoundReport check_boundary_bounds(const FreeBoundarySolution& sol, const ProblemData& data,
                                  bool relaxed = false);

/// Centered second difference of s against the identity's right side at
/// every snapshot lying strictly inside the time grid. Tolerance is
/// 10 (dt + dx^2) scale with scale = 1 + the largest term magnitude. Needs a
/// primal solution with at least one such snapshot of >= 5 samples.
BoundReport check_s_second_derivative(const FreeBoundarySolution& sol, const ProblemData& data);

struct CrossValidation {
  double s_error = 0.0;  // sup |s_a - s_b| / |s_b| over a's times in the common range
  double u_error = 0.0;  // sup |u_a - u_b| over snapshots present in both
  double t_begin = 0.0;
  double t_end = 0.0;
  int snapshot_pairs = 0;
};

/// Throws DisjointRanges when the time ranges do not overlap and
/// InvalidArgument when the kinds differ.
CrossValidation cross_validate(const FreeBoundarySolution& a, const FreeBoundarySolution& b);

}  // namespace fbp::validation
