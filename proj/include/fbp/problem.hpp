#pragma once

// Problem data for the primal problem (concentration u, boundary s) and the
// auxiliary problem (u~ = exp(lambda t) u_x), the corner compatibility
// checks, and the maps between solutions of the two problems.

#include <string>
#include <vector>

#include "fbp/function.hpp"

namespace fbp {

struct ProblemData {
  double lambda = 1.0;
  double sigma_tilde = 0.5;
  double b = 1.0;
  FunctionSpec f;    // boundary concentration u(0, t)
  FunctionSpec phi;  // initial profile u(x, 0) on [0, b]

  /// Throws InvalidArgument unless lambda, sigma_tilde, b > 0 and both
  /// presets are well formed.
  void validate() const;

  Function f_fn() const { return Function(f); }
  Function phi_fn() const { return Function(phi); }
};

struct AuxiliaryData {
  double lambda = 1.0;
  double sigma_tilde = 0.5;
  double b = 1.0;
  Function f;          // u(0, t), still needed by the boundary velocity
  Function f_tilde;    // u~_x(0, t)
  Function phi_tilde;  // u~(x, 0); derivative order 1 required

  /// |f~(0) - phi~'(0)| and |phi~(b)|.
  double corner_residual() const;
};

struct CompatibilityOptions {
  bool strict_positivity = true;
  double horizon = 1.0;
  double tolerance = 1e-10;  // relative to the data scale
};

struct CompatibilityReport {
  double value_residual = 0.0;       // |f(0) - phi(0)|
  double derivative_residual = 0.0;  // |f'(0) - phi''(0) + lambda phi(0)|
  double neumann_residual = 0.0;     // |phi'(b)|
  double min_f = 0.0;                // over [0, horizon]
  double min_phi = 0.0;              // over [0, b]
  double scale = 1.0;
  double tolerance = 0.0;  // absolute, tolerance * scale
  bool positivity_required = true;
  bool passed = false;

  std::string describe() const;
};

CompatibilityReport check_compatibility(const ProblemData& p, const CompatibilityOptions& opts = {});

/// f~(t) = d/dt (exp(lambda t) f(t)), phi~ = phi'. Throws IncompatibleData
/// when the corner conditions fail (positivity is not required here).
AuxiliaryData to_auxiliary(const ProblemData& p, double tolerance = 1e-10);

struct FieldSnapshot {
  double t = 0.0;
  std::vector<double> xs;  // 0 = xs.front() < ... < xs.back() = s(t)
  std::vector<double> values;
};

enum class FieldKind { primal, auxiliary };

struct FreeBoundarySolution {
  FieldKind kind = FieldKind::primal;
  std::vector<double> times;  // strictly increasing, times.front() == 0
  std::vector<double> s;
  std::vector<double> sprime;
  std::vector<FieldSnapshot> snapshots;

  bool empty() const { return times.empty(); }
  double horizon() const { return times.empty() ? 0.0 : times.back(); }
  /// Linear interpolation of s at t within [0, horizon].
  double s_at(double t) const;
  /// Worst |s[i+1] - s[i] - trapezoid(sprime, i, i+1)|.
  double trapezoid_defect() const;
};

/// u(x, t) = f(t) + exp(-lambda t) * cumulative trapezoid of u~(., t) on [0, x].
FreeBoundarySolution reconstruct_primal(const FreeBoundarySolution& aux_solution, const Function& f,
                                        double lambda);

/// u~(x, t) = exp(lambda t) u_x(x, t) with second-order differences. Each
/// snapshot needs at least five samples.
FreeBoundarySolution derive_auxiliary_field(const FreeBoundarySolution& primal_solution,
                                            double lambda);

/// Second-order derivative samples on a possibly non-uniform grid (centered
/// in the interior, three-point one-sided at the ends).
std::vector<double> differentiate(const std::vector<double>& xs, const std::vector<double>& ys);

/// Cumulative trapezoid, out[0] = 0.
std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys);

}  // namespace fbp
