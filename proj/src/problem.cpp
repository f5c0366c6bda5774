#include "fbp/problem.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fbp/errors.hpp"

namespace fbp {

void ProblemData::validate() const {
  if (!(lambda > 0.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be > 0");
  if (!(sigma_tilde > 0.0)) throw Error(ErrorKind::InvalidArgument, "sigma_tilde must be > 0");
  if (!(b > 0.0)) throw Error(ErrorKind::InvalidArgument, "b must be > 0");
  Function check_f(f);
  Function check_phi(phi);
  if (check_phi.max_order() < 3) {
    throw Error(ErrorKind::InvalidArgument, "phi needs derivatives up to order 3");
  }
  if (check_f.max_order() < 2) {
    throw Error(ErrorKind::InvalidArgument, "f needs derivatives up to order 2");
  }
}

double AuxiliaryData::corner_residual() const {
  return std::max(std::abs(f_tilde(0.0) - phi_tilde.derivative(0.0, 1)), std::abs(phi_tilde(b)));
}

std::string CompatibilityReport::describe() const {
  std::ostringstream out;
  out.precision(6);
  out << "|f(0)-phi(0)| = " << value_residual << ", |f'(0)-phi''(0)+lambda phi(0)| = "
      << derivative_residual << ", |phi'(b)| = " << neumann_residual << " (tolerance " << tolerance
      << "); min f = " << min_f << ", min phi = " << min_phi
      << (positivity_required ? " (positivity required)" : " (positivity relaxed)") << " -> "
      << (passed ? "compatible" : "INCOMPATIBLE");
  return out.str();
}

CompatibilityReport check_compatibility(const ProblemData& p, const CompatibilityOptions& opts) {
  p.validate();
  const Function f = p.f_fn();
  const Function phi = p.phi_fn();

  CompatibilityReport r;
  const double f0 = f(0.0);
  const double phi0 = phi(0.0);
  const double df0 = f.derivative(0.0, 1);
  const double d2phi0 = phi.derivative(0.0, 2);
  const double dphib = phi.derivative(p.b, 1);

  r.value_residual = std::abs(f0 - phi0);
  r.derivative_residual = std::abs(df0 - d2phi0 + p.lambda * phi0);
  r.neumann_residual = std::abs(dphib);
  r.scale = 1.0 + std::max({std::abs(f0), std::abs(phi0), std::abs(df0), std::abs(d2phi0),
                            p.lambda * std::abs(phi0), phi.sup_abs(0.0, p.b, 1)});
  r.tolerance = opts.tolerance * r.scale;
  r.min_f = f.min(0.0, std::max(opts.horizon, 0.0), 2048);
  r.min_phi = phi.min(0.0, p.b, 2048);
  r.positivity_required = opts.strict_positivity;

  const bool corners = r.value_residual <= r.tolerance && r.derivative_residual <= r.tolerance &&
                       r.neumann_residual <= r.tolerance;
  const bool positive = !opts.strict_positivity || (r.min_f > 0.0 && r.min_phi > 0.0);
  r.passed = corners && positive;
  return r;
}

AuxiliaryData to_auxiliary(const ProblemData& p, double tolerance) {
  const auto report =
      check_compatibility(p, {.strict_positivity = false, .horizon = 0.0, .tolerance = tolerance});
  if (!report.passed) throw Error(ErrorKind::IncompatibleData, report.describe());

  AuxiliaryData aux;
  aux.lambda = p.lambda;
  aux.sigma_tilde = p.sigma_tilde;
  aux.b = p.b;
  aux.f = p.f_fn();
  aux.f_tilde = Function::exp_weighted_derivative(aux.f, p.lambda);
  aux.phi_tilde = Function::derivative_of(p.phi_fn());
  return aux;
}

double FreeBoundarySolution::s_at(double t) const {
  if (times.empty()) throw Error(ErrorKind::EmptySolution, "solution has no samples");
  if (t <= times.front()) return s.front();
  if (t >= times.back()) return s.back();
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  const auto i = static_cast<std::size_t>(it - times.begin()) - 1;
  const double w = (t - times[i]) / (times[i + 1] - times[i]);
  return (1.0 - w) * s[i] + w * s[i + 1];
}

double FreeBoundarySolution::trapezoid_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i + 1 < times.size(); ++i) {
    const double step = 0.5 * (times[i + 1] - times[i]) * (sprime[i] + sprime[i + 1]);
    worst = std::max(worst, std::abs(s[i + 1] - s[i] - step));
  }
  return worst;
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& xs,
                                         const std::vector<double>& ys) {
  std::vector<double> out(xs.size(), 0.0);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (xs[i] - xs[i - 1]) * (ys[i] + ys[i - 1]);
  }
  return out;
}

std::vector<double> differentiate(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 3 || ys.size() != n) {
    throw Error(ErrorKind::TooFewSamples, "differentiation needs at least 3 samples");
  }
  std::vector<double> d(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h1 = xs[i] - xs[i - 1];
    const double h2 = xs[i + 1] - xs[i];
    d[i] = -h2 / (h1 * (h1 + h2)) * ys[i - 1] + (h2 - h1) / (h1 * h2) * ys[i] +
           h1 / (h2 * (h1 + h2)) * ys[i + 1];
  }
  {
    const double h1 = xs[1] - xs[0];
    const double h2 = xs[2] - xs[1];
    d[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * ys[0] + (h1 + h2) / (h1 * h2) * ys[1] -
           h1 / (h2 * (h1 + h2)) * ys[2];
  }
  {
    const double h1 = xs[n - 2] - xs[n - 3];
    const double h2 = xs[n - 1] - xs[n - 2];
    d[n - 1] = h2 / (h1 * (h1 + h2)) * ys[n - 3] - (h1 + h2) / (h1 * h2) * ys[n - 2] +
               (h1 + 2.0 * h2) / (h2 * (h1 + h2)) * ys[n - 1];
  }
  return d;
}

FreeBoundarySolution reconstruct_primal(const FreeBoundarySolution& aux_solution, const Function& f,
                                        double lambda) {
  if (aux_solution.kind != FieldKind::auxiliary) {
    throw Error(ErrorKind::InvalidArgument, "reconstruct_primal expects an auxiliary solution");
  }
  if (aux_solution.empty()) throw Error(ErrorKind::EmptySolution, "no boundary samples");

  FreeBoundarySolution out = aux_solution;
  out.kind = FieldKind::primal;
  for (auto& snap : out.snapshots) {
    const double boundary = f(snap.t);
    const double decay = std::exp(-lambda * snap.t);
    const auto integral = cumulative_trapezoid(snap.xs, snap.values);
    for (std::size_t j = 0; j < integral.size(); ++j) snap.values[j] = boundary + decay * integral[j];
  }
  return out;
}

FreeBoundarySolution derive_auxiliary_field(const FreeBoundarySolution& primal_solution,
                                            double lambda) {
  if (primal_solution.kind != FieldKind::primal) {
    throw Error(ErrorKind::InvalidArgument, "derive_auxiliary_field expects a primal solution");
  }
  FreeBoundarySolution out = primal_solution;
  out.kind = FieldKind::auxiliary;
  for (auto& snap : out.snapshots) {
    if (snap.xs.size() < 5) {
      throw Error(ErrorKind::TooFewSamples,
                  "snapshot at t=" + std::to_string(snap.t) + " has fewer than 5 samples");
    }
    auto ux = differentiate(snap.xs, snap.values);
    const double grow = std::exp(lambda * snap.t);
    for (auto& v : ux) v *= grow;
    snap.values = std::move(ux);
  }
  return out;
}

}  // namespace fbp
