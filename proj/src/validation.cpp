#include "fbp/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fbp/errors.hpp"

namespace fbp::validation {

namespace {

constexpr double kSlack = 0.01;

void require_nonempty(const FreeBoundarySolution& sol) {
  if (sol.empty()) throw Error(ErrorKind::EmptySolution, "solution has no samples");
}

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x) {
  if (x <= xs.front()) return ys.front();
  if (x >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), x);
  const auto i = static_cast<std::size_t>(it - xs.begin()) - 1;
  const double w = (x - xs[i]) / (xs[i + 1] - xs[i]);
  return (1.0 - w) * ys[i] + w * ys[i + 1];
}

// grid index of t, or npos when t is not a node
std::size_t node_of(const std::vector<double>& times, double t) {
  const auto it = std::lower_bound(times.begin(), times.end(), t - 1e-9 * std::max(1.0, t));
  if (it == times.end() || std::abs(*it - t) > 1e-9 * std::max(1.0, t)) return std::string::npos;
  return static_cast<std::size_t>(it - times.begin());
}

}  // namespace

double bound_constant(const ProblemData& data, double horizon, bool absolute) {
  const Function f = data.f_fn();
  const Function phi = data.phi_fn();
  const double hi = std::max(horizon, 0.0);
  if (absolute) return std::max(f.sup_abs(0.0, hi, 0, 4096), phi.sup_abs(0.0, data.b, 0, 4096));
  return std::max(f.max(0.0, hi, 4096), phi.max(0.0, data.b, 4096));
}

BoundReport check_field_bounds(const FreeBoundarySolution& sol, const ProblemData& data,
                               bool relaxed) {
  require_nonempty(sol);
  if (sol.kind != FieldKind::primal) {
    throw Error(ErrorKind::InvalidArgument, "field bounds apply to primal solutions");
  }
  const double c_t = bound_constant(data, sol.horizon(), relaxed);
  BoundReport r;
  r.name = relaxed ? "field_bounds_relaxed" : "field_bounds";
  r.worst_violation = -std::numeric_limits<double>::infinity();
  r.slack_used = kSlack * c_t;
  for (const auto& snap : sol.snapshots) {
    for (std::size_t i = 0; i < snap.values.size(); ++i) {
      const double u = snap.values[i];
      const double v = relaxed ? std::abs(u) - c_t : std::max(-u, u - c_t);
      if (v > r.worst_violation) {
        r.worst_violation = v;
        r.x = snap.xs[i];
        r.t = snap.t;
      }
    }
  }
  r.passed = r.worst_violation <= r.slack_used;
  return r;
}

BoundReport check_boundary_bounds(const FreeBoundarySolution& sol, const ProblemData& data,
                                  bool relaxed) {
  require_nonempty(sol);
  const double c_t = bound_constant(data, sol.horizon(), relaxed);
  const double decay = relaxed ? c_t + data.sigma_tilde : data.sigma_tilde;
  const double growth = c_t - data.sigma_tilde;
  const double b = sol.s.front();

  BoundReport r;
  r.name = relaxed ? "boundary_bounds_relaxed" : "boundary_bounds";
  r.worst_violation = -std::numeric_limits<double>::infinity();
  r.slack_used = kSlack;
  const auto note = [&](double v, double t) {
    if (v > r.worst_violation) {
      r.worst_violation = v;
      r.t = t;
    }
  };
  for (std::size_t i = 0; i < sol.times.size(); ++i) {
    const double t = sol.times[i];
    const double s = sol.s[i];
    const double lo = b * std::exp(-decay * t);
    const double hi = b * std::exp(growth * t);
    note(std::max((lo - s) / lo, (s - hi) / hi), t);

    const double rate_scale = (c_t + data.sigma_tilde) * std::abs(s);
    if (rate_scale > 0.0) {
      const double sp = sol.sprime[i];
      note(std::max(-decay * s - sp, sp - growth * s) / rate_scale, t);
    }
  }
  r.passed = r.worst_violation <= r.slack_used;
  return r;
}

BoundReport check_s_second_derivative(const FreeBoundarySolution& sol, const ProblemData& data) {
  require_nonempty(sol);
  if (sol.kind != FieldKind::primal) {
    throw Error(ErrorKind::InvalidArgument, "the s'' identity needs a primal solution");
  }
  struct Row {
    double t, lhs, rhs, scale;
  };
  std::vector<Row> rows;
  double dt = 0.0;
  for (std::size_t i = 1; i < sol.times.size(); ++i) dt = std::max(dt, sol.times[i] - sol.times[i - 1]);
  double dx = 0.0;

  for (const auto& snap : sol.snapshots) {
    const std::size_t i = node_of(sol.times, snap.t);
    if (i == std::string::npos || i == 0 || i + 1 >= sol.times.size()) continue;
    if (snap.xs.size() < 5) continue;
    const double h1 = sol.times[i] - sol.times[i - 1];
    const double h2 = sol.times[i + 1] - sol.times[i];
    const double spp = 2.0 * ((sol.s[i + 1] - sol.s[i]) / h2 - (sol.s[i] - sol.s[i - 1]) / h1) / (h1 + h2);

    const auto& xs = snap.xs;
    const auto& u = snap.values;
    const double a1 = xs[1] - xs[0];
    const double a2 = xs[2] - xs[1];
    const double ux0 = -(2.0 * a1 + a2) / (a1 * (a1 + a2)) * u[0] + (a1 + a2) / (a1 * a2) * u[1] -
                       a1 / (a2 * (a1 + a2)) * u[2];
    for (std::size_t k = 1; k < xs.size(); ++k) dx = std::max(dx, xs[k] - xs[k - 1]);

    const double s = sol.s[i];
    const double sp = sol.sprime[i];
    const double t1 = (u.back() - data.sigma_tilde - data.lambda) * sp;
    const double t2 = ux0;
    const double t3 = data.lambda * data.sigma_tilde * s;
    rows.push_back({snap.t, spp, t1 - t2 - t3,
                    std::max({std::abs(t1), std::abs(t2), std::abs(t3), std::abs(spp)})});
  }
  if (rows.empty()) {
    throw Error(ErrorKind::TooFewSamples,
                "no snapshot with >= 5 samples at an interior grid time");
  }

  double scale = 0.0;
  for (const auto& row : rows) scale = std::max(scale, row.scale);
  BoundReport r;
  r.name = "s_second_derivative";
  r.slack_used = 10.0 * (dt + dx * dx) * (1.0 + scale);
  r.worst_violation = -std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    const double v = std::abs(row.lhs - row.rhs);
    if (v > r.worst_violation) {
      r.worst_violation = v;
      r.t = row.t;
    }
  }
  r.passed = r.worst_violation <= r.slack_used;
  return r;
}

CrossValidation cross_validate(const FreeBoundarySolution& a, const FreeBoundarySolution& b) {
  require_nonempty(a);
  require_nonempty(b);
  if (a.kind != b.kind) throw Error(ErrorKind::InvalidArgument, "solutions differ in kind");
  CrossValidation cv;
  cv.t_begin = std::max(a.times.front(), b.times.front());
  cv.t_end = std::min(a.times.back(), b.times.back());
  if (cv.t_begin > cv.t_end) {
    throw Error(ErrorKind::DisjointRanges, "time ranges do not overlap");
  }
  for (std::size_t i = 0; i < a.times.size(); ++i) {
    const double t = a.times[i];
    if (t < cv.t_begin || t > cv.t_end) continue;
    const double sb = b.s_at(t);
    cv.s_error = std::max(cv.s_error, std::abs(a.s[i] - sb) / std::abs(sb));
  }
  for (const auto& sa : a.snapshots) {
    if (sa.t < cv.t_begin || sa.t > cv.t_end) continue;
    const double tol = 1e-9 * std::max(1.0, sa.t);
    const auto match = std::find_if(b.snapshots.begin(), b.snapshots.end(),
                                     [&](const FieldSnapshot& sb) { return std::abs(sb.t - sa.t) <= tol; });
    if (match == b.snapshots.end()) continue;
    ++cv.snapshot_pairs;
    for (std::size_t k = 0; k < sa.xs.size(); ++k) {
      cv.u_error = std::max(cv.u_error, std::abs(sa.values[k] - interp(match->xs, match->values, sa.xs[k])));
    }
  }
  return cv;
}

}  // namespace fbp::validation
