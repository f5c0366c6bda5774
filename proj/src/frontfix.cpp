#include "fbp/frontfix.hpp"

#include <algorithm>
#include <cmath>

#include "fbp/errors.hpp"

namespace fbp::frontfix {

namespace {

// (I - dt L) u_new = u_old with L = a d_yy + y c d_y - lambda, Dirichlet value
// `left` at node 0 and ghost reflection at node n.
std::vector<double> implicit_solve(const std::vector<double>& u_old, double dt, double a, double c,
                                   double lambda, double left) {
  const std::size_t n = u_old.size() - 1;
  const double dy = 1.0 / static_cast<double>(n);
  const double diff = dt * a / (dy * dy);
  const double diag = 1.0 + 2.0 * diff + dt * lambda;

  // unknowns 1..n stored at k = i - 1
  std::vector<double> lower(n), upper(n), rhs(n);
  for (std::size_t i = 1; i < n; ++i) {
    const double adv = dt * static_cast<double>(i) * dy * c / (2.0 * dy);
    lower[i - 1] = -(diff - adv);
    upper[i - 1] = -(diff + adv);
    rhs[i - 1] = u_old[i];
  }
  lower[n - 1] = -2.0 * diff;
  upper[n - 1] = 0.0;
  rhs[n - 1] = u_old[n];
  rhs[0] -= lower[0] * left;
  lower[0] = 0.0;

  // Thomas
  std::vector<double> cp(n), dp(n);
  cp[0] = upper[0] / diag;
  dp[0] = rhs[0] / diag;
  for (std::size_t k = 1; k < n; ++k) {
    const double m = diag - lower[k] * cp[k - 1];
    cp[k] = upper[k] / m;
    dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / m;
  }
  std::vector<double> u(n + 1);
  u[0] = left;
  u[n] = dp[n - 1];
  for (std::size_t k = n - 1; k-- > 0;) u[k + 1] = dp[k] - cp[k] * u[k + 2];
  return u;
}

void require_positive(double s, double t) {
  if (!(s > 0.0)) {
    throw Error(ErrorKind::BoundaryCollapse, "front reached s <= 0 near t=" + std::to_string(t));
  }
}

}  // namespace

FixedGridState initial_state(const ProblemData& data, int n_y) {
  if (n_y < 2) throw Error(ErrorKind::InvalidArgument, "n_y must be >= 2");
  const Function phi = data.phi_fn();
  FixedGridState st;
  st.s = data.b;
  st.u.resize(static_cast<std::size_t>(n_y) + 1);
  for (int i = 0; i <= n_y; ++i) st.u[i] = phi(data.b * i / n_y);
  st.u[0] = data.f_fn()(0.0);
  st.sprime = nonlocal_velocity(st, data.sigma_tilde);
  return st;
}

std::vector<double> transformed_rhs(const FixedGridState& state, double lambda) {
  const auto& u = state.u;
  const std::size_t n = state.intervals();
  const double dy = 1.0 / static_cast<double>(n);
  const double a = 1.0 / (state.s * state.s);
  const double c = state.sprime / state.s;
  std::vector<double> out(n + 1, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    const double uyy = (u[i - 1] - 2.0 * u[i] + u[i + 1]) / (dy * dy);
    const double uy = (u[i + 1] - u[i - 1]) / (2.0 * dy);
    out[i] = a * uyy + static_cast<double>(i) * dy * c * uy - lambda * u[i];
  }
  out[n] = a * 2.0 * (u[n - 1] - u[n]) / (dy * dy) - lambda * u[n];
  return out;
}

double nonlocal_velocity(const FixedGridState& state, double sigma_tilde) {
  const std::size_t n = state.intervals();
  double acc = 0.5 * (state.u.front() + state.u.back());
  for (std::size_t i = 1; i < n; ++i) acc += state.u[i];
  acc -= sigma_tilde * static_cast<double>(n);
  return state.s * acc / static_cast<double>(n);
}

FixedGridState step(const FixedGridState& state, double dt, const ProblemData& data,
                    Scheme scheme) {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  const Function f = data.f_fn();
  const double t1 = state.t + dt;
  const double left = f(t1);

  FixedGridState next;
  next.t = t1;

  const double s_pred = state.s + dt * state.sprime;
  require_positive(s_pred, t1);

  if (scheme == Scheme::explicit_euler) {
    const double dy = 1.0 / static_cast<double>(state.intervals());
    if (dt > 0.45 * (state.s * dy) * (state.s * dy)) {
      throw Error(ErrorKind::StabilityGuard,
                  "explicit step dt=" + std::to_string(dt) + " exceeds 0.45 (s dy)^2");
    }
    const auto rate = transformed_rhs(state, data.lambda);
    next.u = state.u;
    for (std::size_t i = 0; i < next.u.size(); ++i) next.u[i] += dt * rate[i];
    next.u[0] = left;
    next.s = s_pred;
    const double sp_pred = nonlocal_velocity(next, data.sigma_tilde);
    next.s = state.s + 0.5 * dt * (state.sprime + sp_pred);
    require_positive(next.s, t1);
    next.sprime = nonlocal_velocity(next, data.sigma_tilde);
    return next;
  }

  // predictor
  next.u = implicit_solve(state.u, dt, 1.0 / (s_pred * s_pred), state.sprime / s_pred,
                          data.lambda, left);
  next.s = s_pred;
  const double sp_pred = nonlocal_velocity(next, data.sigma_tilde);

  // corrector
  next.s = state.s + 0.5 * dt * (state.sprime + sp_pred);
  require_positive(next.s, t1);
  next.u = implicit_solve(state.u, dt, 1.0 / (next.s * next.s), sp_pred / next.s, data.lambda,
                          left);
  next.sprime = nonlocal_velocity(next, data.sigma_tilde);
  return next;
}

void Config::validate() const {
  if (!(horizon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 0");
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (n_y < 4) throw Error(ErrorKind::InvalidArgument, "n_y must be >= 4");
  if (snapshot_stride < 0) throw Error(ErrorKind::InvalidArgument, "snapshot_stride must be >= 0");
  for (double t : snapshot_times) {
    if (t < 0.0 || t > horizon * (1.0 + 1e-12)) {
      throw Error(ErrorKind::InvalidArgument, "snapshot time outside [0, horizon]");
    }
  }
}

FreeBoundarySolution solve(const ProblemData& data, const Config& cfg) {
  cfg.validate();
  data.validate();

  const long steps = cfg.horizon > 0.0 ? std::max(1L, std::lround(cfg.horizon / cfg.dt)) : 0L;
  const double dt = steps > 0 ? cfg.horizon / static_cast<double>(steps) : cfg.dt;

  std::vector<long> wanted;
  wanted.reserve(cfg.snapshot_times.size());
  for (double t : cfg.snapshot_times) {
    wanted.push_back(steps > 0 ? std::clamp(std::lround(t / dt), 0L, steps) : 0L);
  }
  const auto want = [&](long k) {
    if (k == 0) return true;
    if (cfg.snapshot_stride > 0 && (k % cfg.snapshot_stride == 0 || k == steps)) return true;
    return std::find(wanted.begin(), wanted.end(), k) != wanted.end();
  };

  FreeBoundarySolution sol;
  sol.kind = FieldKind::primal;
  sol.times.reserve(static_cast<std::size_t>(steps) + 1);
  sol.s.reserve(sol.times.capacity());
  sol.sprime.reserve(sol.times.capacity());

  const auto record = [&](const FixedGridState& st, long k) {
    sol.times.push_back(st.t);
    sol.s.push_back(st.s);
    sol.sprime.push_back(st.sprime);
    if (!want(k)) return;
    FieldSnapshot snap;
    snap.t = st.t;
    const std::size_t n = st.intervals();
    snap.xs.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) snap.xs[i] = st.s * static_cast<double>(i) / n;
    snap.xs[n] = st.s;
    snap.values = st.u;
    sol.snapshots.push_back(std::move(snap));
  };

  FixedGridState st = initial_state(data, cfg.n_y);
  record(st, 0);
  for (long k = 1; k <= steps; ++k) {
    st = step(st, dt, data, cfg.scheme);
    st.t = dt * static_cast<double>(k);
    record(st, k);
  }
  return sol;
}

}  // namespace fbp::frontfix
