#include "fbp/volterra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <sstream>

#include "fbp/errors.hpp"
#include "fbp/kernels.hpp"
#include "fbp/quadrature.hpp"

namespace fbp {

using kernels::detail::clamped_exp;
using kernels::detail::kInvTwoSqrtPi;

void SolverConfig::validate() const {
  if (!(dt > 0.0)) throw Error(ErrorKind::InvalidArgument, "dt must be > 0");
  if (!(window >= dt * (1.0 - 1e-12))) throw Error(ErrorKind::InvalidArgument, "window must be >= dt");
  if (!(contraction_max > 0.0 && contraction_max < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "contraction_max must lie in (0, 1)");
  }
  if (!(picard_tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "picard_tol must be > 0");
  if (picard_max < 1) throw Error(ErrorKind::InvalidArgument, "picard_max must be >= 1");
  if (!(horizon >= 0.0)) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 0");
  if (spatial_points != 0 && spatial_points < 5) {
    throw Error(ErrorKind::InvalidArgument, "spatial_points must be 0 (auto) or >= 5");
  }
}

BoundaryState BoundaryState::from_iterate(double s0, double dt, std::vector<double> v,
                                          std::vector<double> sprime) {
  if (v.empty() || v.size() != sprime.size()) {
    throw Error(ErrorKind::InvalidArgument, "v and sprime must be non-empty and equally long");
  }
  BoundaryState st;
  st.dt = dt;
  st.v = std::move(v);
  st.sprime = std::move(sprime);
  const std::size_t n = st.v.size();
  st.times.resize(n);
  st.s.resize(n);
  st.s[0] = s0;
  st.times[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    st.times[i] = static_cast<double>(i) * dt;
    st.s[i] = st.s[i - 1] + 0.5 * dt * (st.sprime[i - 1] + st.sprime[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!(st.s[i] > 0.0)) {
      std::ostringstream msg;
      msg << "boundary reached s = " << st.s[i] << " at local t = " << st.times[i];
      throw Error(ErrorKind::BoundaryCollapse, msg.str());
    }
  }
  return st;
}

namespace {

double interpolate(const std::vector<double>& y, double dt, double t) {
  const std::size_t last = y.size() - 1;
  if (last == 0 || t <= 0.0) return y.front();
  const double pos = t / dt;
  if (pos >= static_cast<double>(last)) return y.back();
  const auto j = static_cast<std::size_t>(pos);
  const double w = pos - static_cast<double>(j);
  return (1.0 - w) * y[j] + w * y[j + 1];
}

}  // namespace

double BoundaryState::s_at(double t) const { return interpolate(s, dt, t); }
double BoundaryState::v_at(double t) const { return interpolate(v, dt, t); }

namespace {

int spatial_points_for(std::size_t steps, int requested) {
  return requested > 0 ? requested : std::max(64, static_cast<int>(steps));
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> xs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) xs[j] = lo + (hi - lo) * static_cast<double>(j) / (n - 1);
  xs.back() = hi;
  return xs;
}

// History of the boundary sampled at the midpoints of m uniform cells in
// w = sqrt(t - tau) on [0, sqrt(t)]. dtau = 2 w dw, so every integrand is
// multiplied by 2 w and the (t - tau)^{-1/2} factor of the kernel cancels.
struct History {
  double t = 0.0;
  double hw = 0.0;
  std::vector<double> gap;  // t - tau = w^2
  std::vector<double> s;
  std::vector<double> v;
  std::vector<double> f_tilde;

  History(const AuxiliaryData& aux, const BoundaryState& st, double time) : t(time) {
    const int m = std::max(1, static_cast<int>(std::ceil(time / st.dt - 1e-9)));
    hw = std::sqrt(time) / m;
    gap.resize(m);
    s.resize(m);
    v.resize(m);
    f_tilde.resize(m);
    for (int k = 0; k < m; ++k) {
      const double w = (k + 0.5) * hw;
      gap[k] = w * w;
      const double tau = time - gap[k];
      s[k] = st.s_at(tau);
      v[k] = st.v_at(tau);
      f_tilde[k] = aux.f_tilde(tau);
    }
  }
};

// u~(., t) for fixed t > 0.
class FieldEvaluator {
public:
  FieldEvaluator(const AuxiliaryData& aux, const BoundaryState& st, double t)
      : aux_(aux), b_(st.s.front()), hist_(aux, st, t) {}

  double single_layer(double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < hist_.gap.size(); ++k) {
      const double inv = 0.25 / hist_.gap[k];
      const double dm = x - hist_.s[k];
      const double dp = x + hist_.s[k];
      acc += (clamped_exp(-dm * dm * inv) + clamped_exp(-dp * dp * inv)) * hist_.v[k];
    }
    return acc * hist_.hw * std::numbers::inv_sqrtpi;
  }

  double base_layer(double x) const {
    double acc = 0.0;
    for (std::size_t k = 0; k < hist_.gap.size(); ++k) {
      acc += 2.0 * clamped_exp(-x * x * 0.25 / hist_.gap[k]) * hist_.f_tilde[k];
    }
    return -acc * hist_.hw * std::numbers::inv_sqrtpi;
  }

  double initial_layer(double x) const {
    auto phi = [this](double xi) { return aux_.phi_tilde(xi); };
    return quadrature::heat_smoothing(x, hist_.t, 0.0, b_, phi) +
           quadrature::heat_smoothing(-x, hist_.t, 0.0, b_, phi);
  }

  double operator()(double x) const { return single_layer(x) + base_layer(x) + initial_layer(x); }

private:
  const AuxiliaryData& aux_;
  double b_;
  History hist_;
};

// int_0^s int_0^x u~(xi) dxi dx by nested trapezoid on the uniform grid xs.
double double_integral(const std::vector<double>& xs, const std::vector<double>& values) {
  const auto inner = cumulative_trapezoid(xs, values);
  return cumulative_trapezoid(xs, inner).back();
}

double velocity_at(const AuxiliaryData& aux, const BoundaryState& st, std::size_t i, int nx) {
  const double t = st.times[i];
  const double s = st.s[i];
  const auto xs = linspace(0.0, s, nx);
  std::vector<double> u(xs.size());
  if (i == 0) {
    for (std::size_t j = 0; j < xs.size(); ++j) u[j] = aux.phi_tilde(xs[j]);
  } else {
    const FieldEvaluator field(aux, st, t);
    for (std::size_t j = 0; j < xs.size(); ++j) u[j] = field(xs[j]);
  }
  return (aux.f(t) - aux.sigma_tilde) * s + std::exp(-aux.lambda * t) * double_integral(xs, u);
}

double a_at(const AuxiliaryData& aux, const BoundaryState& st, std::size_t i) {
  if (i == 0) return aux.phi_tilde.derivative(st.s.front(), 1);
  const double t = st.times[i];
  const double x = st.s[i];
  const History hist(aux, st, t);
  const double threshold = kernels::kDiagonalThreshold * std::max(1.0, t);

  double moving = 0.0;
  double base = 0.0;
  for (std::size_t k = 0; k < hist.gap.size(); ++k) {
    const double gap = hist.gap[k];
    const double quotient = gap < threshold ? st.sprime[i] : (x - hist.s[k]) / gap;
    moving += kernels::detail::moving_dx_scaled(quotient, x, hist.s[k], gap) * hist.v[k];
    // sqrt(gap) N_x(x, t; 0, tau) = -(x / gap) exp(-x^2 / (4 gap)) / (2 sqrt(pi))
    base += -(x / gap) * kInvTwoSqrtPi * clamped_exp(-x * x * 0.25 / gap) * hist.f_tilde[k];
  }
  // 2 w dw weights
  moving *= 2.0 * hist.hw;
  base *= -2.0 * hist.hw;

  const double b = st.s.front();
  auto dphi = [&aux](double xi) { return aux.phi_tilde.derivative(xi, 1); };
  const double initial = quadrature::heat_smoothing(x, t, 0.0, b, dphi) -
                         quadrature::heat_smoothing(-x, t, 0.0, b, dphi);
  return 2.0 * (moving + base + initial);
}

double sup_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double sup_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

double eval_J(const AuxiliaryData& aux, const BoundaryState& state, double x, double t) {
  const double end = state.end_time();
  if (!(t >= 0.0) || t > end * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [0, " << end << "]";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  const double s = state.s_at(t);
  if (!(x >= 0.0) || x > s * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "x = " << x << " outside [0, s(t) = " << s << "]";
    throw Error(ErrorKind::OutOfDomain, msg.str());
  }
  if (t == 0.0) return aux.phi_tilde(x);
  return FieldEvaluator(aux, state, t)(x);
}

std::vector<double> apply_A(const AuxiliaryData& aux, const BoundaryState& state) {
  std::vector<double> out(state.times.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a_at(aux, state, i);
  return out;
}

std::vector<double> apply_B(const AuxiliaryData& aux, const BoundaryState& state,
                            int spatial_points) {
  const int nx = spatial_points_for(state.steps(), spatial_points);
  std::vector<double> out(state.times.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = velocity_at(aux, state, i, nx);
  return out;
}

WindowResult solve_window(const AuxiliaryData& aux, const SolverConfig& cfg, double s0) {
  cfg.validate();
  if (!(s0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "initial thickness must be > 0");
  const auto n = static_cast<std::size_t>(std::max(1L, std::lround(cfg.window / cfg.dt)));
  const int nx = spatial_points_for(n, cfg.spatial_points);

  const double v0 = aux.phi_tilde.derivative(s0, 1);
  std::vector<double> v(n + 1, v0);
  std::vector<double> sp(n + 1, 0.0);
  {
    const auto seed = BoundaryState::from_iterate(s0, cfg.dt, v, sp);
    std::fill(sp.begin(), sp.end(), velocity_at(aux, seed, 0, nx));
  }

  WindowDiagnostics diag;
  diag.length = static_cast<double>(n) * cfg.dt;
  diag.steps = static_cast<int>(n);
  diag.initial_thickness = s0;
  diag.norm_f = aux.f.sup_abs(0.0, diag.length);
  diag.norm_f_tilde = aux.f_tilde.sup_abs(0.0, diag.length);
  diag.norm_dphi_tilde = aux.phi_tilde.sup_abs(0.0, s0, 1);

  double previous = 0.0;
  for (int it = 1; it <= cfg.picard_max; ++it) {
    const auto state = BoundaryState::from_iterate(s0, cfg.dt, v, sp);
    auto next_v = apply_A(aux, state);
    auto next_sp = apply_B(aux, state, nx);
    const double change = std::max(sup_abs_diff(next_v, v), sup_abs_diff(next_sp, sp));
    const double scale = std::max({1.0, sup_abs(next_v), sup_abs(next_sp)});
    const double tol = std::max(cfg.picard_tol, 64.0 * std::numeric_limits<double>::epsilon() * scale);

    if (it >= 2 && previous > 0.0 && change > tol) {
      const double ratio = change / previous;
      diag.contraction_factor = std::max(diag.contraction_factor, ratio);
      if (ratio > cfg.contraction_max) {
        std::ostringstream msg;
        msg << "contraction factor " << ratio << " > " << cfg.contraction_max << " on a window of "
            << diag.length << " (iteration " << it << ")";
        throw Error(ErrorKind::ContractionFailure, msg.str());
      }
    }
    v = std::move(next_v);
    sp = std::move(next_sp);
    previous = change;
    diag.iterations = it;
    diag.final_change = change;
    if (change <= tol) {
      // v(0) is imposed; check it against the limit of A as t -> 0+, whose
      // leading correction is O(sqrt t).
      if (n >= 2) {
        const double r2 = std::numbers::sqrt2;
        const double extrapolated = (r2 * v[1] - v[2]) / (r2 - 1.0);
        diag.initial_value_residual = std::abs(extrapolated - v0);
      } else {
        diag.initial_value_residual = std::abs(v[1] - v0);
      }
      diag.initial_value_tolerance = 5.0 * std::sqrt(cfg.dt) * diag.norm_dphi_tilde + 1e-12;
      return {BoundaryState::from_iterate(s0, cfg.dt, std::move(v), std::move(sp)), diag};
    }
  }
  std::ostringstream msg;
  msg << "Picard iteration did not reach " << cfg.picard_tol << " in " << cfg.picard_max
      << " iterations (last change " << previous << ")";
  throw Error(ErrorKind::MaxIterations, msg.str());
}

GlobalResult solve_global(const AuxiliaryData& aux, const SolverConfig& cfg) {
  cfg.validate();
  GlobalResult out;
  auto& sol = out.solution;
  sol.kind = FieldKind::auxiliary;

  const long total = cfg.horizon > 0.0 ? std::max(1L, std::lround(cfg.horizon / cfg.dt)) : 0L;
  const double dt = total > 0 ? cfg.horizon / static_cast<double>(total) : cfg.dt;
  const long window_steps = std::max(1L, std::lround(cfg.window / dt));

  std::set<long> snapshot_nodes{0};
  for (double t : cfg.snapshot_times) {
    snapshot_nodes.insert(std::clamp(std::lround(t / dt), 0L, total));
  }

  const double lambda = aux.lambda;
  double psi = 0.0;
  auto record_snapshot = [&](double t, std::vector<double> xs, std::vector<double> values) {
    psi = std::max(psi, sup_abs(differentiate(xs, values)));
    sol.snapshots.push_back({t, std::move(xs), std::move(values)});
  };

  {
    const int nx = spatial_points_for(static_cast<std::size_t>(std::min(window_steps, std::max(total, 1L))),
                                      cfg.spatial_points);
    const auto xs = linspace(0.0, aux.b, nx);
    std::vector<double> values(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) values[j] = aux.phi_tilde(xs[j]);
    const auto seed = BoundaryState::from_iterate(aux.b, dt, {0.0}, {0.0});
    sol.times.push_back(0.0);
    sol.s.push_back(aux.b);
    sol.sprime.push_back(velocity_at(aux, seed, 0, nx));
    out.v.push_back(aux.phi_tilde.derivative(aux.b, 1));
    record_snapshot(0.0, xs, values);
  }

  long done = 0;
  long current = window_steps;
  Function phi_w = aux.phi_tilde;
  double b_w = aux.b;
  while (done < total) {
    const long n = std::min(current, total - done);
    const double start = static_cast<double>(done) * dt;
    const double decay = std::exp(-lambda * start);

    AuxiliaryData local;
    local.lambda = lambda;
    local.sigma_tilde = aux.sigma_tilde;
    local.b = b_w;
    local.f = Function::shifted(aux.f, start);
    local.f_tilde = Function::shifted(aux.f_tilde, start, decay);
    local.phi_tilde = phi_w;

    SolverConfig wc = cfg;
    wc.dt = dt;
    wc.window = static_cast<double>(n) * dt;

    WindowResult r;
    try {
      r = solve_window(local, wc, b_w);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::ContractionFailure && e.kind() != ErrorKind::MaxIterations) throw;
      std::ostringstream note;
      note << "t0=" << start << ": rejected window of " << n << " steps (" << e.what() << ")";
      out.log.push_back(note.str());
      const long halved = n / 2;
      if (halved < 4) {
        throw Error(ErrorKind::WindowUnderflow,
                    "window fell below 4 dt at t0 = " + std::to_string(start) + " (" + e.what() + ")");
      }
      current = halved;
      continue;
    }
    r.diagnostics.start = start;

    const double grow = 1.0 / decay;  // e^{lambda t0}
    const auto& st = r.state;
    for (long k = 1; k <= n; ++k) {
      sol.times.push_back(static_cast<double>(done + k) * dt);
      sol.s.push_back(st.s[k]);
      sol.sprime.push_back(st.sprime[k]);
      out.v.push_back(grow * st.v[k]);
      psi = std::max(psi, std::abs(grow * st.v[k]));
    }

    const int nx = spatial_points_for(static_cast<std::size_t>(n), cfg.spatial_points);
    for (auto it = snapshot_nodes.upper_bound(done); it != snapshot_nodes.end() && *it <= done + n;
         ++it) {
      const long k = *it - done;
      const FieldEvaluator field(local, st, st.times[k]);
      auto xs = linspace(0.0, st.s[k], nx);
      std::vector<double> values(xs.size());
      for (std::size_t j = 0; j < xs.size(); ++j) values[j] = grow * field(xs[j]);
      record_snapshot(static_cast<double>(*it) * dt, std::move(xs), std::move(values));
    }

    if (done + n < total) {
      // Restart data: phi~_1 = e^{-lambda tau1} u~(., tau1), b_1 = s(tau1).
      const double tau1 = st.end_time();
      const FieldEvaluator field(local, st, tau1);
      auto xs = linspace(0.0, st.s.back(), nx);
      std::vector<double> values(xs.size());
      const double shrink = std::exp(-lambda * tau1);
      for (std::size_t j = 0; j < xs.size(); ++j) values[j] = shrink * field(xs[j]);
      r.diagnostics.boundary_residual = std::abs(values.back());
      values.back() = 0.0;
      auto slopes = differentiate(xs, values);
      b_w = st.s.back();
      phi_w = Function::sampled(std::move(xs), std::move(values), std::move(slopes));
    }

    out.windows.push_back(r.diagnostics);
    done += n;
    if (current < window_steps) current = std::min(window_steps, 2 * current);
  }
  out.sup_utilde_x = psi;
  return out;
}

}  // namespace fbp
