#include "fbp/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fbp/config.hpp"
#include "fbp/errors.hpp"
#include "fbp/frontfix.hpp"
#include "fbp/stationary.hpp"
#include "fbp/validation.hpp"
#include "fbp/volterra.hpp"

namespace fbp::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_csv(const fs::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::ConfigError, "cannot write '" + path.string() + "'");
  for (std::size_t c = 0; c < header.size(); ++c) out << (c ? "," : "") << header[c];
  out << '\n';
  const std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) out << (c ? "," : "") << format_number(columns[c][r]);
    out << '\n';
  }
}

std::vector<std::vector<double>> read_csv(const fs::path& path, std::vector<std::string>* header) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot open '" + path.string() + "'");
  std::string line;
  std::vector<std::vector<double>> cols;
  if (!std::getline(in, line)) throw Error(ErrorKind::ConfigError, "'" + path.string() + "' is empty");
  {
    std::vector<std::string> names;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) names.push_back(cell);
    cols.resize(names.size());
    if (header) *header = std::move(names);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols.size()) throw Error(ErrorKind::ConfigError, "ragged row in '" + path.string() + "'");
      try {
        cols[c++].push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw Error(ErrorKind::ConfigError, "bad number '" + cell + "' in '" + path.string() + "'");
      }
    }
    if (c != cols.size()) throw Error(ErrorKind::ConfigError, "ragged row in '" + path.string() + "'");
  }
  return cols;
}

namespace {

json to_json(const validation::BoundReport& r) {
  json j{{"name", r.name},
         {"worst_violation", r.worst_violation},
         {"t", r.t},
         {"slack_used", r.slack_used},
         {"passed", r.passed}};
  j["x"] = r.x ? json(*r.x) : json(nullptr);
  return j;
}

json to_json(const WindowDiagnostics& w) {
  return {{"start", w.start},
          {"length", w.length},
          {"steps", w.steps},
          {"iterations", w.iterations},
          {"contraction_factor", w.contraction_factor},
          {"final_change", w.final_change},
          {"initial_thickness", w.initial_thickness},
          {"norm_f", w.norm_f},
          {"norm_f_tilde", w.norm_f_tilde},
          {"norm_dphi_tilde", w.norm_dphi_tilde},
          {"initial_value_residual", w.initial_value_residual},
          {"initial_value_tolerance", w.initial_value_tolerance},
          {"boundary_residual", w.boundary_residual}};
}

std::string time_label(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", t);
  return buf;
}

void write_solution(const fs::path& dir, const FreeBoundarySolution& sol,
                    const std::vector<double>& requested) {
  fs::create_directories(dir);
  write_csv(dir / "boundary.csv", {"t", "s", "sprime"}, {sol.times, sol.s, sol.sprime});
  for (double t : requested) {
    const auto best = std::min_element(sol.snapshots.begin(), sol.snapshots.end(),
                                       [&](const FieldSnapshot& a, const FieldSnapshot& b) {
                                         return std::abs(a.t - t) < std::abs(b.t - t);
                                       });
    if (best == sol.snapshots.end()) continue;
    write_csv(dir / ("snapshot_" + time_label(t) + ".csv"), {"x", "u"}, {best->xs, best->values});
  }
}

// extra interior snapshot times for the s'' check
std::vector<double> dense_times(double horizon, int count) {
  std::vector<double> ts;
  for (int k = 1; k <= count; ++k) ts.push_back(horizon * k / (count + 1.0));
  return ts;
}

std::optional<double> dormant_deviation(const ProblemData& p, const FreeBoundarySolution& sol) {
  if (p.f.preset != Preset::constant || p.f.params[0] <= p.sigma_tilde) return std::nullopt;
  const double b_bar = solve_dormant_thickness(p.lambda, p.f.params[0], p.sigma_tilde);
  double worst = 0.0;
  for (double s : sol.s) worst = std::max(worst, std::abs(s - b_bar) / b_bar);
  return worst;
}

struct SolverRun {
  std::string name;
  FreeBoundarySolution primal;
  std::vector<validation::BoundReport> reports;
  json extra = json::object();
};

std::vector<validation::BoundReport> run_checks(const FreeBoundarySolution& sol, const RunConfig& rc) {
  std::vector<validation::BoundReport> reports;
  const bool relaxed = !rc.strict_positivity;
  if (rc.checks.field_bounds) reports.push_back(validation::check_field_bounds(sol, rc.problem, relaxed));
  if (rc.checks.boundary_bounds) {
    reports.push_back(validation::check_boundary_bounds(sol, rc.problem, relaxed));
  }
  if (rc.checks.s_second_derivative && sol.horizon() > 0.0) {
    reports.push_back(validation::check_s_second_derivative(sol, rc.problem));
  }
  return reports;
}

SolverRun run_integral(const RunConfig& rc) {
  SolverConfig cfg = rc.integral;
  auto extra_times = dense_times(cfg.horizon, 40);
  cfg.snapshot_times.insert(cfg.snapshot_times.end(), extra_times.begin(), extra_times.end());
  const AuxiliaryData aux = to_auxiliary(rc.problem);
  const GlobalResult g = solve_global(aux, cfg);

  SolverRun run;
  run.name = "integral";
  run.primal = reconstruct_primal(g.solution, aux.f, aux.lambda);
  run.reports = run_checks(run.primal, rc);

  validation::BoundReport iv;
  iv.name = "initial_value_identity";
  iv.slack_used = 1.0;
  iv.worst_violation = 0.0;
  json windows = json::array();
  double contraction = 0.0;
  for (const auto& w : g.windows) {
    windows.push_back(to_json(w));
    contraction = std::max(contraction, w.contraction_factor);
    const double ratio = w.initial_value_residual / w.initial_value_tolerance;
    if (ratio > iv.worst_violation) {
      iv.worst_violation = ratio;
      iv.t = w.start;
    }
  }
  iv.passed = iv.worst_violation <= iv.slack_used;
  run.reports.push_back(iv);

  run.extra["windows"] = std::move(windows);
  run.extra["log"] = g.log;
  run.extra["max_contraction_factor"] = contraction;
  run.extra["sup_utilde_x"] = g.sup_utilde_x;
  return run;
}

SolverRun run_frontfix(const RunConfig& rc) {
  frontfix::Config cfg = rc.frontfix;
  const long steps = std::lround(cfg.horizon / cfg.dt);
  cfg.snapshot_stride = static_cast<int>(std::max(1L, steps / 40));
  SolverRun run;
  run.name = "frontfix";
  run.primal = frontfix::solve(rc.problem, cfg);
  run.reports = run_checks(run.primal, rc);
  const auto aux = derive_auxiliary_field(run.primal, rc.problem.lambda);
  double psi = 0.0;
  for (const auto& snap : aux.snapshots) {
    for (double v : differentiate(snap.xs, snap.values)) psi = std::max(psi, std::abs(v));
  }
  run.extra["sup_utilde_x"] = psi;
  return run;
}

bool is_config_kind(ErrorKind k) {
  return k == ErrorKind::ConfigError || k == ErrorKind::InvalidArgument ||
         k == ErrorKind::IncompatibleData;
}

}  // namespace

int cmd_solve(const fs::path& config, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  try {
    rc = parse_run_config(load_json(config));
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto compat = check_compatibility(
      rc.problem, {.strict_positivity = rc.strict_positivity, .horizon = rc.integral.horizon});
  out << "compatibility: " << compat.describe() << '\n';
  if (!compat.passed) {
    err << "config error: incompatible data: " << compat.describe() << '\n';
    return kExitConfig;
  }

  std::vector<SolverRun> runs;
  try {
    if (rc.solver != SolverChoice::frontfix) runs.push_back(run_integral(rc));
    if (rc.solver != SolverChoice::integral) runs.push_back(run_frontfix(rc));
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    return is_config_kind(e.kind()) ? kExitConfig : kExitSolver;
  }

  json summary;
  summary["config"] = {{"problem", to_json(rc.problem)},
                       {"strict_positivity", rc.strict_positivity},
                       {"solver", std::string(to_string(rc.solver))},
                       {"horizon", rc.integral.horizon},
                       {"integral", {{"dt", rc.integral.dt},
                                     {"window", rc.integral.window},
                                     {"picard_tol", rc.integral.picard_tol},
                                     {"picard_max", rc.integral.picard_max},
                                     {"contraction_max", rc.integral.contraction_max}}},
                       {"frontfix", {{"n_y", rc.frontfix.n_y}, {"dt", rc.frontfix.dt}}},
                       {"snapshot_times", rc.snapshot_times}};
  summary["compatibility"] = {{"value_residual", compat.value_residual},
                              {"derivative_residual", compat.derivative_residual},
                              {"neumann_residual", compat.neumann_residual},
                              {"min_f", compat.min_f},
                              {"min_phi", compat.min_phi},
                              {"tolerance", compat.tolerance},
                              {"passed", compat.passed}};
  bool passed = true;
  json solvers = json::object();
  for (const auto& run : runs) {
    json j = run.extra;
    json reports = json::array();
    for (const auto& r : run.reports) {
      reports.push_back(to_json(r));
      passed = passed && r.passed;
      out << run.name << ": " << r.name << (r.passed ? " passed" : " FAILED") << " (worst "
          << r.worst_violation << ", slack " << r.slack_used << ")\n";
    }
    j["reports"] = std::move(reports);
    j["s_final"] = run.primal.s.back();
    if (auto dev = dormant_deviation(rc.problem, run.primal)) j["dormant_deviation"] = *dev;
    solvers[run.name] = std::move(j);
  }
  summary["solvers"] = std::move(solvers);

  if (runs.size() == 2) {
    const auto cv = validation::cross_validate(runs[0].primal, runs[1].primal);
    const bool ok = cv.s_error <= rc.checks.cross_tolerance;
    summary["cross_validation"] = {{"s_error", cv.s_error},
                                   {"u_error", cv.u_error},
                                   {"snapshot_pairs", cv.snapshot_pairs},
                                   {"tolerance", rc.checks.cross_tolerance},
                                   {"passed", ok}};
    out << "cross-validation: s error " << cv.s_error << (ok ? " passed" : " FAILED") << '\n';
    passed = passed && ok;
  }
  summary["passed"] = passed;

  try {
    fs::create_directories(rc.output_dir);
    if (rc.write_csv) {
      for (const auto& run : runs) {
        write_solution(runs.size() == 2 ? rc.output_dir / run.name : rc.output_dir, run.primal,
                       rc.snapshot_times);
      }
    }
    if (rc.write_json) {
      std::ofstream(rc.output_dir / "summary.json", std::ios::binary) << summary.dump(2) << '\n';
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  out << (passed ? "all checks passed" : "validation FAILED") << '\n';
  return passed ? kExitOk : kExitValidation;
}

int cmd_stationary(double lambda, double sigma_bar, double sigma_tilde, const fs::path& dir,
                   std::ostream& out, std::ostream& err) {
  if (!(lambda > 0.0) || !(sigma_bar > 0.0) || !(sigma_tilde > 0.0)) {
    err << "config error: lambda, sigma_bar and sigma_tilde must be positive\n";
    return kExitConfig;
  }
  double b_bar = 0.0;
  try {
    b_bar = solve_dormant_thickness(lambda, sigma_bar, sigma_tilde);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::NoDormantState) throw;
    err << "no dormant state: sigma_bar = " << sigma_bar << " <= sigma_tilde = " << sigma_tilde
        << '\n';
    return kExitSolver;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.12g", b_bar);
  out << "b_bar = " << buf << '\n';

  const auto profile = stationary_profile(b_bar, lambda, sigma_bar);
  std::vector<double> xs(256), us(256);
  for (int i = 0; i < 256; ++i) {
    xs[i] = b_bar * i / 255.0;
    us[i] = profile.value(xs[i]);
  }
  try {
    fs::create_directories(dir);
    write_csv(dir / "stationary.csv", {"x", "u"}, {xs, us});
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}

namespace {

struct Cell {
  double sigma_bar = 0.0, sigma_tilde = 0.0, lambda = 0.0;
  double b0 = 0.0;
  double b_bar = std::numeric_limits<double>::quiet_NaN();
  double horizon = 0.0;
  double s_final = std::numeric_limits<double>::quiet_NaN();
  std::string regime = "failed";
  std::string note;
};

void run_cell(Cell& c, const SweepConfig& sc) {
  try {
    if (c.sigma_bar > c.sigma_tilde) {
      c.b_bar = solve_dormant_thickness(c.lambda, c.sigma_bar, c.sigma_tilde);
    }
    c.b0 = sc.initial_thickness > 0.0 ? sc.initial_thickness
                                      : (std::isnan(c.b_bar) ? sc.fallback_thickness : c.b_bar);
    c.horizon = sc.horizon > 0.0 ? sc.horizon : 5.0 / c.sigma_tilde;

    ProblemData p;
    p.lambda = c.lambda;
    p.sigma_tilde = c.sigma_tilde;
    p.b = c.b0;
    p.f = {Preset::constant, {c.sigma_bar}};
    p.phi = stationary_profile(c.b0, c.lambda, c.sigma_bar).spec();

    if (sc.solver == SolverChoice::integral) {
      SolverConfig cfg = sc.integral;
      cfg.horizon = c.horizon;
      cfg.snapshot_times.clear();
      c.s_final = solve_global(to_auxiliary(p), cfg).solution.s.back();
    } else {
      frontfix::Config cfg = sc.frontfix;
      cfg.horizon = c.horizon;
      cfg.snapshot_times.clear();
      c.s_final = frontfix::solve(p, cfg).s.back();
    }

    const double ratio = c.s_final / c.b0;
    if (!std::isnan(c.b_bar) && std::abs(c.s_final - c.b_bar) / c.b_bar <= sc.theta) {
      c.regime = "dormant";
    } else if (ratio > 1.0 + sc.theta) {
      c.regime = "grow";
    } else if (ratio < 1.0 - sc.theta) {
      c.regime = "shrink";
    } else {
      c.regime = "undetermined";
    }
  } catch (const std::exception& e) {
    c.regime = "failed";
    c.note = e.what();
    std::replace(c.note.begin(), c.note.end(), ',', ';');
    std::replace(c.note.begin(), c.note.end(), '\n', ' ');
  }
}

unsigned worker_count(std::size_t cells) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MF_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) n = static_cast<unsigned>(v);
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(cells, 1)));
}

}  // namespace

int cmd_sweep(const fs::path& config, std::ostream& out, std::ostream& err) {
  SweepConfig sc;
  try {
    sc = parse_sweep_config(load_json(config));
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::vector<Cell> cells;
  for (double sb : sc.sigma_bar) {
    for (double st : sc.sigma_tilde) {
      for (double l : sc.lambda) {
        Cell c;
        c.sigma_bar = sb;
        c.sigma_tilde = st;
        c.lambda = l;
        cells.push_back(std::move(c));
      }
    }
  }

  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) run_cell(cells[i], sc);
  };
  std::vector<std::thread> pool;
  const unsigned workers = worker_count(cells.size());
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  try {
    fs::create_directories(sc.output_dir);
    std::ofstream csv(sc.output_dir / "regimes.csv", std::ios::binary);
    if (!csv) throw Error(ErrorKind::ConfigError, "cannot write regimes.csv");
    csv << "sigma_bar,sigma_tilde,lambda,b0,b_bar,horizon,s_final,ratio,regime,note\n";
    for (const auto& c : cells) {
      csv << format_number(c.sigma_bar) << ',' << format_number(c.sigma_tilde) << ','
          << format_number(c.lambda) << ',' << format_number(c.b0) << ',' << format_number(c.b_bar)
          << ',' << format_number(c.horizon) << ',' << format_number(c.s_final) << ','
          << format_number(c.s_final / c.b0) << ',' << c.regime << ',' << c.note << '\n';
    }
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  std::map<std::string, int> tally;
  for (const auto& c : cells) ++tally[c.regime];
  out << cells.size() << " cells on " << workers << " workers";
  for (const auto& [k, v] : tally) out << ", " << k << ": " << v;
  out << '\n';
  return kExitOk;
}

FreeBoundarySolution load_solution(const fs::path& boundary_csv) {
  std::vector<std::string> header;
  auto cols = read_csv(boundary_csv, &header);
  if (header != std::vector<std::string>{"t", "s", "sprime"}) {
    throw Error(ErrorKind::ConfigError, "'" + boundary_csv.string() + "' must have columns t,s,sprime");
  }
  FreeBoundarySolution sol;
  sol.kind = FieldKind::primal;
  sol.times = std::move(cols[0]);
  sol.s = std::move(cols[1]);
  sol.sprime = std::move(cols[2]);
  if (sol.times.empty()) throw Error(ErrorKind::EmptySolution, "boundary file has no rows");

  std::vector<fs::path> snaps;
  for (const auto& entry : fs::directory_iterator(boundary_csv.parent_path().empty()
                                                      ? fs::path(".")
                                                      : boundary_csv.parent_path())) {
    const auto name = entry.path().filename().string();
    if (name.rfind("snapshot_", 0) == 0 && entry.path().extension() == ".csv") snaps.push_back(entry.path());
  }
  for (const auto& path : snaps) {
    std::vector<std::string> h;
    auto c = read_csv(path, &h);
    if (h != std::vector<std::string>{"x", "u"}) continue;
    const std::string stem = path.stem().string().substr(9);
    const double t = std::stod(stem);
    // snap to the nearest grid time so the snapshot lines up with s(t)
    const auto it = std::min_element(sol.times.begin(), sol.times.end(),
                                     [&](double a, double b) { return std::abs(a - t) < std::abs(b - t); });
    sol.snapshots.push_back({*it, std::move(c[0]), std::move(c[1])});
  }
  std::sort(sol.snapshots.begin(), sol.snapshots.end(),
            [](const FieldSnapshot& a, const FieldSnapshot& b) { return a.t < b.t; });
  return sol;
}

int cmd_validate(const fs::path& boundary_csv, const fs::path& config, std::ostream& out,
                 std::ostream& err) {
  RunConfig rc;
  FreeBoundarySolution sol;
  try {
    rc = parse_run_config(load_json(config));
    sol = load_solution(boundary_csv);
  } catch (const Error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const bool relaxed = !rc.strict_positivity;
  std::vector<validation::BoundReport> reports;
  if (rc.checks.boundary_bounds) {
    reports.push_back(validation::check_boundary_bounds(sol, rc.problem, relaxed));
  }
  if (rc.checks.field_bounds && !sol.snapshots.empty()) {
    reports.push_back(validation::check_field_bounds(sol, rc.problem, relaxed));
  }
  if (rc.checks.s_second_derivative) {
    try {
      reports.push_back(validation::check_s_second_derivative(sol, rc.problem));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TooFewSamples) throw;
      out << "s_second_derivative skipped: " << e.what() << '\n';
    }
  }
  bool passed = true;
  for (const auto& r : reports) {
    passed = passed && r.passed;
    out << r.name << (r.passed ? " passed" : " FAILED") << " (worst " << r.worst_violation
        << ", slack " << r.slack_used << ", t " << r.t << ")\n";
  }
  return passed ? kExitOk : kExitValidation;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Free boundary solver suite"};
  app.require_subcommand(1);

  std::string config, boundary, dir = ".";
  double lambda = 0.0, sigma_bar = 0.0, sigma_tilde = 0.0;

  auto* solve = app.add_subcommand("solve", "solve the problem described by a JSON config");
  solve->add_option("config", config, "config file")->required();

  auto* stat = app.add_subcommand("stationary", "dormant thickness and profile");
  stat->add_option("lambda", lambda)->required();
  stat->add_option("sigma_bar", sigma_bar)->required();
  stat->add_option("sigma_tilde", sigma_tilde)->required();
  stat->add_option("-o,--output", dir, "directory for stationary.csv");

  auto* sweep = app.add_subcommand("sweep", "regime table over parameter ranges");
  sweep->add_option("config", config, "config file with a sweep section")->required();

  auto* val = app.add_subcommand("validate", "check a boundary.csv against a config");
  val->add_option("boundary", boundary, "boundary.csv")->required();
  val->add_option("config", config, "config file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*solve) return cmd_solve(config, out, err);
    if (*stat) return cmd_stationary(lambda, sigma_bar, sigma_tilde, dir, out, err);
    if (*sweep) return cmd_sweep(config, out, err);
    if (*val) return cmd_validate(boundary, config, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_config_kind(e.kind()) ? kExitConfig : kExitSolver;
  }
  return kExitConfig;
}

}  // namespace fbp::cli
