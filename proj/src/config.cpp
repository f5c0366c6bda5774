#include "fbp/config.hpp"

#include <fstream>

#include "fbp/errors.hpp"
#include "fbp/stationary.hpp"

namespace fbp {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ConfigError, msg); }

const json* find(const json& obj, const char* key) {
  if (!obj.is_object()) return nullptr;
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& obj, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) fail(std::string("'") + key + "' must be a number");
  return v->get<double>();
}

int integer(const json& obj, const char* key, int fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) fail(std::string("'") + key + "' must be an integer");
  return v->get<int>();
}

bool boolean(const json& obj, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) fail(std::string("'") + key + "' must be true or false");
  return v->get<bool>();
}

std::string text(const json& obj, const char* key, const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) fail(std::string("'") + key + "' must be a string");
  return v->get<std::string>();
}

std::vector<double> numbers(const json& obj, const char* key) {
  const json* v = find(obj, key);
  if (!v) return {};
  if (!v->is_array()) fail(std::string("'") + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : *v) {
    if (!x.is_number()) fail(std::string("'") + key + "' must be an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

// list of numbers or {"from", "to", "count"}
std::vector<double> range(const json& obj, const char* key) {
  const json* v = find(obj, key);
  if (!v) fail(std::string("sweep.") + key + " is required");
  if (v->is_array()) return numbers(obj, key);
  if (!v->is_object()) fail(std::string("sweep.") + key + " must be a list or {from, to, count}");
  const double from = number(*v, "from", 0.0);
  const double to = number(*v, "to", from);
  const int count = integer(*v, "count", 0);
  if (count < 0) fail(std::string("sweep.") + key + ".count must be >= 0");
  std::vector<double> out;
  for (int i = 0; i < count; ++i) {
    out.push_back(count == 1 ? from : from + (to - from) * i / (count - 1));
  }
  return out;
}

FunctionSpec parse_function(const json& obj, const char* key) {
  const json* v = find(obj, key);
  if (!v || !v->is_object()) fail(std::string("problem.") + key + " must be {preset, params}");
  const std::string name = text(*v, "preset", "");
  const auto preset = preset_from_string(name);
  if (!preset) fail(std::string("problem.") + key + ": unknown preset '" + name + "'");
  FunctionSpec spec{*preset, numbers(*v, "params")};
  const std::size_t arity = preset_arity(*preset);
  if ((arity == 0 && spec.params.empty()) || (arity != 0 && spec.params.size() != arity)) {
    fail(std::string("problem.") + key + ": preset '" + name + "' expects " +
         (arity == 0 ? std::string("at least 1") : std::to_string(arity)) + " parameters");
  }
  return spec;
}

SolverChoice parse_solver(const std::string& s) {
  if (s == "integral") return SolverChoice::integral;
  if (s == "frontfix") return SolverChoice::frontfix;
  if (s == "both") return SolverChoice::both;
  fail("solver must be integral, frontfix or both (got '" + s + "')");
}

void parse_numerics(const json& root, SolverConfig& integral, frontfix::Config& ff) {
  const json empty = json::object();
  const json* num = find(root, "numerics");
  const json& n = num ? *num : empty;
  integral.dt = number(n, "dt", integral.dt);
  integral.window = number(n, "window", integral.window);
  integral.picard_tol = number(n, "picard_tol", integral.picard_tol);
  integral.picard_max = integer(n, "picard_max", integral.picard_max);
  integral.contraction_max = number(n, "contraction_max", integral.contraction_max);
  integral.horizon = number(n, "horizon", integral.horizon);
  integral.spatial_points = integer(n, "spatial_points", integral.spatial_points);

  ff.horizon = integral.horizon;
  const json* f = find(n, "frontfix");
  const json& fj = f ? *f : empty;
  ff.n_y = integer(fj, "n_y", ff.n_y);
  ff.dt = number(fj, "dt", ff.dt);
  const std::string scheme = text(fj, "scheme", "implicit");
  if (scheme == "implicit") {
    ff.scheme = frontfix::Scheme::implicit;
  } else if (scheme == "explicit") {
    ff.scheme = frontfix::Scheme::explicit_euler;
  } else {
    fail("numerics.frontfix.scheme must be implicit or explicit");
  }
}

template <class F>
void revalidate(F&& check) {
  try {
    check();
  } catch (const Error& e) {
    fail(e.what());
  }
}

}  // namespace

std::string_view to_string(SolverChoice s) {
  switch (s) {
    case SolverChoice::integral: return "integral";
    case SolverChoice::frontfix: return "frontfix";
    case SolverChoice::both: return "both";
  }
  return "unknown";
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    fail("config '" + path.string() + "': " + e.what());
  }
}

RunConfig parse_run_config(const json& j) {
  if (!j.is_object()) fail("config root must be an object");
  const json* prob = find(j, "problem");
  if (!prob || !prob->is_object()) fail("missing 'problem' section");

  RunConfig rc;
  auto& p = rc.problem;
  p.lambda = number(*prob, "lambda", p.lambda);
  p.sigma_tilde = number(*prob, "sigma_tilde", p.sigma_tilde);
  p.f = parse_function(*prob, "f");
  p.phi = parse_function(*prob, "phi");
  const json* b = find(*prob, "b");
  if (b && b->is_string()) {
    if (b->get<std::string>() != "dormant") fail("problem.b must be a number or \"dormant\"");
    if (p.f.preset != Preset::constant) fail("problem.b = \"dormant\" needs a constant f");
    revalidate([&] { p.b = solve_dormant_thickness(p.lambda, p.f.params[0], p.sigma_tilde); });
  } else {
    p.b = number(*prob, "b", p.b);
  }
  revalidate([&] { p.validate(); });

  if (const json* flags = find(j, "flags")) {
    rc.strict_positivity = boolean(*flags, "strict_positivity", true);
  }
  rc.solver = parse_solver(text(j, "solver", "integral"));
  parse_numerics(j, rc.integral, rc.frontfix);

  if (const json* out = find(j, "outputs")) {
    rc.snapshot_times = numbers(*out, "snapshot_times");
    rc.output_dir = text(*out, "directory", rc.output_dir.string());
    if (const json* formats = find(*out, "formats")) {
      if (!formats->is_array()) fail("outputs.formats must be a list");
      rc.write_csv = rc.write_json = false;
      for (const auto& f : *formats) {
        if (f == "csv") {
          rc.write_csv = true;
        } else if (f == "json") {
          rc.write_json = true;
        } else {
          fail("outputs.formats entries must be csv or json");
        }
      }
    }
  }
  for (double t : rc.snapshot_times) {
    if (t < 0.0 || t > rc.integral.horizon) fail("snapshot time outside [0, horizon]");
  }
  rc.integral.snapshot_times = rc.snapshot_times;
  rc.frontfix.snapshot_times = rc.snapshot_times;

  if (const json* v = find(j, "validation")) {
    rc.checks.field_bounds = boolean(*v, "field_bounds", true);
    rc.checks.boundary_bounds = boolean(*v, "boundary_bounds", true);
    rc.checks.s_second_derivative = boolean(*v, "s_second_derivative", true);
    rc.checks.cross_tolerance = number(*v, "cross_tolerance", rc.checks.cross_tolerance);
  }

  revalidate([&] {
    rc.integral.validate();
    rc.frontfix.validate();
  });
  return rc;
}

SweepConfig parse_sweep_config(const json& j) {
  const json* sw = find(j, "sweep");
  if (!sw || !sw->is_object()) fail("missing 'sweep' section");
  SweepConfig sc;
  sc.sigma_bar = range(*sw, "sigma_bar");
  sc.sigma_tilde = range(*sw, "sigma_tilde");
  sc.lambda = range(*sw, "lambda");
  sc.horizon = number(*sw, "horizon", 0.0);
  sc.initial_thickness = number(*sw, "initial_thickness", 0.0);
  sc.fallback_thickness = number(*sw, "fallback_thickness", 1.0);
  sc.theta = number(*sw, "theta", sc.theta);
  sc.solver = parse_solver(text(*sw, "solver", "frontfix"));
  if (sc.solver == SolverChoice::both) fail("sweep.solver must be integral or frontfix");
  if (sc.horizon < 0.0 || sc.initial_thickness < 0.0 || !(sc.fallback_thickness > 0.0) ||
      !(sc.theta > 0.0)) {
    fail("sweep horizon/thickness/theta out of range");
  }
  for (const auto* axis : {&sc.sigma_bar, &sc.sigma_tilde, &sc.lambda}) {
    for (double v : *axis) {
      if (!(v > 0.0)) fail("sweep ranges must hold positive values");
    }
  }
  sc.frontfix.n_y = 128;
  sc.frontfix.dt = 1e-3;
  parse_numerics(j, sc.integral, sc.frontfix);
  if (const json* out = find(j, "outputs")) sc.output_dir = text(*out, "directory", "out");
  return sc;
}

json to_json(const FunctionSpec& spec) {
  return {{"preset", std::string(to_string(spec.preset))}, {"params", spec.params}};
}

json to_json(const ProblemData& p) {
  return {{"lambda", p.lambda}, {"sigma_tilde", p.sigma_tilde}, {"b", p.b},
          {"f", to_json(p.f)},   {"phi", to_json(p.phi)}};
}

}  // namespace fbp
