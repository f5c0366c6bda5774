#pragma once

// JSON run configuration.
//
//   {
//     "problem": {"lambda": 1, "sigma_tilde": 0.5, "b": 1,
//                 "f":   {"preset": "exp_decay", "params": [1, 1]},
//                 "phi": {"preset": "constant",  "params": [1]}},
//     "flags":   {"strict_positivity": true},
//     "solver":  "integral" | "frontfix" | "both",
//     "numerics": {"dt": 1e-3, "window": 0.1, "picard_tol": 1e-10, "picard_max": 100,
//                  "contraction_max": 0.9, "horizon": 2, "spatial_points": 0,
//                  "frontfix": {"n_y": 256, "dt": 1e-4, "scheme": "implicit"}},
//     "outputs": {"snapshot_times": [0.5, 1], "directory": "out", "formats": ["csv", "json"]},
//     "validation": {"field_bounds": true, "boundary_bounds": true,
//                    "s_second_derivative": true, "cross_tolerance": 1e-2}
//   }
//
// "b" may also be the string "dormant", meaning the dormant thickness for
// f = constant. Sweeps add a "sweep" section, see SweepConfig.

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fbp/frontfix.hpp"
#include "fbp/problem.hpp"
#include "fbp/volterra.hpp"

namespace fbp {

enum class SolverChoice { integral, frontfix, both };

struct ValidationToggles {
  bool field_bounds = true;
  bool boundary_bounds = true;
  bool s_second_derivative = true;
  double cross_tolerance = 1e-2;  // sup-relative s disagreement when solver = both
};

struct RunConfig {
  ProblemData problem;
  bool strict_positivity = true;
  SolverChoice solver = SolverChoice::integral;
  SolverConfig integral;
  frontfix::Config frontfix;
  std::vector<double> snapshot_times;
  std::filesystem::path output_dir = "out";
  bool write_csv = true;
  bool write_json = true;
  ValidationToggles checks;
};

struct SweepConfig {
  std::vector<double> sigma_bar, sigma_tilde, lambda;
  double horizon = 0.0;             // 0 selects 5 / sigma_tilde per cell
  double initial_thickness = 0.0;   // 0 selects the dormant thickness when it exists
  double fallback_thickness = 1.0;  // used when no dormant state exists
  double theta = 0.02;
  SolverChoice solver = SolverChoice::frontfix;
  SolverConfig integral;
  frontfix::Config frontfix;
  std::filesystem::path output_dir = "out";
};

/// Throw ConfigError with the offending key on any schema problem.
RunConfig parse_run_config(const nlohmann::json& j);
SweepConfig parse_sweep_config(const nlohmann::json& j);
nlohmann::json load_json(const std::filesystem::path& path);

nlohmann::json to_json(const FunctionSpec& spec);
nlohmann::json to_json(const ProblemData& p);
std::string_view to_string(SolverChoice s);

}  // namespace fbp
