#pragma once

// Subcommands behind the `fbp` executable. Each returns the process exit
// status and writes human-readable progress to `out`, problems to `err`.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "fbp/problem.hpp"

namespace fbp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitValidation = 4;

int cmd_solve(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Prints b_bar to 12 significant digits and writes stationary.csv (256
/// points on [0, b_bar]) into `dir`.
int cmd_stationary(double lambda, double sigma_bar, double sigma_tilde,
                   const std::filesystem::path& dir, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

/// Re-checks a boundary.csv (and any snapshot_*.csv beside it) against the
/// problem in `config`.
int cmd_validate(const std::filesystem::path& boundary_csv, const std::filesystem::path& config,
                 std::ostream& out, std::ostream& err);

/// Argument parsing and dispatch.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

// CSV helpers (header line, %.15g, LF).
void write_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);
std::vector<std::vector<double>> read_csv(const std::filesystem::path& path,
                                          std::vector<std::string>* header = nullptr);
std::string format_number(double v);

/// Primal solution made of the boundary columns of `boundary_csv` plus any
/// snapshot_<t>.csv files in the same directory.
FreeBoundarySolution load_solution(const std::filesystem::path& boundary_csv);

}  // namespace fbp::cli
