#pragma once

// Command-line front end. Subcommands: example51, solve, ml-eval, roots,
// stability-map, certify. Exit codes: 0 success, 1 numerical failure, 2 usage error.

#include <cstdint>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "fdde/core.hpp"
#include "fdde/kernel.hpp"
#include "fdde/solver.hpp"

namespace fdde::cli {

enum ExitCode : int { kOk = 0, kNumericalFailure = 1, kUsageError = 2 };

struct RunConfig {
  ProblemParams problem{0.5, -5.0, 0.5, 1.0};
  std::string nonlinearity = "example51";   // zero | example51 | polynomial
  std::vector<std::string> terms;           // "c,i,j" for c x^i y^j
  std::vector<std::string> history{"const", "0.6"};  // const c | affine p q  (phi(t) = p t + q)
  double h = 1.0 / 64.0;
  double t_end = 20.0;
  int corrector_iters = 1;
  double mu = 1.0;
  double theta = std::numbers::pi / 2 + 0.3;
  std::string out_dir = ".";
  std::uint64_t seed = 20240601;

  /// Each throws DomainError naming the offending field.
  [[nodiscard]] Nonlinearity make_nonlinearity() const;
  [[nodiscard]] HistoryFunction make_history() const;
  [[nodiscard]] SolveConfig solve_config() const;
  [[nodiscard]] ContourSpec contour() const;
};

/// Parses argv (argv[0] is the program name), runs the subcommand, returns the exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace fdde::cli
