#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "bsb/config.hpp"
#include "bsb/stepper.hpp"

namespace bsb {

// Exit codes shared by the CLI and the command functions.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_solver_error = 3;
inline constexpr int exit_io_error = 4;
inline constexpr int exit_validation_failed = 5;

struct CliOverrides {
  std::optional<std::string> out_dir;
  std::optional<SideChoice> side;
  std::optional<double> spot;
  bool check = false;   // per-step M-matrix + stability audit
  bool serial = false;  // force the serial backend
};

RunConfig apply_overrides(RunConfig config, const CliOverrides& overrides);

/// Solve the configured sides, write surfaces, print the t=0 readout.
int cmd_price(const RunConfig& config, std::ostream& out, std::ostream& err);

struct ConvergenceRow {
  std::size_t n_space = 0;
  std::size_t n_time = 0;
  double price = 0.0;
  double reference = 0.0;
  double abs_error = 0.0;
  std::optional<double> observed_order;
};

struct ConvergenceTable {
  Side side = Side::ask;
  double spot = 0.0;
  double sigma_reference = 0.0;
  std::vector<ConvergenceRow> rows;
};

/// Dyadic refinement study against the closed-form reference. Requires a
/// payoff with a computable reference: a convex/concave payoff priced at the
/// matching band endpoint, or a degenerate band (sigma_lo == sigma_hi).
ConvergenceTable converge_study(const RunConfig& config, std::size_t levels,
                                Side side);

int cmd_converge(const RunConfig& config, std::size_t levels,
                 std::ostream& out, std::ostream& err);

/// Runs the invariant battery on the configured problem; exit 5 when a hard
/// invariant (M-matrix, stability, nondecreasing iterates, bid <= ask)
/// fails.
int cmd_validate(const RunConfig& config, std::ostream& out,
                 std::ostream& err);

}  // namespace bsb
