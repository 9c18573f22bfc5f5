#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "bsb/grid.hpp"
#include "bsb/model.hpp"
#include "bsb/policy.hpp"

namespace bsb {

/// A timestep failed to converge; carries the step index and the report.
struct SolverError : std::runtime_error {
  SolverError(std::size_t step_, PolicyIterationReport report_,
              const std::string& what_);
  std::size_t step;
  PolicyIterationReport report;
};

/// Solved lattice u_i^n for all nodes and time-to-maturity levels (level 0
/// is the payoff), the per-step selected policies and iteration reports,
/// plus everything the audits need to rerun the structure checks.
struct PriceSurface {
  PriceSurface(Side side_, Grid grid_, ModelParams params_, double c_b_,
               SolverOptions opts_);

  Side side;
  Grid grid;
  ModelParams params;
  double c_b;
  SolverOptions opts;

  std::vector<double> values;    // (n_time+1) x (n_space+1), row-major
  std::vector<double> policies;  // n_time x (n_space-1), step n-1 -> level n
  std::vector<PolicyIterationReport> reports;  // one per step

  std::size_t n_space() const { return grid.n_space(); }
  std::size_t n_time() const { return grid.n_time(); }

  std::span<const double> level(std::size_t n) const {
    return {values.data() + n * (n_space() + 1), n_space() + 1};
  }
  std::span<double> level(std::size_t n) {
    return {values.data() + n * (n_space() + 1), n_space() + 1};
  }
  /// Policy that produced level n (n >= 1).
  std::span<const double> policy_for_level(std::size_t n) const {
    return {policies.data() + (n - 1) * (n_space() - 1), n_space() - 1};
  }

  /// Linear interpolation in s at a given level.
  double value_at(std::size_t level_index, double spot) const;
};

struct StepResult {
  std::vector<double> u;
  ControlVector control;
  PolicyIterationReport report;
};

/// One implicit characteristic step from level n to n+1: interpolate at the
/// characteristic feet (with the new-level far-field value in the last
/// slot), then run the policy iteration started from the current level.
/// Throws SolverError on non-convergence.
StepResult step(std::span<const double> level_values, std::size_t n,
                const Grid& grid, const CharacteristicFeet& feet,
                const ModelParams& params, const BoundarySpec& boundary,
                const SolverOptions& opts);

/// Full march from the payoff at tau=0 to tau=T. The bid is solved as the
/// negated ask of the negated payoff (far field negated alongside), so the
/// two sides agree bit for bit with that identity. The recorded policies of
/// a bid surface are those of the internal negated solve.
PriceSurface solve(const Payoff& payoff, const ModelParams& params,
                   const BoundarySpec& boundary, const Grid& grid,
                   const SolverOptions& opts);

struct StabilityReport {
  double bound = 0.0;        // max(||U^0||_inf, C_b)
  double min_margin = 0.0;   // min over levels of bound - ||U^n||_inf
  std::size_t argmin_level = 0;
  bool pass = true;
  std::vector<double> margins;

  std::string to_string() const;
};

/// Checks ||U^n||_inf <= max(||U^0||_inf, C_b) at every level.
StabilityReport stability_audit(const PriceSurface& surface);

struct MMatrixAudit {
  bool pass = true;
  std::vector<std::size_t> failed_steps;
  std::string to_string() const;
};

/// Reassembles the recorded per-step operator and audits I - dt*A for every
/// step of the march.
MMatrixAudit m_matrix_audit(const PriceSurface& surface);

}  // namespace bsb
