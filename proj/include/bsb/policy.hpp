#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "bsb/discrete_operator.hpp"
#include "bsb/grid.hpp"
#include "bsb/kernels.hpp"
#include "bsb/model.hpp"

namespace bsb {

struct SolverOptions {
  double tolerance = 1e-6;
  double scale = 1.0;
  std::size_t max_iter = 100;
  kernels::Exec exec = kernels::Exec::parallel;
};

/// Control selection from discrete curvature: sigma_hi where the divided
/// second difference is >= 0, sigma_lo where it is negative. The tie at
/// exactly zero goes to sigma_hi; tests depend on that.
ControlVector select_policy(std::span<const double> u, const Grid& grid,
                            const ModelParams& params,
                            kernels::Exec exec = kernels::Exec::serial);

/// Solves [I - dt*A]u = rhs by elimination without pivoting after writing
/// the boundary values into rhs[0] and rhs[N] (those rows are the identity).
/// Safe without pivoting because the system is an M-matrix; pivots are still
/// checked finite.
std::vector<double> solve_tridiagonal(const DiscreteOperator& op, double dt,
                                      std::vector<double> rhs,
                                      std::pair<double, double> dirichlet);

/// Max-norm of rhs - [I - dt*A]u, for diagnostics.
double tridiagonal_residual(const DiscreteOperator& op, double dt,
                            std::span<const double> u,
                            std::span<const double> rhs);

struct PolicyIterationReport {
  std::size_t iterations = 0;      // number of linear solves
  double final_residual = 0.0;     // max relative update at exit
  bool converged = false;
  // min_i (u^{k+1}-u^k) for the second and later solves; the theory makes
  // these nonnegative up to roundoff (the first solve starts from an
  // arbitrary iterate and is not covered).
  std::vector<double> monotonicity_trace;
};

struct PolicyIterateResult {
  std::vector<double> u;
  ControlVector control;
  PolicyIterationReport report;
};

/// One timestep of the nonlinear solve: alternate select_policy with
/// tridiagonal solves of [I - dt*A(sigma)]u = rhs_bar until the relative
/// update max_i |u^{k+1}_i - u^k_i| / max(scale, |u^{k+1}_i|) drops below
/// tolerance. A repeated policy ends the iteration immediately: re-solving
/// the identical system would reproduce the iterate bit for bit.
///
/// rhs_bar must carry the boundary values in its first and last entries.
/// Non-convergence within max_iter is reported, not thrown.
PolicyIterateResult policy_iterate(std::span<const double> u_init,
                                   std::span<const double> rhs_bar,
                                   const Grid& grid, const ModelParams& params,
                                   double dt, const SolverOptions& opts);

}  // namespace bsb
