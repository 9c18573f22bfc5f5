#include "bsb/policy.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

namespace bsb {

ControlVector select_policy(std::span<const double> u, const Grid& grid,
                            const ModelParams& params, kernels::Exec exec) {
  if (u.size() != grid.n_space() + 1)
    throw std::invalid_argument("select_policy: vector length mismatch");
  ControlVector control;
  control.sigma.resize(grid.n_space() - 1);
  kernels::select_policy(grid.x, u, params.sigma_lo, params.sigma_hi,
                         control.sigma, exec);
  return control;
}

std::vector<double> solve_tridiagonal(const DiscreteOperator& op, double dt,
                                      std::vector<double> rhs,
                                      std::pair<double, double> dirichlet) {
  if (rhs.size() != op.size())
    throw std::invalid_argument("solve_tridiagonal: rhs length mismatch");
  for (double v : rhs)
    if (!std::isfinite(v))
      throw std::invalid_argument("solve_tridiagonal: non-finite rhs");
  for (std::size_t i = 0; i < op.size(); ++i)
    if (!std::isfinite(op.sub[i]) || !std::isfinite(op.diag[i]) ||
        !std::isfinite(op.super[i]))
      throw std::invalid_argument("solve_tridiagonal: non-finite bands");

  rhs.front() = dirichlet.first;
  rhs.back() = dirichlet.second;
  std::vector<double> u(rhs.size());
  kernels::thomas_solve(op.sub, op.diag, op.super, dt, rhs, u);
  return u;
}

double tridiagonal_residual(const DiscreteOperator& op, double dt,
                            std::span<const double> u,
                            std::span<const double> rhs) {
  const std::size_t n = op.size() - 1;
  double worst = std::abs(u[0] - rhs[0]);
  worst = std::max(worst, std::abs(u[n] - rhs[n]));
  for (std::size_t i = 1; i < n; ++i) {
    const double row = u[i] - dt * (op.sub[i] * u[i - 1] + op.diag[i] * u[i] +
                                    op.super[i] * u[i + 1]);
    worst = std::max(worst, std::abs(row - rhs[i]));
  }
  return worst;
}

PolicyIterateResult policy_iterate(std::span<const double> u_init,
                                   std::span<const double> rhs_bar,
                                   const Grid& grid, const ModelParams& params,
                                   double dt, const SolverOptions& opts) {
  if (!(opts.tolerance > 0.0) || !(opts.scale > 0.0) || opts.max_iter < 1)
    throw std::invalid_argument("policy_iterate: bad solver options");

  PolicyIterateResult result;
  std::vector<double> u(u_init.begin(), u_init.end());
  std::vector<double> rhs(rhs_bar.begin(), rhs_bar.end());
  const std::pair<double, double> dirichlet{rhs.front(), rhs.back()};
  std::optional<ControlVector> active;

  auto& report = result.report;
  for (;;) {
    ControlVector candidate = select_policy(u, grid, params, opts.exec);
    if (active && candidate == *active) {
      // Fixed point: the bands would not change, so the next solve would
      // return this iterate exactly.
      report.converged = true;
      report.final_residual = 0.0;
      break;
    }
    if (report.iterations >= opts.max_iter) {
      report.converged = false;
      break;
    }

    const DiscreteOperator op = assemble(grid, params, candidate, opts.exec);
    std::vector<double> next = solve_tridiagonal(op, dt, rhs, dirichlet);
    ++report.iterations;

    report.final_residual =
        kernels::max_rel_update(next, u, opts.scale, opts.exec);
    if (report.iterations >= 2)
      report.monotonicity_trace.push_back(
          kernels::min_diff(next, u, opts.exec));

    u = std::move(next);
    active = std::move(candidate);

    if (report.final_residual < opts.tolerance) {
      report.converged = true;
      break;
    }
  }

  result.u = std::move(u);
  result.control = std::move(*active);
  return result;
}

}  // namespace bsb
