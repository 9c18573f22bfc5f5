#include "bsb/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "bsb/discrete_operator.hpp"

namespace bsb {

SolverError::SolverError(std::size_t step_, PolicyIterationReport report_,
                         const std::string& what_)
    : std::runtime_error(what_), step(step_), report(std::move(report_)) {}

PriceSurface::PriceSurface(Side side_, Grid grid_, ModelParams params_,
                           double c_b_, SolverOptions opts_)
    : side(side_),
      grid(std::move(grid_)),
      params(params_),
      c_b(c_b_),
      opts(opts_) {
  values.resize((n_time() + 1) * (n_space() + 1));
  policies.resize(n_time() * (n_space() - 1));
  reports.reserve(n_time());
}

double PriceSurface::value_at(std::size_t level_index, double spot) const {
  const auto u = level(level_index);
  const auto& x = grid.x;
  if (spot < x.front() || spot > x.back())
    throw std::invalid_argument("spot outside the grid");
  auto it = std::upper_bound(x.begin(), x.end(), spot);
  if (it == x.begin()) return u[0];
  if (it == x.end()) return u[x.size() - 1];
  const std::size_t j = static_cast<std::size_t>(it - x.begin()) - 1;
  const double w = (spot - x[j]) / (x[j + 1] - x[j]);
  return (1.0 - w) * u[j] + w * u[j + 1];
}

StepResult step(std::span<const double> level_values, std::size_t n,
                const Grid& grid, const CharacteristicFeet& feet,
                const ModelParams& params, const BoundarySpec& boundary,
                const SolverOptions& opts) {
  const double dt = grid.dt[n];
  const double max_val = kernels::max_abs(level_values, opts.exec);
  if (!std::isfinite(max_val))
    throw std::invalid_argument("step: non-finite values at level " +
                                std::to_string(n));

  std::vector<double> ubar(level_values.size());
  interpolate_at_feet(level_values, feet, n, boundary.dirichlet(n + 1),
                      params.rate, dt, ubar, opts.exec);

  PolicyIterateResult it =
      policy_iterate(level_values, ubar, grid, params, dt, opts);
  if (!it.report.converged) {
    std::ostringstream msg;
    msg << "policy iteration failed to converge at step " << n + 1 << " ("
        << it.report.iterations << " iterations, residual "
        << it.report.final_residual << ")";
    throw SolverError(n + 1, it.report, msg.str());
  }
  return {std::move(it.u), std::move(it.control), std::move(it.report)};
}

namespace {

PriceSurface solve_ask(const Payoff& payoff, const ModelParams& params,
                       const BoundarySpec& boundary, const Grid& grid,
                       const SolverOptions& opts) {
  const std::size_t n_nodes = grid.n_space() + 1;
  const std::size_t m = grid.n_time();

  if (boundary.far_field.levels() != 1 &&
      boundary.far_field.levels() != m + 1)
    throw std::invalid_argument(
        "far-field tables must have one entry per time level");
  if (std::abs(grid.s_max() - boundary.s_max) != 0.0)
    throw std::invalid_argument("grid and boundary disagree on S_max");

  PriceSurface surface(Side::ask, grid, params, boundary.bound, opts);

  auto level0 = surface.level(0);
  for (std::size_t i = 0; i < n_nodes; ++i) level0[i] = payoff(grid.x[i]);

  const CharacteristicFeet feet =
      characteristic_feet(grid, params.rate, opts.exec);
  for (std::size_t n = 0; n < m; ++n) {
    StepResult res =
        step(surface.level(n), n, grid, feet, params, boundary, opts);
    std::copy(res.u.begin(), res.u.end(), surface.level(n + 1).begin());
    std::copy(res.control.sigma.begin(), res.control.sigma.end(),
              surface.policies.begin() + n * (grid.n_space() - 1));
    surface.reports.push_back(std::move(res.report));
  }
  return surface;
}

}  // namespace

PriceSurface solve(const Payoff& payoff, const ModelParams& params,
                   const BoundarySpec& boundary, const Grid& grid,
                   const SolverOptions& opts) {
  if (payoff.side() == Side::ask)
    return solve_ask(payoff, params, boundary, grid, opts);

  // Bid: negate payoff and far field, solve as ask, negate the result.
  PriceSurface surface =
      solve_ask(payoff.negated(), params, boundary.negated(), grid, opts);
  kernels::negate(surface.values, surface.values, opts.exec);
  surface.side = Side::bid;
  return surface;
}

StabilityReport stability_audit(const PriceSurface& surface) {
  StabilityReport report;
  const double u0 = kernels::serial::max_abs(surface.level(0));
  report.bound = std::max(u0, surface.c_b);
  report.margins.resize(surface.n_time() + 1);
  report.min_margin = std::numeric_limits<double>::infinity();
  for (std::size_t n = 0; n <= surface.n_time(); ++n) {
    const double margin =
        report.bound - kernels::serial::max_abs(surface.level(n));
    report.margins[n] = margin;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.argmin_level = n;
    }
    if (margin < 0.0) report.pass = false;
  }
  return report;
}

std::string StabilityReport::to_string() const {
  std::ostringstream os;
  os << "stability: " << (pass ? "pass" : "FAIL") << " (bound " << bound
     << ", tightest margin " << min_margin << " at level " << argmin_level
     << ")";
  return os.str();
}

MMatrixAudit m_matrix_audit(const PriceSurface& surface) {
  MMatrixAudit audit;
  for (std::size_t n = 1; n <= surface.n_time(); ++n) {
    ControlVector control;
    const auto policy = surface.policy_for_level(n);
    control.sigma.assign(policy.begin(), policy.end());
    const DiscreteOperator op =
        assemble(surface.grid, surface.params, control);
    if (!m_matrix_check(op, surface.grid.dt[n - 1]).pass) {
      audit.pass = false;
      audit.failed_steps.push_back(n);
    }
  }
  return audit;
}

std::string MMatrixAudit::to_string() const {
  std::ostringstream os;
  if (pass) return "M-matrix audit: pass at every step";
  os << "M-matrix audit: FAIL at steps";
  for (std::size_t s : failed_steps) os << ' ' << s;
  return os.str();
}

}  // namespace bsb
